#pragma once

#include "swkernel/algebra.hpp"
#include "swkernel/io.hpp"
#include "swkernel/kernels.hpp"
#include "swkernel/moduli.hpp"
#include "swkernel/orbits.hpp"
#include "swkernel/wigner.hpp"
