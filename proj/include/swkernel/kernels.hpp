#pragma once

// SW kernels: construction from moduli points and unitaries, the algebraic
// master equations tr(D) = 1 and tr(D^2) = N, and the closed-form kernel
// families of 2-, 3- and 4-level systems.
//
// A kernel built from a moduli point is
//
//   D = (1/N) U [ I + kappa sum_s mu_{s^2-1} l_{s^2-1} ] U^dag
//
// with kappa = sqrt(N(N^2-1)/2) and l_{s^2-1} the Cartan generators.

#include "swkernel/algebra.hpp"
#include "swkernel/moduli.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace swk {

inline constexpr double kMasterPassTol = 1e-9;
inline constexpr double kKernelBuildTol = 1e-10;
inline constexpr double kSingularTol = 1e-9;

struct MasterReport {
    double trace_residual = 0.0;
    double trace_sq_residual = 0.0;
    bool pass = false;
};

// Residuals of tr(m) = 1 and tr(m^2) = N; pass iff both below 1e-9.
inline MasterReport verify_master(const Matrix& m) {
    if (!is_hermitian(m, 1e-10))
        throw std::invalid_argument("verify_master: input is not Hermitian");
    const double n = static_cast<double>(m.rows());
    MasterReport rep;
    rep.trace_residual = std::abs(m.trace().real() - 1.0) + std::abs(m.trace().imag());
    rep.trace_sq_residual = std::abs((m * m).trace().real() - n);
    rep.pass = rep.trace_residual < kMasterPassTol && rep.trace_sq_residual < kMasterPassTol;
    return rep;
}

inline MasterReport verify_master(const HermitianMatrix& m) {
    return verify_master(m.matrix());
}

// ---------------------------------------------------------------------------
// SWKernel
// ---------------------------------------------------------------------------

struct SWKernel {
    int dim = 0;
    Matrix matrix;
    OrderedSpectrum spectrum;
    std::optional<ModuliPoint> moduli;
};

inline SWKernel build_kernel(const ModuliPoint& point, const Matrix& u,
                             const GellMannBasis& basis) {
    const int n = point.dim;
    if (basis.dim() != n || u.rows() != n || u.cols() != n)
        throw std::invalid_argument("build_kernel: dimension mismatch");
    if (!is_unitary(u))
        throw std::invalid_argument("build_kernel: phase-point matrix is not unitary");

    Matrix p = Matrix::Identity(n, n);
    const double kappa = kernel_kappa(n);
    for (int s = 2; s <= n; ++s)
        p += kappa * point.mu[static_cast<std::size_t>(s - 2)] * basis.cartan(s);
    p /= static_cast<double>(n);

    Matrix delta = u * p * u.adjoint();
    const MasterReport rep = verify_master(delta);
    if (rep.trace_residual > kKernelBuildTol || rep.trace_sq_residual > kKernelBuildTol)
        throw std::runtime_error("build_kernel: master equations violated");
    return SWKernel{n, std::move(delta), mu_to_spectrum(point.mu, n), point};
}

inline SWKernel build_kernel(const ModuliPoint& point, const Matrix& u) {
    return build_kernel(point, u, GellMannBasis(point.dim));
}

// Accepts a raw Hermitian matrix as a kernel iff the master equations hold;
// spectrum is recomputed and no moduli point is attached.
inline SWKernel kernel_from_matrix(const Matrix& m) {
    const MasterReport rep = verify_master(m);
    if (!rep.pass)
        throw std::invalid_argument(
            "kernel_from_matrix: master equations violated (trace residual " +
            std::to_string(rep.trace_residual) + ", trace-square residual " +
            std::to_string(rep.trace_sq_residual) + ")");
    const SpectralDecomposition sd = spectral_decompose(m);
    std::vector<double> eig(sd.eigenvalues.data(),
                            sd.eigenvalues.data() + sd.eigenvalues.size());
    return SWKernel{static_cast<int>(m.rows()), 0.5 * (m + m.adjoint().eval()),
                    OrderedSpectrum(std::move(eig), 1e-8), std::nullopt};
}

// Recovers the moduli coefficients of a descending spectrum via
// mu_{s^2-1} = N tr(diag(pi) l_{s^2-1}) / (2 kappa).
inline std::vector<double> mu_from_spectrum(const OrderedSpectrum& spec,
                                            const GellMannBasis& basis) {
    const int n = spec.dim();
    const double kappa = kernel_kappa(n);
    std::vector<double> mu(static_cast<std::size_t>(n - 1), 0.0);
    for (int s = 2; s <= n; ++s) {
        double tr = 0.0;
        for (int i = 0; i < n; ++i)
            tr += spec[i] * basis.cartan(s)(i, i).real();
        mu[static_cast<std::size_t>(s - 2)] = n * tr / (2.0 * kappa);
    }
    return mu;
}

// ---------------------------------------------------------------------------
// Named kernel families
// ---------------------------------------------------------------------------

enum class FamilyId {
    Qubit,            // N=2, parameter free
    Qutrit,           // N=3, nu in [-1, -1/3]
    QutritGolden,     // N=3, singular, nu = (1-sqrt(5))/2
    QuatritRegular,   // N=4, (nu1, nu2) in the curvilinear triangle
    Quatrit1_234,     // N=4, nu in [(1-sqrt(15))/4, (1+sqrt(5))/4]
    Quatrit12_34,     // N=4, nu in [(1-sqrt(5))/4, (1+sqrt(5))/4]
    Quatrit123_4,     // N=4, nu in [(1-sqrt(15))/4, (1-sqrt(5))/4]
    Quatrit1_2_34,    // N=4, triple degeneracy, vertex B
    Quatrit12_3_4,    // N=4, triple degeneracy, vertex A
    Quatrit1_23_4,    // N=4, two double degeneracies, vertex C
    Quatrit1204,      // N=4, singular, nu in [(1-sqrt(22))/3, (1-sqrt(7))/2)
    Quatrit1034,      // N=4, singular, nu in [(2-sqrt(22))/6, 0)
    Quatrit1004,      // N=4, singular with double zero
};

struct KernelFamily {
    FamilyId id = FamilyId::Qubit;
    double nu1 = 0.0;
    double nu2 = 0.0;
};

inline int family_dim(FamilyId id) {
    switch (id) {
        case FamilyId::Qubit: return 2;
        case FamilyId::Qutrit:
        case FamilyId::QutritGolden: return 3;
        default: return 4;
    }
}

inline std::string family_name(FamilyId id) {
    switch (id) {
        case FamilyId::Qubit: return "qubit";
        case FamilyId::Qutrit: return "qutrit";
        case FamilyId::QutritGolden: return "golden";
        case FamilyId::QuatritRegular: return "regular";
        case FamilyId::Quatrit1_234: return "1|234";
        case FamilyId::Quatrit12_34: return "12|34";
        case FamilyId::Quatrit123_4: return "123|4";
        case FamilyId::Quatrit1_2_34: return "1|2|34";
        case FamilyId::Quatrit12_3_4: return "12|3|4";
        case FamilyId::Quatrit1_23_4: return "1|23|4";
        case FamilyId::Quatrit1204: return "1204";
        case FamilyId::Quatrit1034: return "1034";
        case FamilyId::Quatrit1004: return "1004";
    }
    return "?";
}

namespace detail {

inline constexpr double kIntervalMargin = 1e-12;

inline void require_window(double nu, double lo, double hi, const std::string& family,
                           const std::string& printed) {
    if (nu < lo - kIntervalMargin || nu > hi + kIntervalMargin)
        throw std::domain_error("family " + family + ": parameter " +
                                std::to_string(nu) + " outside validity interval " +
                                printed);
}

// Discriminants are clamped at zero before the square root so interval
// endpoints survive roundoff.
inline double clamped_sqrt(double x) { return std::sqrt(std::max(0.0, x)); }

}  // namespace detail

// Closed-form spectrum of a named family, in descending order.  Endpoint
// parameter values reproduce the adjacent degenerate family exactly.
inline OrderedSpectrum family_spectrum(const KernelFamily& f) {
    const double s5 = std::sqrt(5.0);
    const double s7 = std::sqrt(7.0);
    const double s15 = std::sqrt(15.0);
    const double s22 = std::sqrt(22.0);
    const double nu = f.nu1;

    switch (f.id) {
        case FamilyId::Qubit: {
            const double s3 = std::sqrt(3.0);
            return OrderedSpectrum({(1.0 + s3) / 2.0, (1.0 - s3) / 2.0});
        }
        case FamilyId::Qutrit: {
            detail::require_window(nu, -1.0, -1.0 / 3.0, "qutrit", "(-1, -1/3)");
            const double d = detail::clamped_sqrt((1.0 + nu) * (5.0 - 3.0 * nu));
            return OrderedSpectrum({(1.0 - nu + d) / 2.0, (1.0 - nu - d) / 2.0, nu});
        }
        case FamilyId::QutritGolden: {
            // nu = (1-sqrt(5))/2 is the only admissible zero of det
            return OrderedSpectrum({(1.0 + s5) / 2.0, 0.0, (1.0 - s5) / 2.0});
        }
        case FamilyId::QuatritRegular: {
            const double nu1 = f.nu1, nu2 = f.nu2;
            const double disc = 7.0 + 2.0 * nu1 - 3.0 * nu1 * nu1 + 2.0 * nu2 -
                                2.0 * nu1 * nu2 - 3.0 * nu2 * nu2;
            const double d = detail::clamped_sqrt(disc);
            const double top = (1.0 - nu1 - nu2 + d) / 2.0;
            const double low = (1.0 - nu1 - nu2 - d) / 2.0;
            if (disc < -detail::kIntervalMargin || low < nu1 - detail::kIntervalMargin ||
                nu1 < nu2 - detail::kIntervalMargin)
                throw std::domain_error(
                    "family regular: (nu1, nu2) outside the curvilinear triangle ABC");
            return OrderedSpectrum({top, low, nu1, nu2});
        }
        case FamilyId::Quatrit1_234: {
            detail::require_window(nu, (1.0 - s15) / 4.0, (1.0 + s5) / 4.0, "1|234",
                                   "((1-sqrt(15))/4, (1+sqrt(5))/4)");
            const double d1 = detail::clamped_sqrt(22.0 + 4.0 * nu - 8.0 * nu * nu);
            const double dbl = (1.0 - nu) / 3.0 + d1 / 6.0;
            return OrderedSpectrum({dbl, dbl, nu, (1.0 - nu - d1) / 3.0});
        }
        case FamilyId::Quatrit12_34: {
            detail::require_window(nu, (1.0 - s5) / 4.0, (1.0 + s5) / 4.0, "12|34",
                                   "((1-sqrt(5))/4, (1+sqrt(5))/4)");
            const double d2 = detail::clamped_sqrt(7.0 + 4.0 * nu - 8.0 * nu * nu);
            return OrderedSpectrum(
                {(1.0 - 2.0 * nu + d2) / 2.0, nu, nu, (1.0 - 2.0 * nu - d2) / 2.0});
        }
        case FamilyId::Quatrit123_4: {
            detail::require_window(nu, (1.0 - s15) / 4.0, (1.0 - s5) / 4.0, "123|4",
                                   "((1-sqrt(15))/4, (1-sqrt(5))/4)");
            const double d2 = detail::clamped_sqrt(7.0 + 4.0 * nu - 8.0 * nu * nu);
            return OrderedSpectrum(
                {(1.0 - 2.0 * nu + d2) / 2.0, (1.0 - 2.0 * nu - d2) / 2.0, nu, nu});
        }
        case FamilyId::Quatrit1_2_34:
            return OrderedSpectrum({(1.0 + s5) / 4.0, (1.0 + s5) / 4.0, (1.0 + s5) / 4.0,
                                    (1.0 - 3.0 * s5) / 4.0});
        case FamilyId::Quatrit12_3_4:
            return OrderedSpectrum({(1.0 + 3.0 * s5) / 4.0, (1.0 - s5) / 4.0,
                                    (1.0 - s5) / 4.0, (1.0 - s5) / 4.0});
        case FamilyId::Quatrit1_23_4:
            return OrderedSpectrum({(1.0 + s15) / 4.0, (1.0 + s15) / 4.0,
                                    (1.0 - s15) / 4.0, (1.0 - s15) / 4.0});
        case FamilyId::Quatrit1204: {
            detail::require_window(nu, (1.0 - s22) / 3.0, (1.0 - s7) / 2.0, "1204",
                                   "[(1-sqrt(22))/3, (1-sqrt(7))/2)");
            const double d = detail::clamped_sqrt(7.0 + 2.0 * nu - 3.0 * nu * nu);
            return OrderedSpectrum({(1.0 - nu + d) / 2.0, (1.0 - nu - d) / 2.0, 0.0, nu});
        }
        case FamilyId::Quatrit1034: {
            detail::require_window(nu, (2.0 - s22) / 6.0, 0.0, "1034",
                                   "[(2-sqrt(22))/6, 0)");
            const double d = detail::clamped_sqrt(7.0 + 2.0 * nu - 3.0 * nu * nu);
            return OrderedSpectrum({(1.0 - nu + d) / 2.0, 0.0, nu, (1.0 - nu - d) / 2.0});
        }
        case FamilyId::Quatrit1004:
            return OrderedSpectrum({(1.0 + s7) / 2.0, 0.0, 0.0, (1.0 - s7) / 2.0});
    }
    throw std::logic_error("family_spectrum: unknown family");
}

// Kernel realizing a named family: diag(spectrum) conjugated by u, with the
// matching moduli point attached.
inline SWKernel kernel_from_family(const KernelFamily& f, const Matrix& u) {
    const int n = family_dim(f.id);
    if (u.rows() != n || u.cols() != n)
        throw std::invalid_argument("kernel_from_family: dimension mismatch");
    const OrderedSpectrum spec = family_spectrum(f);
    const GellMannBasis basis(n);
    const std::vector<double> mu = mu_from_spectrum(spec, basis);
    Matrix d = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = spec[i];
    return SWKernel{n, u * d * u.adjoint(), spec,
                    ModuliPoint{n, angles_from_mu(mu, n), mu}};
}

inline SWKernel kernel_from_family(const KernelFamily& f) {
    return kernel_from_family(f, Matrix::Identity(family_dim(f.id), family_dim(f.id)));
}

// ---------------------------------------------------------------------------
// Singular kernels
// ---------------------------------------------------------------------------

struct SingularReport {
    double min_abs_eigenvalue = 0.0;
    int zero_multiplicity = 0;
};

inline SingularReport detect_singular(const SWKernel& k) {
    SingularReport rep;
    rep.min_abs_eigenvalue = std::numeric_limits<double>::infinity();
    for (double v : k.spectrum.values()) {
        rep.min_abs_eigenvalue = std::min(rep.min_abs_eigenvalue, std::abs(v));
        if (std::abs(v) < kSingularTol) ++rep.zero_multiplicity;
    }
    return rep;
}

// tr(D^n) for the golden-ratio qutrit kernel, n = 2..max_n.  The values are
// the Lucas numbers: phi^n + (1-phi)^n with phi the golden ratio.
inline std::vector<double> lucas_traces(int max_n) {
    if (max_n < 2)
        throw std::invalid_argument("lucas_traces: max_n must be >= 2");
    const OrderedSpectrum spec = family_spectrum({FamilyId::QutritGolden});
    std::vector<double> powers(spec.values().begin(), spec.values().end());
    std::vector<double> traces;
    traces.reserve(static_cast<std::size_t>(max_n - 1));
    for (int n = 2; n <= max_n; ++n) {
        double tr = 0.0;
        for (std::size_t i = 0; i < powers.size(); ++i) {
            powers[i] *= spec[static_cast<int>(i)];
            tr += powers[i];
        }
        traces.push_back(tr);
    }
    return traces;
}

}  // namespace swk
