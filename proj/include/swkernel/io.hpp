#pragma once

// File formats shared by the library and the CLI.
//
// Matrices (states and kernels) travel as JSON objects
//
//   { "dim": N, "re": [N*N row-major], "im": [N*N row-major] }
//
// which is lossless and language neutral.  CSV output fixes numbers at 17
// significant digits so repeated runs are byte identical.

#include "swkernel/algebra.hpp"
#include "swkernel/wigner.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace swk {

using Json = nlohmann::ordered_json;

inline Json matrix_to_json(const Matrix& m) {
    Json j;
    j["dim"] = m.rows();
    std::vector<double> re, im;
    re.reserve(static_cast<std::size_t>(m.size()));
    im.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re.push_back(m(r, c).real());
            im.push_back(m(r, c).imag());
        }
    j["re"] = re;
    j["im"] = im;
    return j;
}

inline Matrix matrix_from_json(const Json& j) {
    if (!j.contains("dim") || !j.contains("re") || !j.contains("im"))
        throw std::invalid_argument("matrix file: expected fields dim, re, im");
    const int n = j.at("dim").get<int>();
    if (n < 1)
        throw std::invalid_argument("matrix file: dim must be positive");
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (static_cast<int>(re.size()) != n * n || static_cast<int>(im.size()) != n * n)
        throw std::invalid_argument("matrix file: re/im must hold dim*dim entries");
    Matrix m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const std::size_t idx = static_cast<std::size_t>(r) * n + c;
            m(r, c) = Complex(re[idx], im[idx]);
        }
    return m;
}

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open file: " + path);
    Json j;
    in >> j;
    return j;
}

inline Matrix load_matrix(const std::string& path) {
    return matrix_from_json(load_json(path));
}

inline DensityMatrix load_density_matrix(const std::string& path) {
    return DensityMatrix(load_matrix(path));
}

inline void save_json(const Json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

// 17 significant digits: shortest representation that round-trips a double.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace swk
