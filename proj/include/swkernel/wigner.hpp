#pragma once

// Wigner quasiprobability as a dual pairing W_rho = tr(rho D), the equivalent
// Bloch/Cartan evaluation, and Monte-Carlo verification of state
// reconstruction and of fourth-moment Haar integrals.
//
// Bloch expansion of a state (b = sqrt(N(N-1)/2)):
//
//   rho = (1/N) [ I + b (xi, l) ],     xi_a = tr(rho l_a) sqrt(N/(2(N-1)))
//
// Cartan form of the pairing:
//
//   W = (1/N) [ 1 + (N^2-1)/sqrt(N+1) (n, xi) ],
//   n_m = sum_s mu_{s^2-1} n^(s^2-1)_m,
//   n^(s^2-1)_m = (1/2) tr(U l_{s^2-1} U^dag l_m).
//
// Reconstruction uses the group-extended integral with Z_N = 1/N:
//
//   rho = N E_U [ D(U) tr(rho D(U)) ],   D(U) = U diag(pi) U^dag,
//
// an identity of the degree-(2,2) Haar moments (Weingarten formula).

#include "swkernel/algebra.hpp"
#include "swkernel/kernels.hpp"
#include "swkernel/moduli.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace swk {

inline constexpr double kDensityTraceTol = 1e-12;
inline constexpr double kDensityPsdTol = 1e-10;

// Positive-semidefinite Hermitian matrix with unit trace.
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix m) : herm_(std::move(m)) {
        const double tr = herm_.matrix().trace().real();
        if (std::abs(tr - 1.0) > kDensityTraceTol)
            throw std::invalid_argument("DensityMatrix: trace residual " +
                                        std::to_string(std::abs(tr - 1.0)));
        Eigen::SelfAdjointEigenSolver<Matrix> solver(herm_.matrix(),
                                                     Eigen::EigenvaluesOnly);
        const double min_eig = solver.eigenvalues().minCoeff();
        if (min_eig < -kDensityPsdTol)
            throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                        std::to_string(min_eig));
    }

    int dim() const { return herm_.dim(); }
    const Matrix& matrix() const { return herm_.matrix(); }

private:
    HermitianMatrix herm_;
};

struct BlochVector {
    RealVector xi;  // N^2-1 coefficients in basis order
};

inline BlochVector to_bloch(const DensityMatrix& rho, const GellMannBasis& basis) {
    const int n = rho.dim();
    if (basis.dim() != n)
        throw std::invalid_argument("to_bloch: basis dimension mismatch");
    const double scale = std::sqrt(n / (2.0 * (n - 1.0)));
    BlochVector out;
    out.xi = RealVector(n * n - 1);
    for (int a = 0; a < n * n - 1; ++a)
        out.xi(a) = scale * (rho.matrix() * basis.element(a)).trace().real();
    return out;
}

inline DensityMatrix from_bloch(const BlochVector& bloch, const GellMannBasis& basis) {
    const int n = basis.dim();
    if (bloch.xi.size() != n * n - 1)
        throw std::invalid_argument("from_bloch: coefficient count mismatch");
    Matrix m = Matrix::Identity(n, n);
    const double b = std::sqrt(n * (n - 1.0) / 2.0);
    for (int a = 0; a < n * n - 1; ++a)
        m += b * bloch.xi(a) * basis.element(a);
    return DensityMatrix(m / static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// The pairing
// ---------------------------------------------------------------------------

struct WignerValue {
    double value = 0.0;
    Matrix phase_point;  // the unitary at which the kernel was evaluated
};

inline double pairing_value(const Matrix& rho, const Matrix& delta) {
    const Complex tr = (rho * delta).trace();
    if (std::abs(tr.imag()) > 1e-12)
        throw std::runtime_error("wigner pairing: imaginary residue " +
                                 std::to_string(tr.imag()));
    return tr.real();
}

inline WignerValue wigner_value(const DensityMatrix& rho, const SWKernel& k) {
    if (rho.dim() != k.dim)
        throw std::invalid_argument("wigner_value: dimension mismatch");
    return WignerValue{pairing_value(rho.matrix(), k.matrix),
                       Matrix::Identity(k.dim, k.dim)};
}

inline WignerValue wigner_value(const DensityMatrix& rho, const SWKernel& k,
                                const Matrix& u) {
    if (rho.dim() != k.dim || u.rows() != k.dim || u.cols() != k.dim)
        throw std::invalid_argument("wigner_value: dimension mismatch");
    const Matrix delta = u * k.matrix * u.adjoint();
    return WignerValue{pairing_value(rho.matrix(), delta), u};
}

// Bloch/Cartan evaluation; equals wigner_value(rho(xi), build_kernel(p, u)).
inline double wigner_cartan(const BlochVector& bloch, const ModuliPoint& point,
                            const Matrix& u, const GellMannBasis& basis) {
    const int n = basis.dim();
    if (point.dim != n || u.rows() != n || bloch.xi.size() != n * n - 1)
        throw std::invalid_argument("wigner_cartan: dimension mismatch");
    double dot = 0.0;
    for (int s = 2; s <= n; ++s) {
        const Matrix rotated = u * basis.cartan(s) * u.adjoint();
        for (int m = 0; m < n * n - 1; ++m) {
            const double n_comp = 0.5 * (rotated * basis.element(m)).trace().real();
            dot += point.mu[static_cast<std::size_t>(s - 2)] * n_comp * bloch.xi(m);
        }
    }
    const double nn = static_cast<double>(n);
    return (1.0 + (nn * nn - 1.0) / std::sqrt(nn + 1.0) * dot) / nn;
}

// ---------------------------------------------------------------------------
// Monte-Carlo reconstruction
// ---------------------------------------------------------------------------

struct ReconstructionResult {
    Matrix estimate;
    double error = 0.0;  // spectral norm of estimate - rho
};

inline double spectral_norm(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint().eval()),
                                                 Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

// rho_hat = (N/M) sum_j D(U_j) tr(rho D(U_j)) over Haar samples U_j.
inline ReconstructionResult reconstruct_mc(const DensityMatrix& rho,
                                           const ModuliPoint& point, int samples,
                                           std::uint64_t seed) {
    const int n = rho.dim();
    if (point.dim != n)
        throw std::invalid_argument("reconstruct_mc: dimension mismatch");
    if (samples < 1)
        throw std::invalid_argument("reconstruct_mc: samples must be positive");

    const OrderedSpectrum spec = mu_to_spectrum(point.mu, n);
    Eigen::VectorXcd diag(n);
    for (int i = 0; i < n; ++i) diag(i) = spec[i];

    std::mt19937_64 rng(seed);
    Matrix u(n, n), delta(n, n);
    Matrix acc = Matrix::Zero(n, n);
    for (int j = 0; j < samples; ++j) {
        detail::haar_unitary_inplace(u, rng);
        delta.noalias() = u * diag.asDiagonal() * u.adjoint();
        const double w = (rho.matrix() * delta).trace().real();
        acc += w * delta;
    }
    ReconstructionResult out;
    out.estimate = (static_cast<double>(n) / samples) * acc;
    out.error = spectral_norm(out.estimate - rho.matrix());
    return out;
}

// ---------------------------------------------------------------------------
// Weingarten fourth-moment check
// ---------------------------------------------------------------------------

// Two-term degree-(2,2) moment formula for Haar unitaries:
//   E[U_{i1 j1} U_{i2 j2} Ubar_{k1 l1} Ubar_{k2 l2}]
//     = (d_i1k1 d_i2k2 d_j1l1 d_j2l2 + d_i1k2 d_i2k1 d_j1l2 d_j2l1)/(N^2-1)
//     - (d_i1k1 d_i2k2 d_j1l2 d_j2l1 + d_i1k2 d_i2k1 d_j1l1 d_j2l2)/(N(N^2-1))
inline double weingarten_formula(int n, int i1, int j1, int i2, int j2, int k1, int l1,
                                 int k2, int l2) {
    const double nn = static_cast<double>(n);
    const auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    const double direct = d(i1, k1) * d(i2, k2) * d(j1, l1) * d(j2, l2) +
                          d(i1, k2) * d(i2, k1) * d(j1, l2) * d(j2, l1);
    const double crossed = d(i1, k1) * d(i2, k2) * d(j1, l2) * d(j2, l1) +
                           d(i1, k2) * d(i2, k1) * d(j1, l1) * d(j2, l2);
    return direct / (nn * nn - 1.0) - crossed / (nn * (nn * nn - 1.0));
}

// Max-abs deviation of the MC fourth moments from the formula over all index
// tuples.  The full N^8 sweep is only tractable for N <= 3.
inline double weingarten_check(int dim, int samples, std::uint64_t seed) {
    if (dim < 2 || dim > 3)
        throw std::invalid_argument("weingarten_check: full tuple sweep supports dim 2..3");
    if (samples < 1)
        throw std::invalid_argument("weingarten_check: samples must be positive");

    const int n = dim;
    const int n2 = n * n;
    std::mt19937_64 rng(seed);
    Matrix u(n, n);
    Eigen::VectorXcd v(n2 * n2);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n2 * n2, n2 * n2);
    for (int s = 0; s < samples; ++s) {
        detail::haar_unitary_inplace(u, rng);
        // v[(i1*n+j1)*n2 + (i2*n+j2)] = U_{i1 j1} U_{i2 j2}
        for (int i1 = 0; i1 < n; ++i1)
            for (int j1 = 0; j1 < n; ++j1)
                for (int i2 = 0; i2 < n; ++i2)
                    for (int j2 = 0; j2 < n; ++j2)
                        v((i1 * n + j1) * n2 + i2 * n + j2) = u(i1, j1) * u(i2, j2);
        acc.noalias() += v * v.adjoint();
    }
    acc /= static_cast<double>(samples);

    double max_dev = 0.0;
    for (int i1 = 0; i1 < n; ++i1)
        for (int j1 = 0; j1 < n; ++j1)
            for (int i2 = 0; i2 < n; ++i2)
                for (int j2 = 0; j2 < n; ++j2)
                    for (int k1 = 0; k1 < n; ++k1)
                        for (int l1 = 0; l1 < n; ++l1)
                            for (int k2 = 0; k2 < n; ++k2)
                                for (int l2 = 0; l2 < n; ++l2) {
                                    const int row = (i1 * n + j1) * n2 + i2 * n + j2;
                                    const int col = (k1 * n + l1) * n2 + k2 * n + l2;
                                    const double f = weingarten_formula(
                                        n, i1, j1, i2, j2, k1, l1, k2, l2);
                                    max_dev = std::max(max_dev,
                                                       std::abs(acc(row, col) - f));
                                }
    return max_dev;
}

// ---------------------------------------------------------------------------
// Stratonovich-Weyl postulate report
// ---------------------------------------------------------------------------

struct PostulateCheck {
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct PostulateReport {
    PostulateCheck hermiticity;     // max |D - D^dag| over trials
    PostulateCheck covariance;      // tr(VrhoV^dag D) vs tr(rho V^dag D V)
    PostulateCheck normalization;   // |mean W - 1/N| over M samples
    PostulateCheck reconstruction;  // spectral-norm MC residual

    bool all_pass() const {
        return hermiticity.pass && covariance.pass && normalization.pass &&
               reconstruction.pass;
    }
};

namespace detail {

// Random mixed state rho = G G^dag / tr(G G^dag), G Ginibre.
template <typename Rng>
DensityMatrix random_density_matrix(int dim, Rng& rng) {
    Matrix g(dim, dim);
    fill_ginibre(g, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(0.5 * (rho + rho.adjoint().eval()));
}

}  // namespace detail

inline PostulateReport check_sw_postulates(const ModuliPoint& point, int trials,
                                           std::uint64_t seed) {
    if (trials < 10)
        throw std::invalid_argument("check_sw_postulates: trials must be >= 10");
    const int n = point.dim;
    const GellMannBasis basis(n);
    std::mt19937_64 rng(seed);

    PostulateReport rep;

    // (1) Hermiticity and (3) normalization share one sampling loop.
    const OrderedSpectrum spec = mu_to_spectrum(point.mu, n);
    Eigen::VectorXcd diag(n);
    for (int i = 0; i < n; ++i) diag(i) = spec[i];
    const DensityMatrix rho = detail::random_density_matrix(n, rng);

    Matrix u(n, n), delta(n, n);
    double herm_res = 0.0;
    double w_sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        detail::haar_unitary_inplace(u, rng);
        delta.noalias() = u * diag.asDiagonal() * u.adjoint();
        herm_res = std::max(herm_res, hermiticity_residual(delta));
        w_sum += (rho.matrix() * delta).trace().real();
    }
    rep.hermiticity = {herm_res, 1e-13, herm_res < 1e-13};
    const double norm_dev = std::abs(w_sum / trials - 1.0 / n);
    const double norm_tol = 5.0 / std::sqrt(static_cast<double>(trials));
    rep.normalization = {norm_dev, norm_tol, norm_dev < norm_tol};

    // (2) Covariance: W_{V rho V^dag}(D) == W_rho(V^dag D V), exact identity.
    double cov_res = 0.0;
    const int cov_trials = std::min(trials, 100);
    for (int t = 0; t < cov_trials; ++t) {
        detail::haar_unitary_inplace(u, rng);
        delta.noalias() = u * diag.asDiagonal() * u.adjoint();
        Matrix v = sample_haar_unitary(n, rng);
        const double lhs = ((v * rho.matrix() * v.adjoint()) * delta).trace().real();
        const double rhs = (rho.matrix() * (v.adjoint() * delta * v)).trace().real();
        cov_res = std::max(cov_res, std::abs(lhs - rhs));
    }
    rep.covariance = {cov_res, 1e-12, cov_res < 1e-12};

    // (4) Reconstruction residual at the same sample budget.
    const ReconstructionResult rec =
        reconstruct_mc(rho, point, trials, seed ^ 0x9e3779b97f4a7c15ULL);
    const double rec_tol = 10.0 * n / std::sqrt(static_cast<double>(trials));
    rep.reconstruction = {rec.error, rec_tol, rec.error < rec_tol};

    return rep;
}

}  // namespace swk
