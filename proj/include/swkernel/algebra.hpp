#pragma once

// su(N) algebra primitives: the generalized Gell-Mann basis, Hermitian-matrix
// checks, spectral decomposition, and Haar-random SU(N) sampling.
//
// Basis normalization is fixed to tr(l_a l_b) = 2 delta_ab throughout; the
// diagonal (Cartan) generators sit at indices s^2-1 (1-based), s = 2..N:
//
//   l_{s^2-1} = sqrt(2/(s(s-1))) * diag(1, ..., 1, -(s-1), 0, ..., 0)
//
// with s-1 leading ones.  For N = 2 this reproduces the Pauli matrices, for
// N = 3 the standard Gell-Mann set with l_8 = (1/sqrt(3)) diag(1,1,-2).

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

namespace swk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kSpectralReconstructTol = 1e-10;

// Max-abs elementwise deviation from the conjugate transpose.
inline double hermiticity_residual(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double tol = kHermitianTol) {
    return m.rows() == m.cols() && hermiticity_residual(m) <= tol;
}

// Dense N x N complex matrix validated to be Hermitian on construction.
// Carrier for density matrices, SW kernels, and anything handed in from
// files; basis elements are Hermitian by construction and stay raw.
class HermitianMatrix {
public:
    explicit HermitianMatrix(Matrix m, double tol = kHermitianTol)
        : m_(std::move(m)) {
        if (m_.rows() != m_.cols() || m_.rows() < 1)
            throw std::invalid_argument("HermitianMatrix: matrix must be square");
        const double res = hermiticity_residual(m_);
        if (res > tol)
            throw std::invalid_argument(
                "HermitianMatrix: hermiticity residual " + std::to_string(res) +
                " exceeds tolerance");
        // symmetrize to kill roundoff skew
        m_ = 0.5 * (m_ + m_.adjoint().eval());
    }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }

private:
    Matrix m_;
};

// ---------------------------------------------------------------------------
// Generalized Gell-Mann basis
// ---------------------------------------------------------------------------

// Ordered basis of su(N): for each s = 2..N the off-diagonal pairs
// (symmetric, antisymmetric) with all rows j < s, then the s-th Cartan
// generator, so that 1-based index s^2-1 is the s-th diagonal element.
class GellMannBasis {
public:
    explicit GellMannBasis(int dim) : dim_(dim) {
        if (dim < 2)
            throw std::invalid_argument("GellMannBasis: dim must be >= 2");
        elements_.reserve(static_cast<std::size_t>(dim) * dim - 1);
        const Complex I(0.0, 1.0);
        for (int s = 2; s <= dim; ++s) {
            const int col = s - 1;
            for (int row = 0; row < col; ++row) {
                Matrix sym = Matrix::Zero(dim, dim);
                sym(row, col) = 1.0;
                sym(col, row) = 1.0;
                elements_.push_back(std::move(sym));
                Matrix asym = Matrix::Zero(dim, dim);
                asym(row, col) = -I;
                asym(col, row) = I;
                elements_.push_back(std::move(asym));
            }
            Matrix cartan = Matrix::Zero(dim, dim);
            const double scale = std::sqrt(2.0 / (static_cast<double>(s) * (s - 1)));
            for (int i = 0; i < s - 1; ++i) cartan(i, i) = scale;
            cartan(s - 1, s - 1) = -scale * (s - 1);
            elements_.push_back(std::move(cartan));
            cartan_indices_.push_back(s * s - 2);  // 0-based position of l_{s^2-1}
        }
    }

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(elements_.size()); }

    // element(a) is l_{a+1} in the 1-based labeling l_1 .. l_{N^2-1}
    const Matrix& element(int a) const { return elements_.at(static_cast<std::size_t>(a)); }
    const std::vector<Matrix>& elements() const { return elements_; }

    // 0-based indices of the diagonal generators, in order s = 2..N
    const std::vector<int>& cartan_indices() const { return cartan_indices_; }

    // Cartan generator for s in 2..N
    const Matrix& cartan(int s) const {
        if (s < 2 || s > dim_)
            throw std::out_of_range("GellMannBasis::cartan: s out of range");
        return elements_[static_cast<std::size_t>(s * s - 2)];
    }

private:
    int dim_;
    std::vector<Matrix> elements_;
    std::vector<int> cartan_indices_;
};

inline GellMannBasis build_basis(int dim) { return GellMannBasis(dim); }

// Normalization constant kappa = sqrt(N(N^2-1)/2) multiplying the traceless
// part of a SW kernel in this basis.
inline double kernel_kappa(int dim) {
    const double n = dim;
    return std::sqrt(n * (n * n - 1.0) / 2.0);
}

// ---------------------------------------------------------------------------
// Spectral decomposition
// ---------------------------------------------------------------------------

// Eigenvalues sorted descending; eigenvector columns orthonormal with the
// phase fixed so the first nonzero component is positive real.
struct SpectralDecomposition {
    RealVector eigenvalues;  // descending
    Matrix eigenvectors;     // unitary, columns match eigenvalues
};

inline SpectralDecomposition spectral_decompose(const Matrix& m,
                                                double tol = kHermitianTol) {
    if (!is_hermitian(m, tol))
        throw std::invalid_argument("spectral_decompose: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint().eval()));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectral_decompose: eigensolver failed");

    const int n = static_cast<int>(m.rows());
    SpectralDecomposition out;
    out.eigenvalues = RealVector(n);
    out.eigenvectors = Matrix(n, n);
    // Eigen returns ascending order; reverse.
    for (int i = 0; i < n; ++i) {
        out.eigenvalues(i) = solver.eigenvalues()(n - 1 - i);
        out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    // Phase convention: first component of each column with magnitude above
    // threshold is rotated to the positive real axis.
    for (int i = 0; i < n; ++i) {
        for (int r = 0; r < n; ++r) {
            const Complex c = out.eigenvectors(r, i);
            if (std::abs(c) > 1e-12) {
                out.eigenvectors.col(i) *= std::conj(c) / std::abs(c);
                break;
            }
        }
    }
    return out;
}

inline SpectralDecomposition spectral_decompose(const HermitianMatrix& m) {
    return spectral_decompose(m.matrix());
}

// ---------------------------------------------------------------------------
// Haar-random SU(N)
// ---------------------------------------------------------------------------

namespace detail {

// Fills g with standard complex Gaussians (Ginibre ensemble).
template <typename Rng>
void fill_ginibre(Matrix& g, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int c = 0; c < g.cols(); ++c)
        for (int r = 0; r < g.rows(); ++r)
            g(r, c) = Complex(gauss(rng), gauss(rng));
}

// In-place modified Gram-Schmidt with one re-orthogonalization pass.  The
// positive-diagonal-R convention makes the result Haar on U(N) when the
// input is Ginibre.
inline void orthonormalize_columns(Matrix& g) {
    const int n = static_cast<int>(g.cols());
    for (int c = 0; c < n; ++c) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int p = 0; p < c; ++p) {
                const Complex proj = g.col(p).dot(g.col(c));
                g.col(c) -= proj * g.col(p);
            }
        }
        const double norm = g.col(c).norm();
        if (norm < 1e-300)
            throw std::runtime_error("orthonormalize_columns: rank deficient sample");
        g.col(c) /= norm;
    }
}

// Projects a U(N) element onto SU(N) by removing the global determinant phase.
inline void project_special(Matrix& u) {
    const Complex det = u.determinant();
    const double theta = std::arg(det);
    const int n = static_cast<int>(u.rows());
    u *= std::polar(1.0, -theta / static_cast<double>(n));
}

template <typename Rng>
void haar_unitary_inplace(Matrix& u, Rng& rng) {
    fill_ginibre(u, rng);
    orthonormalize_columns(u);
    project_special(u);
}

}  // namespace detail

// Haar-distributed SU(N) element: QR (Gram-Schmidt, positive-diagonal R) of a
// complex Ginibre matrix, then global-phase projection to det = 1.
template <typename Rng>
Matrix sample_haar_unitary(int dim, Rng& rng) {
    if (dim < 2)
        throw std::invalid_argument("sample_haar_unitary: dim must be >= 2");
    Matrix u(dim, dim);
    detail::haar_unitary_inplace(u, rng);
    return u;
}

inline Matrix sample_haar_unitary(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return sample_haar_unitary(dim, rng);
}

inline bool is_unitary(const Matrix& u, double tol = 1e-10) {
    if (u.rows() != u.cols()) return false;
    const Matrix id = Matrix::Identity(u.rows(), u.cols());
    return (u * u.adjoint() - id).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace swk
