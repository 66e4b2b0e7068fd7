#pragma once

// Coadjoint-orbit stratification of SW kernels.  The tangent space of the
// SU(N) orbit through D is spanned by the commutators t_k = [l_k, D]; the
// orbit dimension equals the rank of the Gram matrix
//
//   G_kl = (1/2) tr(t_k^dag t_l),
//
// which for a diagonal D is itself diagonal with entries (pi_i - pi_j)^2 in
// the off-diagonal generator slots and zeros in the Cartan slots.  Strata
// are written in the bar notation of the source convention: a bar between
// adjacent positions i, i+1 of the descending spectrum marks pi_i = pi_{i+1}
// (so a regular quatrit kernel is "1234" and the kernel with two double
// degeneracies is "1|23|4").  For block sizes k_i of the degeneracy
// partition,
//
//   isotropy_dim = sum k_i^2 - 1,     orbit_dim = (N^2 - 1) - isotropy_dim.

#include "swkernel/algebra.hpp"
#include "swkernel/kernels.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace swk {

inline constexpr double kStratumTol = 1e-9;

// ---------------------------------------------------------------------------
// Gram matrix of orbit tangent vectors
// ---------------------------------------------------------------------------

struct GramMatrix {
    RealMatrix matrix;  // (N^2-1) x (N^2-1) real symmetric PSD
    int rank = 0;
};

// Numerical rank at threshold tol * (largest eigenvalue).
inline int numerical_rank(const RealMatrix& g, double tol) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(g, Eigen::EigenvaluesOnly);
    const double lead = solver.eigenvalues().cwiseAbs().maxCoeff();
    if (lead <= 0.0) return 0;
    int rank = 0;
    for (int i = 0; i < solver.eigenvalues().size(); ++i)
        if (solver.eigenvalues()(i) > tol * lead) ++rank;
    return rank;
}

inline GramMatrix gram_matrix(const SWKernel& k, const GellMannBasis& basis,
                              double tol = kStratumTol) {
    const int n = k.dim;
    if (basis.dim() != n)
        throw std::invalid_argument("gram_matrix: basis dimension mismatch");
    const int m = n * n - 1;
    std::vector<Matrix> tangents;
    tangents.reserve(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) {
        const Matrix& l = basis.element(a);
        tangents.push_back(l * k.matrix - k.matrix * l);
    }
    GramMatrix out;
    out.matrix = RealMatrix::Zero(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            const double v =
                0.5 * (tangents[static_cast<std::size_t>(a)].adjoint() *
                       tangents[static_cast<std::size_t>(b)])
                          .trace()
                          .real();
            out.matrix(a, b) = v;
            out.matrix(b, a) = v;
        }
    out.rank = numerical_rank(out.matrix, tol);
    return out;
}

inline GramMatrix gram_matrix(const SWKernel& k, double tol = kStratumTol) {
    return gram_matrix(k, GellMannBasis(k.dim), tol);
}

// ---------------------------------------------------------------------------
// Stratum classification
// ---------------------------------------------------------------------------

struct Stratum {
    std::string pattern;           // bar notation, e.g. "1|23|4"
    std::vector<int> block_sizes;  // degeneracy multiplicities, descending spectrum
    int orbit_dim = 0;
    int isotropy_dim = 0;
};

// Degeneracy blocks of a descending spectrum by single-linkage clustering
// with gap threshold tol * N.
inline std::vector<int> degeneracy_blocks(std::vector<double> values, double tol) {
    std::sort(values.begin(), values.end(), std::greater<double>());
    const double gap = tol * static_cast<double>(values.size());
    std::vector<int> blocks;
    int size = 1;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i - 1] - values[i] <= gap) {
            ++size;
        } else {
            blocks.push_back(size);
            size = 1;
        }
    }
    blocks.push_back(size);
    return blocks;
}

inline std::string stratum_pattern(const std::vector<int>& blocks) {
    std::string s;
    int pos = 1;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (int i = 0; i < blocks[b]; ++i) {
            if (i > 0) s += '|';  // bar marks an equal adjacent pair
            s += std::to_string(pos++);
        }
    }
    return s;
}

inline Stratum classify_stratum(const SWKernel& k, double tol = kStratumTol) {
    if (tol <= 0.0)
        throw std::invalid_argument("classify_stratum: tol must be positive");
    Stratum st;
    st.block_sizes = degeneracy_blocks(k.spectrum.values(), tol);
    st.pattern = stratum_pattern(st.block_sizes);
    int sum_sq = 0;
    for (int b : st.block_sizes) sum_sq += b * b;
    st.isotropy_dim = sum_sq - 1;
    st.orbit_dim = (k.dim * k.dim - 1) - st.isotropy_dim;

    const GramMatrix g = gram_matrix(k, GellMannBasis(k.dim), tol);
    if (g.rank != st.orbit_dim)
        throw std::runtime_error(
            "classify_stratum: Gram rank " + std::to_string(g.rank) +
            " disagrees with partition orbit dimension " + std::to_string(st.orbit_dim) +
            " (tolerance pathology)");
    return st;
}

// ---------------------------------------------------------------------------
// Orbit-space cones
// ---------------------------------------------------------------------------

// Polyhedral cone C_{N-1} cut out by the ordering inequalities: row 1 is
// mu_3 >= 0, row i is mu_{(i+1)^2-1} - sqrt((i-1)/(i+1)) mu_{i^2-1} >= 0.
struct OrbitCone {
    int dim = 0;                // N
    RealMatrix facet_normals;   // (N-1) x (N-1), lower triangular
};

inline OrbitCone orbit_cone(int dim) {
    if (dim < 2)
        throw std::invalid_argument("orbit_cone: dim must be >= 2");
    OrbitCone cone;
    cone.dim = dim;
    const int m = dim - 1;
    cone.facet_normals = RealMatrix::Zero(m, m);
    cone.facet_normals(0, 0) = 1.0;
    for (int i = 2; i <= dim - 1; ++i) {
        cone.facet_normals(i - 1, i - 1) = 1.0;
        cone.facet_normals(i - 1, i - 2) = -std::sqrt((i - 1.0) / (i + 1.0));
    }
    return cone;
}

inline bool cone_membership(const std::vector<double>& mu, int dim,
                            double tol = kOrderingTol) {
    const OrbitCone cone = orbit_cone(dim);
    if (static_cast<int>(mu.size()) != dim - 1)
        throw std::invalid_argument("cone_membership: expected dim-1 coefficients");
    Eigen::Map<const RealVector> x(mu.data(), static_cast<Eigen::Index>(mu.size()));
    const RealVector y = cone.facet_normals * x;
    return (y.array() >= -tol).all();
}

}  // namespace swk
