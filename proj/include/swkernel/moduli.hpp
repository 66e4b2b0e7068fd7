#pragma once

// Moduli space of SW kernels: spherical-angle parametrization, the induced
// kernel spectrum, eigenvalue-ordering constraints, and the admissible
// region P = P1 u P2(k) u P3 on the unit (N-2)-sphere.
//
// Coordinates: angles psi_1..psi_{N-2} with psi_i in [0,pi] for i < N-2 and
// psi_{N-2} in [0,2pi); expansion coefficients mu = (mu_3, mu_8, ...,
// mu_{N^2-1}) on the unit sphere,
//
//   mu_{N^2-1} = cos psi_1
//   mu_{s^2-1} = sin psi_1 ... sin psi_{N-s} cos psi_{N-s+1}     (2 < s < N)
//   mu_3       = sin psi_1 ... sin psi_{N-2}
//
// The kernel spectrum in terms of mu (kappa = sqrt(N(N^2-1)/2)):
//
//   pi_i = (1/N) [ 1 + sqrt(2) kappa sum_{s>i} mu_{s^2-1}/sqrt(s(s-1))
//                    - kappa sqrt(2(i-1)/i) mu_{i^2-1} ]
//
// which automatically satisfies sum pi = 1 and sum pi^2 = N.  Descending
// order of the pi_i is equivalent to
//
//   mu_3 >= 0,   mu_{(i+1)^2-1} >= sqrt((i-1)/(i+1)) mu_{i^2-1},  i = 2..N-1.

#include "swkernel/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <vector>

namespace swk {

inline constexpr double kOrderingTol = 1e-12;
inline constexpr double kSphereTol = 1e-10;

// ---------------------------------------------------------------------------
// Angle <-> mu maps
// ---------------------------------------------------------------------------

// mu is indexed so that mu[s-2] = mu_{s^2-1}, s = 2..N.
inline std::vector<double> angles_to_mu(const std::vector<double>& angles, int dim) {
    if (dim < 2)
        throw std::invalid_argument("angles_to_mu: dim must be >= 2");
    if (static_cast<int>(angles.size()) != dim - 2)
        throw std::invalid_argument("angles_to_mu: expected dim-2 angles");
    std::vector<double> mu(static_cast<std::size_t>(dim - 1), 0.0);
    // running product sin psi_1 ... sin psi_j
    double sines = 1.0;
    for (int s = dim; s >= 3; --s) {
        mu[static_cast<std::size_t>(s - 2)] = sines * std::cos(angles[static_cast<std::size_t>(dim - s)]);
        sines *= std::sin(angles[static_cast<std::size_t>(dim - s)]);
    }
    mu[0] = sines;  // mu_3, all sines (empty product = 1 for N = 2)
    return mu;
}

// Inverse of angles_to_mu for unit mu; last angle recovered via atan2 so the
// full [0,2pi) range survives the round trip.
inline std::vector<double> angles_from_mu(const std::vector<double>& mu, int dim) {
    if (static_cast<int>(mu.size()) != dim - 1)
        throw std::invalid_argument("angles_from_mu: expected dim-1 coefficients");
    std::vector<double> angles(static_cast<std::size_t>(dim - 2), 0.0);
    if (dim == 2) return angles;
    double sines = 1.0;
    for (int s = dim; s >= 4; --s) {
        const std::size_t j = static_cast<std::size_t>(dim - s);  // angle index psi_{j+1}
        double c = mu[static_cast<std::size_t>(s - 2)];
        if (sines > 1e-14) {
            c = std::clamp(c / sines, -1.0, 1.0);
            angles[j] = std::acos(c);
        } else {
            angles[j] = 0.0;  // collapsed fiber, any value maps to the same point
        }
        sines *= std::sin(angles[j]);
    }
    double last = std::atan2(mu[0], mu[1]);  // (mu_3, mu_8) share the sine prefix
    if (last < 0.0) last += 2.0 * std::numbers::pi;
    angles[static_cast<std::size_t>(dim - 3)] = last;
    return angles;
}

// A point of the moduli sphere: N-2 angles plus the derived mu coefficients.
struct ModuliPoint {
    int dim = 0;
    std::vector<double> angles;  // size N-2
    std::vector<double> mu;      // size N-1, unit norm
};

inline void validate_angle_ranges(const std::vector<double>& angles, int dim) {
    const double pi = std::numbers::pi;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const bool last = (static_cast<int>(i) == dim - 3);
        const double hi = last ? 2.0 * pi : pi;
        if (!(angles[i] >= 0.0) || angles[i] > hi + 1e-12 || (last && angles[i] >= 2.0 * pi))
            throw std::invalid_argument("moduli point: angle out of range");
    }
}

inline ModuliPoint make_moduli_point(int dim, const std::vector<double>& angles) {
    if (dim < 2)
        throw std::invalid_argument("make_moduli_point: dim must be >= 2");
    if (static_cast<int>(angles.size()) != dim - 2)
        throw std::invalid_argument("make_moduli_point: expected dim-2 angles");
    validate_angle_ranges(angles, dim);
    return ModuliPoint{dim, angles, angles_to_mu(angles, dim)};
}

inline ModuliPoint moduli_point_from_mu(int dim, std::vector<double> mu) {
    double norm2 = 0.0;
    for (double m : mu) norm2 += m * m;
    if (std::abs(norm2 - 1.0) > kSphereTol)
        throw std::invalid_argument("moduli_point_from_mu: mu is off the unit sphere");
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& m : mu) m *= inv;
    ModuliPoint p{dim, angles_from_mu(mu, dim), std::move(mu)};
    return p;
}

// ---------------------------------------------------------------------------
// Kernel spectrum from mu
// ---------------------------------------------------------------------------

// Candidate SW-kernel spectrum; sum pi = 1 and sum pi^2 = N are enforced at
// construction (descending order holds only for in-region moduli points and
// is *not* enforced here).
class OrderedSpectrum {
public:
    OrderedSpectrum(std::vector<double> values, double tol = 1e-12)
        : values_(std::move(values)) {
        const double n = static_cast<double>(values_.size());
        double sum = 0.0, sum_sq = 0.0;
        for (double v : values_) {
            sum += v;
            sum_sq += v * v;
        }
        if (std::abs(sum - 1.0) > tol || std::abs(sum_sq - n) > tol)
            throw std::invalid_argument(
                "OrderedSpectrum: master sums violated (tr = " + std::to_string(sum) +
                ", tr^2 = " + std::to_string(sum_sq) + ")");
    }

    int dim() const { return static_cast<int>(values_.size()); }
    const std::vector<double>& values() const { return values_; }
    double operator[](int i) const { return values_.at(static_cast<std::size_t>(i)); }

    bool is_descending(double tol = kOrderingTol) const {
        for (std::size_t i = 0; i + 1 < values_.size(); ++i)
            if (values_[i] + tol < values_[i + 1]) return false;
        return true;
    }

private:
    std::vector<double> values_;
};

inline OrderedSpectrum mu_to_spectrum(const std::vector<double>& mu, int dim) {
    if (static_cast<int>(mu.size()) != dim - 1)
        throw std::invalid_argument("mu_to_spectrum: expected dim-1 coefficients");
    double norm2 = 0.0;
    for (double m : mu) norm2 += m * m;
    if (std::abs(norm2 - 1.0) > kSphereTol)
        throw std::invalid_argument("mu_to_spectrum: mu is off the unit sphere");
    // project exactly onto the sphere so the master sums hold to roundoff
    const double inv = 1.0 / std::sqrt(norm2);

    const double n = static_cast<double>(dim);
    const double kappa = kernel_kappa(dim);
    std::vector<double> pi(static_cast<std::size_t>(dim), 0.0);
    for (int i = 1; i <= dim; ++i) {
        double acc = 1.0;
        for (int s = i + 1; s <= dim; ++s)
            acc += std::sqrt(2.0) * kappa * inv * mu[static_cast<std::size_t>(s - 2)] /
                   std::sqrt(static_cast<double>(s) * (s - 1));
        if (i >= 2)
            acc -= kappa * std::sqrt(2.0 * (i - 1) / static_cast<double>(i)) * inv *
                   mu[static_cast<std::size_t>(i - 2)];
        pi[static_cast<std::size_t>(i - 1)] = acc / n;
    }
    return OrderedSpectrum(std::move(pi));
}

inline OrderedSpectrum spectrum_of(const ModuliPoint& p) {
    return mu_to_spectrum(p.mu, p.dim);
}

// True iff the ordering inequalities hold, i.e. mu_to_spectrum is descending.
inline bool check_ordering(const std::vector<double>& mu, int dim,
                           double tol = kOrderingTol) {
    if (static_cast<int>(mu.size()) != dim - 1)
        throw std::invalid_argument("check_ordering: expected dim-1 coefficients");
    if (mu[0] < -tol) return false;
    for (int i = 2; i <= dim - 1; ++i) {
        const double lhs = mu[static_cast<std::size_t>(i - 1)];
        const double rhs = std::sqrt((i - 1.0) / (i + 1.0)) * mu[static_cast<std::size_t>(i - 2)];
        if (lhs < rhs - tol) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Region classification
// ---------------------------------------------------------------------------

enum class Subregion { P1, P2, P3, Outside };

struct RegionMembership {
    bool in_region = false;
    Subregion subregion = Subregion::Outside;
    int k = 0;  // meaningful only for P2

    std::string label() const {
        switch (subregion) {
            case Subregion::P1: return "P1";
            case Subregion::P2: return "P2(" + std::to_string(k) + ")";
            case Subregion::P3: return "P3";
            default: return "outside";
        }
    }
};

// Membership is decided by the ordering inequalities; the subregion label
// follows the angle-based case split: psi_1 = 0 -> P1; otherwise the largest
// k in 2..N-2 with sin psi_{N-k} = 0 selects P2(k); otherwise P3.
inline RegionMembership classify_region(const ModuliPoint& p) {
    RegionMembership out;
    out.in_region = check_ordering(p.mu, p.dim);
    if (!out.in_region) return out;

    if (p.dim == 2 || std::abs(p.angles[0]) <= 1e-12) {
        out.subregion = Subregion::P1;
        return out;
    }
    // largest k <=> smallest angle index j = N-k in [2, N-2]
    for (int j = 2; j <= p.dim - 2; ++j) {
        if (std::abs(std::sin(p.angles[static_cast<std::size_t>(j - 1)])) <= 1e-12) {
            out.subregion = Subregion::P2;
            out.k = p.dim - j;
            return out;
        }
    }
    out.subregion = Subregion::P3;
    return out;
}

// ---------------------------------------------------------------------------
// Grid enumeration of the admissible region
// ---------------------------------------------------------------------------

enum class GridSpacing {
    EqualAngle,  // uniform in the angles (matches angle-based plots)
    EqualArea,   // polar angles uniform in cos psi instead
};

// Equal-angle grid over the admissible region.  In angle coordinates the
// closed region is triangular: the last angle ranges over [0, pi/3] and each
// earlier psi_j over [0, arccot(sqrt((N-j-1)/(N-j+1)) cos psi_{j+1})], so the
// per-column scaled grid covers P exactly (corners included) and needs no
// rejection.  Collapsed fibers (sin psi_j = 0) are deduplicated.
inline std::vector<ModuliPoint> sample_moduli_grid(
    int dim, int resolution, GridSpacing spacing = GridSpacing::EqualAngle) {
    if (dim < 2)
        throw std::invalid_argument("sample_moduli_grid: dim must be >= 2");
    if (resolution < 2)
        throw std::invalid_argument("sample_moduli_grid: resolution must be >= 2");

    std::vector<ModuliPoint> points;
    if (dim == 2) {
        points.push_back(make_moduli_point(2, {}));
        return points;
    }

    const int n_angles = dim - 2;
    std::vector<int> idx(static_cast<std::size_t>(n_angles), 0);
    std::vector<double> angles(static_cast<std::size_t>(n_angles), 0.0);
    std::set<std::vector<long long>> seen;  // dedup keys (rounded mu)

    bool done = false;
    while (!done) {
        // fill from the last angle down; each bound depends on the next angle
        for (int a = n_angles - 1; a >= 0; --a) {
            double hi = std::numbers::pi / 3.0;
            if (a < n_angles - 1) {
                const double c = std::sqrt((dim - a - 2.0) / (dim - a)) *
                                 std::cos(angles[static_cast<std::size_t>(a + 1)]);
                hi = std::atan(1.0 / c);  // arccot, arguments stay positive
            }
            const double t =
                static_cast<double>(idx[static_cast<std::size_t>(a)]) / (resolution - 1);
            if (spacing == GridSpacing::EqualArea && a < n_angles - 1) {
                // uniform in cos psi for the polar angles (azimuth is already
                // area uniform)
                const double c_lo = std::cos(hi);
                angles[static_cast<std::size_t>(a)] =
                    std::acos(std::clamp(1.0 - t * (1.0 - c_lo), -1.0, 1.0));
            } else {
                angles[static_cast<std::size_t>(a)] = hi * t;
            }
        }
        const std::vector<double> mu = angles_to_mu(angles, dim);
        if (check_ordering(mu, dim)) {
            std::vector<long long> key(mu.size());
            for (std::size_t i = 0; i < mu.size(); ++i)
                key[i] = std::llround(mu[i] * 1e12);
            if (seen.insert(key).second)
                points.push_back(ModuliPoint{dim, angles, mu});
        }
        // odometer increment
        int a = n_angles - 1;
        while (a >= 0 && ++idx[static_cast<std::size_t>(a)] >= resolution) {
            idx[static_cast<std::size_t>(a)] = 0;
            --a;
        }
        done = (a < 0);
    }
    return points;
}

}  // namespace swk
