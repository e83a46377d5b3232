#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "hsot/geometry.hpp"
#include "hsot/measures.hpp"

namespace hsot {

// Monotone radial transport map r : [0, pi/2] -> [0, pi/2], tabulated on a
// colatitude grid and acting along meridians. Maps produced by monotone_map
// keep their source/target profiles so the Lipschitz evaluation can use
// exact density ratios instead of finite differences.
struct RadialMap {
    int n = 2;
    std::vector<double> grid;    // source colatitudes, increasing
    std::vector<double> values;  // r(grid[i]), non-decreasing

    std::shared_ptr<const RadialProfile> source;  // set by monotone_map
    std::shared_ptr<const RadialProfile> target;

    /// Piecewise-linear evaluation, clamped to the grid range.
    double operator()(double t) const;
};

/// Monotone rearrangement r = F_target^{-1} o F_source on the source grid.
/// The source must have strictly positive density on the interior.
RadialMap monotone_map(const RadialProfile& source, const RadialProfile& target);

/// Moves x to colatitude r(d(x, N)) along its own meridian. The pole maps to
/// the pole when r(0) = 0; it is rejected otherwise (no meridian).
SpherePoint apply_radial_map(const RadialMap& map, const SpherePoint& x);

struct LipschitzReport {
    std::optional<double> lip_formula;    // sup of max(|r'|, sin r / sin t)
    std::optional<double> lip_empirical;  // max pairwise distance ratio
    std::optional<std::pair<SpherePoint, SpherePoint>> witness;
    std::optional<double> argmax_location;  // colatitude of the formula sup
};

// Lipschitz constant of a radial map from the stretch factors of its
// differential: |r'(t)| radially and sin(r(t))/sin(t) tangentially. r' comes
// from the density ratio g_source(t)/g_target(r(t)) when profiles are
// attached and the target density is positive, finite differences otherwise;
// the tangential ratio at t = 0 is replaced by r'(0). A vanishing target
// density at an interior node is a numerical failure (the stretch diverges).
LipschitzReport radial_lipschitz(const RadialMap& map);

// Discrete coupling with prescribed marginals, row-major |source| x |target|.
struct TransportPlan {
    DiscreteMeasure source;
    DiscreteMeasure target;
    std::vector<double> coupling;

    double mass(std::size_t i, std::size_t j) const {
        return coupling[i * target.size() + j];
    }
    /// Transport cost sum pi_ij d^2(x_i, y_j)/2.
    double cost() const;
    /// L1 violation of both marginal constraints.
    double marginal_violation() const;
};

// Kantorovich-type dual pair on the discrete supports; for converged
// Sinkhorn runs psi(x) + psi_c(y) <= d^2(x,y)/2 + reg * log(1/min weight).
struct PotentialPair {
    std::vector<double> psi;    // on source points
    std::vector<double> psi_c;  // on target points
};

struct SinkhornOptions {
    double reg = 1e-2;          // entropic regularization, squared radians
    double tol = 1e-7;          // L1 marginal violation target
    int max_iter = 2000;        // final-stage iteration budget
    bool anneal = true;         // geometric schedule from reg_init down to reg
    double anneal_factor = 0.7;
    double reg_init = 1.0;
    int anneal_stage_iters = 30;   // sweep budget per intermediate stage
    double over_relaxation = 1.8;  // 1 = plain scaling; guarded fallback to 1
};

struct SinkhornResult {
    TransportPlan plan;
    PotentialPair potentials;
    int iterations = 0;         // total over all stages
    double marginal_error = 0.0;
};

/// Log-domain Sinkhorn for the half-squared geodesic cost with optional
/// geometric annealing of the regularization. Zero-weight atoms yield empty
/// rows/columns. Throws NumericalError when the final stage fails to reach
/// tol within max_iter, carrying the last violation.
SinkhornResult sinkhorn(const DiscreteMeasure& source, const DiscreteMeasure& target,
                        const SinkhornOptions& options);

SinkhornResult sinkhorn(const DiscreteMeasure& source, const DiscreteMeasure& target,
                        double reg, double tol, int max_iter);

/// Exact optimal coupling by brute force over permutations: requires equal
/// sizes <= 12 and uniform weights. Ties resolve to the lexicographically
/// smallest permutation.
TransportPlan exact_ot_small(const DiscreteMeasure& source, const DiscreteMeasure& target);

/// Barycentric projection: per source point, the conditional target mean
/// renormalized to the sphere. The conditional mass must sit inside an open
/// hemisphere (degenerate rows are rejected).
std::vector<SpherePoint> barycentric_map(const TransportPlan& plan);

/// Max pairwise ratio d(out_i, out_j)/d(in_i, in_j); pairs closer than 1e-8
/// on the input side are skipped. Records the witness pair.
LipschitzReport empirical_lipschitz(const std::vector<SpherePoint>& inputs,
                                    const std::vector<SpherePoint>& outputs);

}  // namespace hsot
