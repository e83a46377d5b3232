#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hsot/measures.hpp"
#include "hsot/rng.hpp"
#include "hsot/transport.hpp"

namespace hsot {

// One checked inequality or identity with its tolerance and outcome.
struct Assertion {
    std::string name;
    bool passed = false;
    double tolerance = 0.0;
    std::string detail;
};

bool all_passed(const std::vector<Assertion>& assertions);

// ---- non-contraction of the map onto a gaussian-like target --------------

struct CounterexampleResult {
    int n = 2;
    double beta = 1.0;
    int grid_size = 4096;
    LipschitzReport lip;
    std::vector<Assertion> assertions;
};

/// Transports the uniform half-sphere law onto exp(-beta d(x,N)^2) and
/// evaluates the Lipschitz constant of the radial map; checks it exceeds 1.
CounterexampleResult run_counterexample(double beta, int grid_size = 4096, int n = 2);

// ---- cap-restricted targets ----------------------------------------------

struct CapRecord {
    double radius = 0.0;
    double map_end = 0.0;  // r(pi/2), the support edge of the target
    LipschitzReport lip;
};

struct CapResult {
    int n = 2;
    double beta = 1.0;
    int grid_size = 4096;
    std::vector<CapRecord> records;
    /// Smallest sampled radius past which every Lipschitz constant exceeds 1.
    std::optional<double> threshold_radius;
    std::vector<Assertion> assertions;
};

CapResult run_cap_restriction(double beta, std::vector<double> radii,
                              int grid_size = 4096, int n = 2);

std::vector<double> default_cap_radii();

// ---- Lipschitz blow-up along a temperature schedule -----------------------

struct BlowupRecord {
    double epsilon = 0.0;
    double m = 0.0;            // mean colatitude of the tempered target
    double r_eps = 0.0;        // target quantile at 1 - sqrt(m)
    double big_r_eps = 0.0;    // sup{t : r(t) <= r_eps} on the map grid
    double lower_bound = 0.0;  // (pi/2 - r_eps)/(pi/2 - big_r_eps)
    double lip_formula = 0.0;
    bool flagged = false;      // 1 - sqrt(m) fell outside [0, 1]; record skipped
};

struct BlowupResult {
    int n = 2;
    PotentialKind potential = PotentialKind::Quadratic;
    int grid_size = 8192;
    double growth_threshold = 10.0;
    std::vector<BlowupRecord> records;
    std::vector<Assertion> assertions;
};

/// Sweeps decreasing temperatures; for each builds the tempered target,
/// derives the lower bound (pi/2 - r_eps)/(pi/2 - R_eps) and checks the
/// formula constant dominates it, that the bound grows along the tail, and
/// that it ends above the growth threshold.
BlowupResult run_blowup(PotentialKind potential, std::vector<double> epsilons,
                        int grid_size = 8192, int n = 2, double growth_threshold = 10.0);

/// Geometric grid from 1.0 down to 1e-4 (21 values).
std::vector<double> default_blowup_epsilons();

// ---- boundary concentration audit ----------------------------------------

struct ConcentrationRecord {
    double r = 0.0;
    double lhs = 0.0;  // target mass at distance >= r from the support boundary
    double rhs = 0.0;  // 2 exp(-(n-1) r^2 / (2 L^2))
};

struct ConcentrationResult {
    int n = 2;
    double lip = 0.0;  // Lipschitz constant L of the radial map
    double rho = 0.0;  // cap radius of the target support
    std::vector<ConcentrationRecord> records;
    std::vector<Assertion> assertions;
};

/// For a cap-supported target, audits that the mass away from the support
/// boundary obeys the Gaussian bound with L the radial map constant. An empty
/// r_grid selects an automatic grid in (0, pi L / 2); entries at or beyond
/// pi L / 2 are rejected.
ConcentrationResult run_concentration_audit(const RadialDensitySpec& cap_target,
                                            std::vector<double> r_grid,
                                            int grid_size = 4096);

struct McConcentrationRecord {
    double t = 0.0;
    double empirical = 0.0;  // sampled mass of the cap of colatitude pi/2 - t
    double bound = 0.0;      // exp(-(n-1) t^2 / 2)
};

struct McConcentrationResult {
    int n = 2;
    int count = 0;
    std::vector<McConcentrationRecord> records;
    std::vector<Assertion> assertions;
};

/// Monte Carlo check of the sphere concentration inequality around the
/// lower hemisphere. An empty t_grid selects a uniform grid in (0, pi/2].
McConcentrationResult run_concentration_mc(int n, int count, std::vector<double> t_grid,
                                           std::uint64_t seed);

// ---- rigidity of 1-Lipschitz surjective radial maps ------------------------

enum class RigidityClass { Identity, Reflection, Rejected };

const char* to_string(RigidityClass c);

struct RigidityVerdict {
    RigidityClass classification = RigidityClass::Rejected;
    /// Grid step violating the 1-Lipschitz bound, or the achieved range when
    /// surjectivity fails.
    std::optional<std::pair<double, double>> violation_witness;
    double deviation = 0.0;  // sup distance to the nearest of id / reflection
};

/// Checks the per-step 1-Lipschitz bound and surjectivity of a tabulated
/// map of [0, pi/2]; maps passing both are classified as identity or
/// reflection by nearest sup-distance.
RigidityVerdict run_rigidity_1d(const RadialMap& candidate, double tol);

/// Random map satisfying the step-wise 1-Lipschitz bound exactly and
/// surjective up to one grid step; passing candidates for the rigidity search.
RadialMap random_lipschitz_surjective_map(int nodes, Rng& rng);

/// Random non-Lipschitz or non-surjective map; rejected candidates.
RadialMap random_junk_map(int nodes, Rng& rng);

struct RigidityCase {
    std::string label;
    RigidityClass classification = RigidityClass::Rejected;
    double deviation = 0.0;
};

struct RigiditySuiteResult {
    int nodes = 512;
    double tol = 0.0;
    std::vector<RigidityCase> canonical;  // id, reflection, half slope
    int random_total = 0;
    int identity_count = 0;
    int reflection_count = 0;
    int rejected_count = 0;
    double max_passing_deviation = 0.0;
    std::vector<Assertion> assertions;
};

/// Canonical candidates plus random passing/junk maps; asserts every passing
/// candidate classifies as identity or reflection within tol.
RigiditySuiteResult run_rigidity_suite(int nodes, int random_count, double tol,
                                       std::uint64_t seed);

// ---- geodesic vs Euclidean Lipschitz classes -------------------------------

struct MetricEquivalenceResult {
    int quadruples = 0;
    int violations = 0;  // order biconditional failures
    double half_angle_geo_ratio_min = 0.0;
    double half_angle_geo_ratio_max = 0.0;
    double half_angle_endpoint_norm = 0.0;  // ||T(pi/2) - T(-pi/2)||
    double endpoint_norm = 0.0;             // ||u(pi/2) - u(-pi/2)||
    double euclid_endpoint_ratio = 0.0;
    std::vector<Assertion> assertions;
};

/// Samples random quadruples on S^2 and checks the geodesic/Euclidean order
/// biconditional; also evaluates the half-angle map on the right half of the
/// circle, whose geodesic ratio is exactly 1/2 while its Euclidean endpoint
/// ratio is sqrt(2)/2.
MetricEquivalenceResult run_metric_equivalence(int count, std::uint64_t seed);

// ---- discrete cross-check of the radial solver -----------------------------

struct SinkhornCrosscheckResult {
    double beta = 1.0;
    int count = 2048;
    double reg_final = 1e-3;
    double max_deviation = 0.0;  // max geodesic gap to the radial map
    double lip_empirical = 0.0;
    int iterations = 0;
    double marginal_error = 0.0;
    std::vector<Assertion> assertions;
};

/// Discretizes source and gaussian-like target on S^2, runs annealed Sinkhorn,
/// extracts the barycentric map and compares it pointwise against the radial
/// map; also reports the empirical Lipschitz constant of the discrete map.
SinkhornCrosscheckResult run_sinkhorn_crosscheck(double beta, int count, double reg_final,
                                                 std::uint64_t seed, int grid_size = 4096,
                                                 double tol = 1e-7);

}  // namespace hsot
