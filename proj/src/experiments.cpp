#include "hsot/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hsot/errors.hpp"

namespace hsot {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

Assertion make_assertion(std::string name, bool passed, double tolerance,
                         std::string detail) {
    return Assertion{std::move(name), passed, tolerance, std::move(detail)};
}

}  // namespace

bool all_passed(const std::vector<Assertion>& assertions) {
    return std::all_of(assertions.begin(), assertions.end(),
                       [](const Assertion& a) { return a.passed; });
}

CounterexampleResult run_counterexample(double beta, int grid_size, int n) {
    if (!(beta > 0.0)) throw UsageError("run_counterexample: beta must be > 0");
    CounterexampleResult result;
    result.n = n;
    result.beta = beta;
    result.grid_size = grid_size;

    const RadialProfile source = build_profile(RadialDensitySpec::uniform(n), grid_size);
    const RadialProfile target =
        build_profile(RadialDensitySpec::gaussian_like(n, beta), grid_size);
    result.lip = radial_lipschitz(monotone_map(source, target));

    const double lip = result.lip.lip_formula.value();
    result.assertions.push_back(make_assertion(
        "lipschitz_exceeds_one", lip > 1.0, 0.0,
        "lip_formula = " + fmt(lip) + " at t = " + fmt(result.lip.argmax_location.value())));
    return result;
}

std::vector<double> default_cap_radii() {
    return {0.3, 0.5, 0.7, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5, kHalfPi};
}

CapResult run_cap_restriction(double beta, std::vector<double> radii, int grid_size, int n) {
    if (radii.empty()) radii = default_cap_radii();
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || radii[i] > kHalfPi + 1e-12)
            throw UsageError("run_cap_restriction: radii must lie in (0, pi/2]");
        if (i > 0 && !(radii[i] > radii[i - 1]))
            throw UsageError("run_cap_restriction: radii must be increasing");
    }

    CapResult result;
    result.n = n;
    result.beta = beta;
    result.grid_size = grid_size;

    const RadialProfile source = build_profile(RadialDensitySpec::uniform(n), grid_size);
    const RadialDensitySpec base = RadialDensitySpec::gaussian_like(n, beta);
    for (double radius : radii) {
        const RadialProfile target =
            build_profile(RadialDensitySpec::cap(base, radius), grid_size);
        const RadialMap map = monotone_map(source, target);
        CapRecord record;
        record.radius = radius;
        record.map_end = map.values.back();
        record.lip = radial_lipschitz(map);
        result.records.push_back(std::move(record));
    }

    // Smallest radius past which every sampled constant exceeds 1.
    for (std::size_t i = result.records.size(); i-- > 0;) {
        if (!(result.records[i].lip.lip_formula.value() > 1.0)) break;
        result.threshold_radius = result.records[i].radius;
    }

    const double last_lip = result.records.back().lip.lip_formula.value();
    result.assertions.push_back(make_assertion(
        "lipschitz_exceeds_one_near_full_support", last_lip > 1.0, 0.0,
        "lip_formula(radius = " + fmt(result.records.back().radius) + ") = " + fmt(last_lip)));
    double max_edge_err = 0.0;
    for (const CapRecord& rec : result.records)
        max_edge_err = std::max(max_edge_err, std::abs(rec.map_end - rec.radius));
    result.assertions.push_back(make_assertion(
        "map_endpoint_hits_support_edge", max_edge_err <= 1e-9, 1e-9,
        "max |r(pi/2) - radius| = " + fmt(max_edge_err)));
    return result;
}

std::vector<double> default_blowup_epsilons() {
    // Geometric from 1.0 down to 1e-4; the tail is deep enough that the
    // lower bound clears the default growth threshold.
    std::vector<double> eps;
    const int steps = 21;
    for (int i = 0; i < steps; ++i)
        eps.push_back(std::pow(10.0, -4.0 * i / (steps - 1)));
    return eps;
}

BlowupResult run_blowup(PotentialKind potential, std::vector<double> epsilons,
                        int grid_size, int n, double growth_threshold) {
    if (epsilons.empty()) epsilons = default_blowup_epsilons();
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0)) throw UsageError("run_blowup: epsilons must be > 0");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
            throw UsageError("run_blowup: epsilons must be decreasing");
    }

    BlowupResult result;
    result.n = n;
    result.potential = potential;
    result.grid_size = grid_size;
    result.growth_threshold = growth_threshold;

    const RadialProfile source = build_profile(RadialDensitySpec::uniform(n), grid_size);
    for (double eps : epsilons) {
        BlowupRecord record;
        record.epsilon = eps;
        const RadialProfile target =
            build_profile(RadialDensitySpec::tempered(n, potential, eps), grid_size);
        record.m = target.mean_radial_distance();
        const double p = 1.0 - std::sqrt(record.m);
        if (p < 0.0 || p > 1.0) {
            record.flagged = true;
            result.records.push_back(record);
            continue;
        }
        record.r_eps = target.quantile(p);

        const RadialMap map = monotone_map(source, target);
        // Grid supremum of the preimage ball {t : r(t) <= r_eps}.
        double big_r = 0.0;
        for (std::size_t i = 0; i < map.grid.size(); ++i)
            if (map.values[i] <= record.r_eps) big_r = map.grid[i];
        record.big_r_eps = big_r;
        record.lower_bound = (kHalfPi - record.r_eps) / (kHalfPi - record.big_r_eps);
        record.lip_formula = radial_lipschitz(map).lip_formula.value();
        result.records.push_back(record);
    }

    double max_gap = -std::numeric_limits<double>::infinity();
    bool any_valid = false;
    for (const BlowupRecord& rec : result.records) {
        if (rec.flagged) continue;
        any_valid = true;
        max_gap = std::max(max_gap, rec.lower_bound - rec.lip_formula);
    }
    result.assertions.push_back(make_assertion(
        "formula_dominates_lower_bound", any_valid && max_gap <= 1e-6, 1e-6,
        "max (lower_bound - lip_formula) = " + fmt(max_gap)));

    // Monotone growth on the tail (second half of the unflagged records).
    std::vector<const BlowupRecord*> valid;
    for (const BlowupRecord& rec : result.records)
        if (!rec.flagged) valid.push_back(&rec);
    bool tail_increasing = valid.size() >= 2;
    const std::size_t tail_start = valid.size() / 2;
    for (std::size_t i = tail_start; i + 1 < valid.size(); ++i)
        if (!(valid[i + 1]->lower_bound > valid[i]->lower_bound)) tail_increasing = false;
    result.assertions.push_back(make_assertion(
        "lower_bound_increasing_on_tail", tail_increasing, 0.0,
        "tail covers " + std::to_string(valid.size() - tail_start) + " records"));

    const double final_bound = valid.empty() ? 0.0 : valid.back()->lower_bound;
    result.assertions.push_back(make_assertion(
        "final_lower_bound_exceeds_threshold", final_bound > growth_threshold,
        growth_threshold, "final lower_bound = " + fmt(final_bound)));
    return result;
}

ConcentrationResult run_concentration_audit(const RadialDensitySpec& cap_target,
                                            std::vector<double> r_grid, int grid_size) {
    if (cap_target.family != RadialFamily::CapRestriction)
        throw UsageError("run_concentration_audit: target must be a cap_restriction family");

    ConcentrationResult result;
    result.n = cap_target.n;
    result.rho = cap_target.support_radius();

    const RadialProfile source =
        build_profile(RadialDensitySpec::uniform(cap_target.n), grid_size);
    const RadialProfile target = build_profile(cap_target, grid_size);
    const RadialMap map = monotone_map(source, target);
    result.lip = radial_lipschitz(map).lip_formula.value();

    const double r_max = kHalfPi * result.lip;
    if (r_grid.empty()) {
        const int k = 256;
        for (int i = 1; i <= k; ++i)
            r_grid.push_back(r_max * static_cast<double>(i) / (k + 1));
    }
    for (double r : r_grid) {
        if (!(r > 0.0)) throw UsageError("run_concentration_audit: r must be > 0");
        if (r >= r_max)
            throw UsageError("run_concentration_audit: r = " + fmt(r) +
                             " outside the admissible range (0, pi L / 2) with L = " +
                             fmt(result.lip));
    }

    const double exponent_scale =
        static_cast<double>(cap_target.n - 1) / (2.0 * result.lip * result.lip);
    double worst = -std::numeric_limits<double>::infinity();
    for (double r : r_grid) {
        ConcentrationRecord record;
        record.r = r;
        record.lhs = r >= result.rho ? 0.0 : target.cdf(result.rho - r);
        record.rhs = 2.0 * std::exp(-exponent_scale * r * r);
        worst = std::max(worst, record.lhs - record.rhs);
        result.records.push_back(record);
    }
    result.assertions.push_back(make_assertion(
        "mass_away_from_boundary_bounded", worst <= 1e-9, 1e-9,
        "max (lhs - rhs) = " + fmt(worst) + " over " +
            std::to_string(result.records.size()) + " radii, L = " + fmt(result.lip)));
    return result;
}

McConcentrationResult run_concentration_mc(int n, int count, std::vector<double> t_grid,
                                           std::uint64_t seed) {
    if (n < 2) throw UsageError("run_concentration_mc: n must be >= 2");
    if (count < 1000) throw UsageError("run_concentration_mc: count must be >= 1000");
    if (t_grid.empty()) {
        const int k = 64;
        for (int i = 1; i <= k; ++i)
            t_grid.push_back(kHalfPi * static_cast<double>(i) / k);
    }

    McConcentrationResult result;
    result.n = n;
    result.count = count;

    // Mass of {colatitude <= pi/2 - t}, the complement of the open
    // t-neighborhood of the lower hemisphere.
    std::vector<double> colats;
    colats.reserve(static_cast<std::size_t>(count));
    for (const SpherePoint& x : sample_uniform_sphere(n, count, seed))
        colats.push_back(colatitude(x));
    std::sort(colats.begin(), colats.end());

    double worst = -std::numeric_limits<double>::infinity();
    for (double t : t_grid) {
        McConcentrationRecord record;
        record.t = t;
        const auto it = std::upper_bound(colats.begin(), colats.end(), kHalfPi - t);
        record.empirical =
            static_cast<double>(it - colats.begin()) / static_cast<double>(count);
        record.bound = std::exp(-0.5 * static_cast<double>(n - 1) * t * t);
        worst = std::max(worst, record.empirical - record.bound);
        result.records.push_back(record);
    }
    result.assertions.push_back(make_assertion(
        "empirical_cap_mass_within_gaussian_bound", worst <= 0.0, 0.0,
        "max (empirical - bound) = " + fmt(worst)));
    return result;
}

const char* to_string(RigidityClass c) {
    switch (c) {
        case RigidityClass::Identity: return "identity";
        case RigidityClass::Reflection: return "reflection";
        default: return "rejected";
    }
}

RigidityVerdict run_rigidity_1d(const RadialMap& candidate, double tol) {
    const std::size_t m = candidate.grid.size();
    if (m < 128) throw UsageError("run_rigidity_1d: need at least 128 grid nodes");
    if (!(tol >= 0.0)) throw UsageError("run_rigidity_1d: tol must be >= 0");
    const double spacing = candidate.grid[1] - candidate.grid[0];

    RigidityVerdict verdict;

    // Step-wise 1-Lipschitz bound.
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double dt = candidate.grid[i + 1] - candidate.grid[i];
        const double dr = candidate.values[i + 1] - candidate.values[i];
        if (std::abs(dr) > dt + tol) {
            verdict.classification = RigidityClass::Rejected;
            verdict.violation_witness = std::make_pair(candidate.grid[i], candidate.grid[i + 1]);
            verdict.deviation = std::abs(dr) - dt;
            return verdict;
        }
    }

    // Surjectivity: the achieved range must cover [0, pi/2] up to one step.
    double lo = candidate.values[0], hi = candidate.values[0];
    for (double v : candidate.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo > spacing || hi < kHalfPi - spacing) {
        verdict.classification = RigidityClass::Rejected;
        verdict.violation_witness = std::make_pair(lo, hi);
        verdict.deviation = std::max(lo, kHalfPi - hi);
        return verdict;
    }

    double dev_id = 0.0, dev_ref = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        dev_id = std::max(dev_id, std::abs(candidate.values[i] - candidate.grid[i]));
        dev_ref =
            std::max(dev_ref, std::abs(candidate.values[i] - (kHalfPi - candidate.grid[i])));
    }
    verdict.classification =
        dev_id <= dev_ref ? RigidityClass::Identity : RigidityClass::Reflection;
    verdict.deviation = std::min(dev_id, dev_ref);
    return verdict;
}

RadialMap random_lipschitz_surjective_map(int nodes, Rng& rng) {
    if (nodes < 128) throw UsageError("random_lipschitz_surjective_map: nodes must be >= 128");
    const std::size_t m = static_cast<std::size_t>(nodes);
    const double spacing = kHalfPi / static_cast<double>(m - 1);

    RadialMap map;
    map.n = 2;
    map.grid.resize(m);
    for (std::size_t i = 0; i < m; ++i)
        map.grid[i] = kHalfPi * static_cast<double>(i) / static_cast<double>(m - 1);

    // Split a total slack <= one grid step between the left endpoint offset
    // and a random down-bias of the increments; each step then stays within
    // the 1-Lipschitz budget and the right endpoint lands within one step of
    // pi/2, so the map is guaranteed to pass both predicates.
    const double start = rng.uniform(0.0, 0.5 * spacing);
    const double budget = rng.uniform(0.0, spacing - start);
    std::vector<double> bias(m - 1);
    double bias_sum = 0.0;
    for (double& b : bias) {
        b = rng.uniform();
        bias_sum += b;
    }
    const double scale = bias_sum > 0.0 ? budget / bias_sum : 0.0;

    std::vector<double> forward(m);
    forward[0] = start;
    for (std::size_t i = 0; i + 1 < m; ++i)
        forward[i + 1] = forward[i] + std::max(0.0, spacing - scale * bias[i]);
    for (double& v : forward) v = std::min(v, kHalfPi);

    if (rng.uniform() < 0.5) {
        map.values = std::move(forward);
    } else {
        map.values.resize(m);
        for (std::size_t i = 0; i < m; ++i) map.values[i] = kHalfPi - forward[i];
    }
    return map;
}

RadialMap random_junk_map(int nodes, Rng& rng) {
    if (nodes < 128) throw UsageError("random_junk_map: nodes must be >= 128");
    const std::size_t m = static_cast<std::size_t>(nodes);
    RadialMap map;
    map.n = 2;
    map.grid.resize(m);
    map.values.resize(m);
    for (std::size_t i = 0; i < m; ++i)
        map.grid[i] = kHalfPi * static_cast<double>(i) / static_cast<double>(m - 1);

    switch (rng.next_u64() % 3) {
        case 0: {  // 1-Lipschitz contraction: fails surjectivity
            const double c = rng.uniform(0.2, 0.6);
            for (std::size_t i = 0; i < m; ++i) map.values[i] = c * map.grid[i];
            break;
        }
        case 1:  // random walk with oversized steps: fails the Lipschitz bound
            map.values[0] = 0.0;
            for (std::size_t i = 1; i < m; ++i) {
                const double step = (map.grid[1] - map.grid[0]) * rng.uniform(-4.0, 4.0);
                map.values[i] = std::clamp(map.values[i - 1] + step, 0.0, kHalfPi);
            }
            break;
        default:  // surjective but with slopes far beyond 1
            for (std::size_t i = 0; i < m; ++i) {
                const double t = map.grid[i];
                map.values[i] = std::clamp(t + 0.2 * std::sin(32.0 * t), 0.0, kHalfPi);
            }
            map.values.back() = kHalfPi;
            break;
    }
    return map;
}

RigiditySuiteResult run_rigidity_suite(int nodes, int random_count, double tol,
                                       std::uint64_t seed) {
    RigiditySuiteResult result;
    result.nodes = nodes;
    const std::size_t m = static_cast<std::size_t>(nodes);
    const double spacing = kHalfPi / static_cast<double>(m - 1);
    result.tol = tol > 0.0 ? tol : 2.0 * spacing;

    const auto make_map = [&](auto fn) {
        RadialMap map;
        map.n = 2;
        map.grid.resize(m);
        map.values.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            map.grid[i] = kHalfPi * static_cast<double>(i) / static_cast<double>(m - 1);
            map.values[i] = fn(map.grid[i]);
        }
        return map;
    };

    const std::pair<const char*, RadialMap> canonical[] = {
        {"identity", make_map([](double t) { return t; })},
        {"reflection", make_map([](double t) { return kHalfPi - t; })},
        {"half_slope", make_map([](double t) { return 0.5 * t; })},
    };
    for (const auto& [label, map] : canonical) {
        const RigidityVerdict v = run_rigidity_1d(map, result.tol);
        result.canonical.push_back(RigidityCase{label, v.classification, v.deviation});
    }

    Rng rng(seed);
    result.random_total = random_count;
    bool all_classified = true;
    for (int k = 0; k < random_count; ++k) {
        const RadialMap map = random_lipschitz_surjective_map(nodes, rng);
        const RigidityVerdict v = run_rigidity_1d(map, result.tol);
        switch (v.classification) {
            case RigidityClass::Identity: ++result.identity_count; break;
            case RigidityClass::Reflection: ++result.reflection_count; break;
            default:
                ++result.rejected_count;
                all_classified = false;
                break;
        }
        if (v.classification != RigidityClass::Rejected)
            result.max_passing_deviation =
                std::max(result.max_passing_deviation, v.deviation);
    }

    result.assertions.push_back(make_assertion(
        "canonical_maps_classify",
        result.canonical[0].classification == RigidityClass::Identity &&
            result.canonical[1].classification == RigidityClass::Reflection &&
            result.canonical[2].classification == RigidityClass::Rejected,
        result.tol,
        "identity -> " + std::string(to_string(result.canonical[0].classification)) +
            ", reflection -> " + to_string(result.canonical[1].classification) +
            ", half_slope -> " + to_string(result.canonical[2].classification)));
    result.assertions.push_back(make_assertion(
        "passing_maps_classify_within_tolerance",
        all_classified && result.max_passing_deviation <= result.tol, result.tol,
        "random passing maps: " + std::to_string(result.identity_count) + " identity, " +
            std::to_string(result.reflection_count) + " reflection, max deviation " +
            fmt(result.max_passing_deviation)));
    return result;
}

MetricEquivalenceResult run_metric_equivalence(int count, std::uint64_t seed) {
    if (count < 100) throw UsageError("run_metric_equivalence: count must be >= 100");

    MetricEquivalenceResult result;
    result.quadruples = count;

    const std::vector<SpherePoint> pts =
        sample_uniform_sphere(2, 4 * count, seed);
    for (int k = 0; k < count; ++k) {
        const SpherePoint& a = pts[4 * k];
        const SpherePoint& b = pts[4 * k + 1];
        const SpherePoint& c = pts[4 * k + 2];
        const SpherePoint& d = pts[4 * k + 3];
        const bool geo_le = geodesic_distance(a, b) <= geodesic_distance(c, d);
        const bool euc_le = euclidean_distance(a, b) <= euclidean_distance(c, d);
        if (geo_le != euc_le) ++result.violations;
    }

    // Half-angle map theta -> theta/2 on the right half of the circle.
    const auto circle = [](double theta) {
        return SpherePoint({std::cos(theta), std::sin(theta)});
    };
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    double ratio_min = std::numeric_limits<double>::infinity();
    double ratio_max = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 1000; ++k) {
        const double t1 = rng.uniform(-kHalfPi, kHalfPi);
        double t2 = rng.uniform(-kHalfPi, kHalfPi);
        if (std::abs(t1 - t2) < 1e-6) t2 = std::clamp(t1 + 0.1, -kHalfPi, kHalfPi);
        const double ratio = geodesic_distance(circle(t1 / 2.0), circle(t2 / 2.0)) /
                             geodesic_distance(circle(t1), circle(t2));
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
    }
    result.half_angle_geo_ratio_min = ratio_min;
    result.half_angle_geo_ratio_max = ratio_max;
    result.half_angle_endpoint_norm =
        euclidean_distance(circle(kHalfPi / 2.0), circle(-kHalfPi / 2.0));
    result.endpoint_norm = euclidean_distance(circle(kHalfPi), circle(-kHalfPi));
    result.euclid_endpoint_ratio = result.half_angle_endpoint_norm / result.endpoint_norm;

    result.assertions.push_back(make_assertion(
        "order_biconditional_holds", result.violations == 0, 0.0,
        std::to_string(result.violations) + " violations over " + std::to_string(count) +
            " quadruples"));
    result.assertions.push_back(make_assertion(
        "half_angle_geodesic_ratio_is_half",
        std::abs(ratio_min - 0.5) <= 1e-9 && std::abs(ratio_max - 0.5) <= 1e-9, 1e-9,
        "geodesic ratio range [" + fmt(ratio_min) + ", " + fmt(ratio_max) + "]"));
    result.assertions.push_back(make_assertion(
        "half_angle_endpoint_values",
        std::abs(result.half_angle_endpoint_norm - std::sqrt(2.0)) <= 1e-12 &&
            std::abs(result.endpoint_norm - 2.0) <= 1e-12,
        1e-12,
        "||T(pi/2) - T(-pi/2)|| = " + fmt(result.half_angle_endpoint_norm) +
            ", ||u(pi/2) - u(-pi/2)|| = " + fmt(result.endpoint_norm)));
    result.assertions.push_back(make_assertion(
        "half_angle_euclidean_ratio_exceeds_half",
        std::abs(result.euclid_endpoint_ratio - std::sqrt(2.0) / 2.0) <= 1e-12 &&
            result.euclid_endpoint_ratio > 0.5,
        1e-12, "Euclidean endpoint ratio = " + fmt(result.euclid_endpoint_ratio)));
    return result;
}

SinkhornCrosscheckResult run_sinkhorn_crosscheck(double beta, int count, double reg_final,
                                                 std::uint64_t seed, int grid_size,
                                                 double tol) {
    if (count < 16 || count > 4096)
        throw UsageError("run_sinkhorn_crosscheck: count must lie in [16, 4096]");
    if (!(beta > 0.0)) throw UsageError("run_sinkhorn_crosscheck: beta must be > 0");

    SinkhornCrosscheckResult result;
    result.beta = beta;
    result.count = count;
    result.reg_final = reg_final;

    const RadialProfile source_profile =
        build_profile(RadialDensitySpec::uniform(2), grid_size);
    const RadialProfile target_profile =
        build_profile(RadialDensitySpec::gaussian_like(2, beta), grid_size);
    const RadialMap radial = monotone_map(source_profile, target_profile);

    const DiscreteMeasure source = discretize_on_sphere(
        source_profile, count, DiscretizationScheme::Fibonacci, seed);
    const DiscreteMeasure target = discretize_on_sphere(
        target_profile, count, DiscretizationScheme::Fibonacci, seed ^ 0x5851f42d4c957f2dULL);

    SinkhornOptions options;
    options.reg = reg_final;
    options.tol = tol;
    options.max_iter = 4000;
    options.anneal = true;
    const SinkhornResult sk = sinkhorn(source, target, options);
    result.iterations = sk.iterations;
    result.marginal_error = sk.marginal_error;

    const std::vector<SpherePoint> bary = barycentric_map(sk.plan);
    double max_dev = 0.0;
    for (std::size_t i = 0; i < source.points.size(); ++i) {
        const SpherePoint mapped = apply_radial_map(radial, source.points[i]);
        max_dev = std::max(max_dev, geodesic_distance(bary[i], mapped));
    }
    result.max_deviation = max_dev;
    result.lip_empirical =
        empirical_lipschitz(source.points, bary).lip_empirical.value();

    result.assertions.push_back(make_assertion(
        "barycentric_map_tracks_radial_map", max_dev < 0.05, 0.05,
        "max geodesic deviation = " + fmt(max_dev) + " rad over " +
            std::to_string(source.points.size()) + " points"));
    result.assertions.push_back(make_assertion(
        "discrete_map_detects_expansion", result.lip_empirical > 1.0, 0.0,
        "empirical Lipschitz = " + fmt(result.lip_empirical)));
    return result;
}

}  // namespace hsot
