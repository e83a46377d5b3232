#include "hsot/transport.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hsot/errors.hpp"
#include "hsot/parallel.hpp"

namespace hsot {

namespace {

constexpr double kDensityFloor = 1e-280;  // below this a density counts as vanished
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double interp_on_grid(const std::vector<double>& grid, const std::vector<double>& values,
                      double t) {
    if (t <= grid.front()) return values.front();
    if (t >= grid.back()) return values.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - grid.begin());
    const double frac = (t - grid[i - 1]) / (grid[i] - grid[i - 1]);
    return values[i - 1] + frac * (values[i] - values[i - 1]);
}

}  // namespace

double RadialMap::operator()(double t) const { return interp_on_grid(grid, values, t); }

RadialMap monotone_map(const RadialProfile& source, const RadialProfile& target) {
    if (source.n() != target.n())
        throw UsageError("monotone_map: source/target dimension mismatch");
    if (source.support_radius() < kHalfPi - 1e-12)
        throw UsageError("monotone_map: source support must be the whole of [0, pi/2]");
    const std::vector<double>& grid = source.grid();
    const std::vector<double>& cdf = source.cdf_values();
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (!(source.density()[i] > 0.0))
            throw UsageError("monotone_map: source density vanishes at t = " +
                             std::to_string(grid[i]));
    }
    RadialMap map;
    map.n = source.n();
    map.grid = grid;
    map.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) map.values[i] = target.quantile(cdf[i]);
    map.source = std::make_shared<RadialProfile>(source);
    map.target = std::make_shared<RadialProfile>(target);
    return map;
}

SpherePoint apply_radial_map(const RadialMap& map, const SpherePoint& x) {
    if (x.n() != map.n) throw UsageError("apply_radial_map: dimension mismatch");
    const double t = colatitude(x);
    const double r = map(t);

    const double height = x.height();
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - height * height));
    if (sin_t < 1e-14) {
        if (height < 0.0) throw UsageError("apply_radial_map: point is the south pole");
        if (r > 1e-12)
            throw UsageError("apply_radial_map: r(0) != 0, meridian through N undefined");
        return x;  // pole fixed
    }

    // Same meridian: decompose x = cos(t) N + sin(t) u with u equatorial.
    Vec out(x.coords().size());
    const double cr = std::cos(r), sr = std::sin(r);
    for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = sr * x[i] / sin_t;
    out.back() = cr;
    return SpherePoint::normalized(std::move(out));
}

LipschitzReport radial_lipschitz(const RadialMap& map) {
    const std::size_t m = map.grid.size();
    if (m < 256) throw UsageError("radial_lipschitz: need at least 256 grid nodes");
    const bool have_profiles = map.source && map.target;

    const auto finite_difference = [&](std::size_t i) {
        if (i == 0) return (map.values[1] - map.values[0]) / (map.grid[1] - map.grid[0]);
        if (i + 1 == m)
            return (map.values[m - 1] - map.values[m - 2]) /
                   (map.grid[m - 1] - map.grid[m - 2]);
        return (map.values[i + 1] - map.values[i - 1]) /
               (map.grid[i + 1] - map.grid[i - 1]);
    };

    double best = 0.0;
    double best_t = 0.0;
    double slope0 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double t = map.grid[i];
        const double r = map.values[i];
        double slope;
        if (have_profiles) {
            const double gs = map.source->density_at(t);
            const double gt = map.target->density_at(r);
            if (gs > kDensityFloor && gt > kDensityFloor) {
                slope = gs / gt;
            } else if (gt <= kDensityFloor && gs > kDensityFloor && i > 0 && i + 1 < m) {
                throw NumericalError(
                    "radial_lipschitz: target density vanishes at interior node t = " +
                    std::to_string(t) + " (r = " + std::to_string(r) + ")");
            } else {
                slope = finite_difference(i);
            }
        } else {
            slope = finite_difference(i);
        }
        if (i == 0) slope0 = slope;

        const double sin_t = std::sin(t);
        const double tangential = sin_t > 1e-14 ? std::sin(r) / sin_t : slope0;
        const double local = std::max(std::abs(slope), tangential);
        if (local > best) {
            best = local;
            best_t = t;
        }
    }

    LipschitzReport report;
    report.lip_formula = best;
    report.argmax_location = best_t;
    return report;
}

double TransportPlan::cost() const {
    const std::size_t ns = source.size(), nt = target.size();
    double total = 0.0;
    for (std::size_t i = 0; i < ns; ++i) {
        for (std::size_t j = 0; j < nt; ++j) {
            const double w = coupling[i * nt + j];
            if (w > 0.0) {
                const double d = geodesic_distance(source.points[i], target.points[j]);
                total += w * 0.5 * d * d;
            }
        }
    }
    return total;
}

double TransportPlan::marginal_violation() const {
    const std::size_t ns = source.size(), nt = target.size();
    double violation = 0.0;
    std::vector<double> col(nt, 0.0);
    for (std::size_t i = 0; i < ns; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < nt; ++j) {
            const double w = coupling[i * nt + j];
            row += w;
            col[j] += w;
        }
        violation += std::abs(row - source.weights[i]);
    }
    for (std::size_t j = 0; j < nt; ++j) violation += std::abs(col[j] - target.weights[j]);
    return violation;
}

namespace {

std::vector<double> half_squared_cost(const std::vector<SpherePoint>& xs,
                                      const std::vector<SpherePoint>& ys) {
    const std::size_t ns = xs.size(), nt = ys.size();
    std::vector<double> c(ns * nt);
    parallel_for(ns, [&](std::size_t i) {
        for (std::size_t j = 0; j < nt; ++j) {
            const double d = geodesic_distance(xs[i], ys[j]);
            c[i * nt + j] = 0.5 * d * d;
        }
    });
    return c;
}

std::vector<double> log_weights(const std::vector<double>& w) {
    std::vector<double> lw(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) lw[i] = w[i] > 0.0 ? std::log(w[i]) : kNegInf;
    return lw;
}

// One half-update of the potentials, over-relaxed by omega:
// pot_a[i] <- (1 - omega) pot_a[i] + omega * (-reg * LSE_j(lw_b[j] + (pot_b[j]
// - cost[i,j])/reg)). omega = 1 is the plain Sinkhorn scaling; values up to
// ~1.8 substantially cut the iteration count at small reg.
void update_potentials(std::vector<double>& pot_a, const std::vector<double>& pot_b,
                       const std::vector<double>& lw_b, const std::vector<double>& cost,
                       double reg, double omega) {
    const std::size_t na = pot_a.size(), nb = pot_b.size();
    const double inv_reg = 1.0 / reg;
    std::vector<double> shifted(nb);  // lw_b[j] + pot_b[j]/reg, -inf for no mass
    for (std::size_t j = 0; j < nb; ++j)
        shifted[j] = lw_b[j] == kNegInf ? kNegInf : lw_b[j] + pot_b[j] * inv_reg;

    parallel_for_ranges(na, [&](std::size_t begin, std::size_t end) {
        std::vector<double> scratch(nb);
        for (std::size_t i = begin; i < end; ++i) {
            const double* row = cost.data() + i * nb;
            double peak = kNegInf;
            for (std::size_t j = 0; j < nb; ++j) {
                const double v = shifted[j] - row[j] * inv_reg;
                scratch[j] = v;
                if (v > peak) peak = v;
            }
            if (peak == kNegInf) {
                pot_a[i] = 0.0;  // empty opposite marginal; row carries no mass anyway
                continue;
            }
            double s = 0.0;
            for (std::size_t j = 0; j < nb; ++j) {
                if (scratch[j] != kNegInf) s += std::exp(scratch[j] - peak);
            }
            const double scaled = -reg * (peak + std::log(s));
            pot_a[i] = (1.0 - omega) * pot_a[i] + omega * scaled;
        }
    });
}

}  // namespace

SinkhornResult sinkhorn(const DiscreteMeasure& source, const DiscreteMeasure& target,
                        const SinkhornOptions& options) {
    source.validate();
    target.validate();
    if (!(options.reg > 0.0)) throw UsageError("sinkhorn: reg must be > 0");
    if (!(options.tol > 0.0)) throw UsageError("sinkhorn: tol must be > 0");
    if (options.max_iter < 1) throw UsageError("sinkhorn: max_iter must be >= 1");
    if (options.anneal && !(options.anneal_factor > 0.0 && options.anneal_factor < 1.0))
        throw UsageError("sinkhorn: anneal factor must lie in (0, 1)");

    const std::size_t ns = source.size(), nt = target.size();
    const std::vector<double> cost = half_squared_cost(source.points, target.points);
    std::vector<double> cost_T(ns * nt);
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j) cost_T[j * ns + i] = cost[i * nt + j];

    const std::vector<double> la = log_weights(source.weights);
    const std::vector<double> lb = log_weights(target.weights);

    std::vector<double> regs;
    if (options.anneal && options.reg_init > options.reg) {
        for (double r = options.reg_init; r > options.reg; r *= options.anneal_factor)
            regs.push_back(r);
    }
    regs.push_back(options.reg);

    std::vector<double> f(ns, 0.0), g(nt, 0.0), f_prev(ns), g_prev(nt);
    int iterations = 0;
    double violation = std::numeric_limits<double>::infinity();
    double omega = std::clamp(options.over_relaxation, 1.0, 1.95);

    for (std::size_t stage = 0; stage < regs.size(); ++stage) {
        const double reg = regs[stage];
        const bool final_stage = stage + 1 == regs.size();
        // Intermediate stages only hand over a warm start; a few sweeps each
        // suffice and the final stage does the precise work.
        const double stage_tol = final_stage ? options.tol : std::max(options.tol, 1e-5);
        const int stage_cap = final_stage ? options.max_iter
                                          : std::min(options.max_iter, options.anneal_stage_iters);

        bool converged = false;
        double best = std::numeric_limits<double>::infinity();
        for (int it = 0; it < stage_cap; ++it) {
            ++iterations;
            g_prev = g;
            update_potentials(g, f, la, cost_T, reg, omega);
            f_prev = f;
            update_potentials(f, g, lb, cost, reg, omega);

            // A potential moving by delta means the matching marginal of the
            // previous iterate was off by weight * |exp(delta/reg) - 1|; the
            // summed movement is the L1 stationarity residual of the sweep.
            violation = 0.0;
            for (std::size_t j = 0; j < nt; ++j)
                if (target.weights[j] > 0.0)
                    violation +=
                        target.weights[j] * std::abs(std::expm1((g_prev[j] - g[j]) / reg));
            for (std::size_t i = 0; i < ns; ++i)
                if (source.weights[i] > 0.0)
                    violation +=
                        source.weights[i] * std::abs(std::expm1((f_prev[i] - f[i]) / reg));
            if (violation < stage_tol) {
                converged = true;
                break;
            }
            // Over-relaxation can overshoot; fall back to plain scaling for
            // the rest of the run if the residual degrades badly.
            best = std::min(best, violation);
            if (omega > 1.0 && (!std::isfinite(violation) || violation > 100.0 * best))
                omega = 1.0;
        }
        if (final_stage && !converged)
            throw NumericalError("sinkhorn: no convergence after " +
                                 std::to_string(iterations) + " iterations, last L1 violation " +
                                 std::to_string(violation));
    }

    const double reg = options.reg;
    TransportPlan plan;
    plan.source = source;
    plan.target = target;
    plan.coupling.assign(ns * nt, 0.0);
    parallel_for(ns, [&](std::size_t i) {
        if (la[i] == kNegInf) return;
        for (std::size_t j = 0; j < nt; ++j) {
            if (lb[j] == kNegInf) continue;
            plan.coupling[i * nt + j] =
                std::exp((f[i] + g[j] - cost[i * nt + j]) / reg + la[i] + lb[j]);
        }
    });

    SinkhornResult result;
    result.marginal_error = plan.marginal_violation();
    result.plan = std::move(plan);
    result.potentials = PotentialPair{std::move(f), std::move(g)};
    result.iterations = iterations;
    return result;
}

SinkhornResult sinkhorn(const DiscreteMeasure& source, const DiscreteMeasure& target,
                        double reg, double tol, int max_iter) {
    SinkhornOptions options;
    options.reg = reg;
    options.tol = tol;
    options.max_iter = max_iter;
    return sinkhorn(source, target, options);
}

TransportPlan exact_ot_small(const DiscreteMeasure& source, const DiscreteMeasure& target) {
    source.validate();
    target.validate();
    const std::size_t n = source.size();
    if (n != target.size())
        throw UsageError("exact_ot_small: permutation brute force needs equal sizes");
    if (n > 12) throw UsageError("exact_ot_small: size beyond brute-force limit (12)");
    const double uw = 1.0 / static_cast<double>(n);
    for (double w : source.weights)
        if (std::abs(w - uw) > 1e-12)
            throw UsageError("exact_ot_small: source weights must be uniform");
    for (double w : target.weights)
        if (std::abs(w - uw) > 1e-12)
            throw UsageError("exact_ot_small: target weights must be uniform");

    const std::vector<double> cost = half_squared_cost(source.points, target.points);
    std::vector<std::size_t> perm(n), best_perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    best_perm = perm;
    double best = std::numeric_limits<double>::infinity();
    do {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += cost[i * n + perm[i]];
        // Strict improvement keeps the lexicographically smallest optimum,
        // since std::next_permutation enumerates in lexicographic order.
        if (c < best) {
            best = c;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    TransportPlan plan;
    plan.source = source;
    plan.target = target;
    plan.coupling.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) plan.coupling[i * n + best_perm[i]] = uw;
    return plan;
}

std::vector<SpherePoint> barycentric_map(const TransportPlan& plan) {
    const std::size_t ns = plan.source.size(), nt = plan.target.size();
    const std::size_t dim = plan.source.points.front().coords().size();
    std::vector<SpherePoint> out;
    out.reserve(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        Vec mean(dim, 0.0);
        double mass = 0.0;
        for (std::size_t j = 0; j < nt; ++j) {
            const double w = plan.coupling[i * nt + j];
            if (w <= 0.0) continue;
            mass += w;
            for (std::size_t k = 0; k < dim; ++k) mean[k] += w * plan.target.points[j][k];
        }
        if (mass <= 0.0)
            throw DegenerateBarycenterError("barycentric_map: source row " +
                                            std::to_string(i) + " carries no mass");
        const double len = norm(mean);
        if (len < 1e-9 * mass)
            throw DegenerateBarycenterError(
                "barycentric_map: conditional mass of row " + std::to_string(i) +
                " is antipodally balanced");
        out.push_back(SpherePoint::normalized(std::move(mean)));
    }
    return out;
}

LipschitzReport empirical_lipschitz(const std::vector<SpherePoint>& inputs,
                                    const std::vector<SpherePoint>& outputs) {
    if (inputs.size() != outputs.size())
        throw UsageError("empirical_lipschitz: input/output size mismatch");
    if (inputs.size() < 2) throw UsageError("empirical_lipschitz: need at least 2 points");

    struct Best {
        double ratio = -1.0;
        std::size_t i = 0, j = 0;
    };
    const std::size_t count = inputs.size();
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(thread_budget()), count);
    std::vector<Best> partial(workers);
    std::atomic<std::size_t> next_worker{0};

    parallel_for_ranges(count, [&](std::size_t begin, std::size_t end) {
        Best local;
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = i + 1; j < count; ++j) {
                const double din = geodesic_distance(inputs[i], inputs[j]);
                if (din < 1e-8) continue;
                const double ratio = geodesic_distance(outputs[i], outputs[j]) / din;
                if (ratio > local.ratio ||
                    (ratio == local.ratio &&
                     (i < local.i || (i == local.i && j < local.j)))) {
                    local = Best{ratio, i, j};
                }
            }
        }
        partial[next_worker.fetch_add(1)] = local;
    });

    // Merge with a global (ratio, -i, -j) order so ties resolve identically
    // for every chunking.
    Best best;
    for (const Best& b : partial) {
        if (b.ratio > best.ratio ||
            (b.ratio == best.ratio && b.ratio >= 0.0 &&
             (b.i < best.i || (b.i == best.i && b.j < best.j))))
            best = b;
    }
    if (best.ratio < 0.0)
        throw UsageError("empirical_lipschitz: all input pairs are degenerate");

    LipschitzReport report;
    report.lip_empirical = best.ratio;
    report.witness = std::make_pair(inputs[best.i], inputs[best.j]);
    return report;
}

}  // namespace hsot
