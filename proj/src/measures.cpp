#include "hsot/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hsot/errors.hpp"
#include "hsot/rng.hpp"

namespace hsot {

RadialDensitySpec RadialDensitySpec::uniform(int n) {
    RadialDensitySpec s;
    s.n = n;
    s.family = RadialFamily::Uniform;
    s.validate();
    return s;
}

RadialDensitySpec RadialDensitySpec::gaussian_like(int n, double beta) {
    RadialDensitySpec s;
    s.n = n;
    s.family = RadialFamily::GaussianLike;
    s.beta = beta;
    s.validate();
    return s;
}

RadialDensitySpec RadialDensitySpec::tempered(int n, PotentialKind potential, double epsilon) {
    RadialDensitySpec s;
    s.n = n;
    s.family = RadialFamily::Tempered;
    s.potential = potential;
    s.epsilon = epsilon;
    s.validate();
    return s;
}

RadialDensitySpec RadialDensitySpec::cap(const RadialDensitySpec& base, double radius) {
    if (base.family == RadialFamily::CapRestriction)
        throw UsageError("RadialDensitySpec::cap: base family is itself a cap");
    RadialDensitySpec s = base;
    s.family = RadialFamily::CapRestriction;
    s.cap_base = base.family;
    s.cap_radius = radius;
    s.validate();
    return s;
}

void RadialDensitySpec::validate() const {
    if (n < 1) throw UsageError("RadialDensitySpec: dimension must be >= 1");
    if (!(beta > 0.0)) throw UsageError("RadialDensitySpec: beta must be > 0");
    if (!(epsilon > 0.0)) throw UsageError("RadialDensitySpec: epsilon must be > 0");
    if (!(cap_radius > 0.0) || cap_radius > kHalfPi + 1e-12)
        throw UsageError("RadialDensitySpec: cap radius must lie in (0, pi/2]");
    if (family == RadialFamily::CapRestriction && cap_base == RadialFamily::CapRestriction)
        throw UsageError("RadialDensitySpec: nested caps are not supported");
}

double RadialDensitySpec::support_radius() const {
    return family == RadialFamily::CapRestriction ? std::min(cap_radius, kHalfPi) : kHalfPi;
}

double potential_value(PotentialKind kind, double t) {
    return kind == PotentialKind::Quadratic ? t * t : t;
}

double RadialDensitySpec::radial_density(double t) const {
    if (t < 0.0) return 0.0;
    const RadialFamily f = family == RadialFamily::CapRestriction ? cap_base : family;
    if (t > support_radius() + 1e-15) return 0.0;
    switch (f) {
        case RadialFamily::Uniform:
            return 1.0;
        case RadialFamily::GaussianLike:
            return std::exp(-beta * t * t);
        case RadialFamily::Tempered:
            return std::exp(-potential_value(potential, t) / epsilon);
        default:
            throw UsageError("RadialDensitySpec: invalid family");
    }
}

namespace {

double sin_pow(double t, int k) {
    if (k == 0) return 1.0;
    double s = std::sin(t);
    double r = s;
    for (int i = 1; i < k; ++i) r *= s;
    return r;
}

}  // namespace

RadialProfile::RadialProfile(const RadialDensitySpec& spec, int grid_size) {
    spec.validate();
    if (grid_size < 64) throw UsageError("build_profile: grid_size must be >= 64");

    n_ = spec.n;
    spec_ = spec;
    spec_backed_ = true;

    const double t_max = spec.support_radius();
    const std::size_t m = static_cast<std::size_t>(grid_size);
    const double h = t_max / static_cast<double>(m);

    grid_.resize(m + 1);
    density_.resize(m + 1);
    cdf_.resize(m + 1);
    for (std::size_t i = 0; i <= m; ++i) grid_[i] = t_max * static_cast<double>(i) / m;

    const auto g_raw = [&](double t) { return spec.radial_density(t) * sin_pow(t, spec.n - 1); };

    // Composite Simpson per cell with analytic midpoints; increments of a
    // nonnegative integrand are nonnegative, so the CDF is monotone.
    cdf_[0] = 0.0;
    density_[0] = g_raw(grid_[0]);
    for (std::size_t i = 0; i < m; ++i) {
        const double fl = g_raw(grid_[i]);
        const double fm = g_raw(grid_[i] + 0.5 * h);
        const double fr = g_raw(grid_[i + 1]);
        if (!std::isfinite(fl) || !std::isfinite(fm) || !std::isfinite(fr))
            throw NumericalError("build_profile: non-finite density near t = " +
                                 std::to_string(grid_[i]));
        cdf_[i + 1] = cdf_[i] + h / 6.0 * (fl + 4.0 * fm + fr);
        density_[i + 1] = fr;
    }

    norm_constant_ = cdf_.back();
    if (!(norm_constant_ > 0.0) || !std::isfinite(norm_constant_))
        throw NumericalError("build_profile: density mass is zero or non-finite");
    for (std::size_t i = 0; i <= m; ++i) {
        density_[i] /= norm_constant_;
        cdf_[i] /= norm_constant_;
    }
    cdf_.back() = 1.0;
}

RadialProfile RadialProfile::from_tables(int n, std::vector<double> grid,
                                         std::vector<double> raw_density) {
    if (n < 1) throw UsageError("from_tables: dimension must be >= 1");
    if (grid.size() < 2 || grid.size() != raw_density.size())
        throw UsageError("from_tables: grid/density size mismatch");
    if (grid.front() != 0.0) throw UsageError("from_tables: grid must start at 0");
    const double h = grid[1] - grid[0];
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (std::abs((grid[i + 1] - grid[i]) - h) > 1e-12 * std::max(1.0, h))
            throw UsageError("from_tables: grid must be uniform");
    }
    for (double v : raw_density)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw UsageError("from_tables: density values must be finite and >= 0");

    RadialProfile p;
    p.n_ = n;
    p.spec_backed_ = false;
    p.grid_ = std::move(grid);
    p.density_ = std::move(raw_density);
    p.cdf_.assign(p.grid_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < p.grid_.size(); ++i)
        p.cdf_[i + 1] = p.cdf_[i] + 0.5 * h * (p.density_[i] + p.density_[i + 1]);
    p.norm_constant_ = p.cdf_.back();
    if (!(p.norm_constant_ > 0.0)) throw NumericalError("from_tables: density mass is zero");
    for (std::size_t i = 0; i < p.cdf_.size(); ++i) {
        p.density_[i] /= p.norm_constant_;
        p.cdf_[i] /= p.norm_constant_;
    }
    p.cdf_.back() = 1.0;
    return p;
}

double RadialProfile::cdf(double t) const {
    if (t < -1e-12 || t > kHalfPi + 1e-12)
        throw UsageError("cdf: colatitude outside [0, pi/2]");
    t = std::clamp(t, 0.0, kHalfPi);
    if (t >= grid_.back()) return 1.0;
    const double h = grid_[1] - grid_[0];
    const std::size_t i = std::min(static_cast<std::size_t>(t / h), grid_.size() - 2);
    const double frac = (t - grid_[i]) / h;
    return cdf_[i] + frac * (cdf_[i + 1] - cdf_[i]);
}

double RadialProfile::quantile(double p) const {
    if (p < -1e-12 || p > 1.0 + 1e-12) throw UsageError("quantile: p outside [0, 1]");
    p = std::clamp(p, 0.0, 1.0);
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), p);
    const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
    if (i == 0) return grid_.front();
    const double a = cdf_[i - 1], b = cdf_[i];
    if (b <= a) return grid_[i];  // degenerate segment, defensive
    const double frac = (p - a) / (b - a);
    return grid_[i - 1] + frac * (grid_[i] - grid_[i - 1]);
}

double RadialProfile::density_at(double t) const {
    if (t < 0.0 || t > grid_.back()) return 0.0;
    const double h = grid_[1] - grid_[0];
    const std::size_t i = std::min(static_cast<std::size_t>(t / h), grid_.size() - 2);
    const double frac = (t - grid_[i]) / h;
    return density_[i] + frac * (density_[i + 1] - density_[i]);
}

double RadialProfile::mean_radial_distance() const {
    // Simpson per cell; for spec-backed profiles the midpoint density is
    // evaluated analytically, otherwise interpolated linearly.
    const double h = grid_[1] - grid_[0];
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        const double tl = grid_[i], tr = grid_[i + 1], tm = tl + 0.5 * h;
        const double gl = density_[i], gr = density_[i + 1];
        const double gm = spec_backed_
                              ? spec_.radial_density(tm) * sin_pow(tm, n_ - 1) / norm_constant_
                              : 0.5 * (gl + gr);
        total += h / 6.0 * (tl * gl + 4.0 * tm * gm + tr * gr);
    }
    return total;
}

double RadialProfile::density_wrt_uniform(double t) const {
    if (spec_backed_) return spec_.radial_density(t);
    if (t < 0.0 || t > grid_.back()) return 0.0;
    const double h = grid_[1] - grid_[0];
    const double t_eval = std::max(t, h);  // avoid the 0/0 at the pole
    const double s = sin_pow(t_eval, n_ - 1);
    return s > 0.0 ? density_at(t) / s : 0.0;
}

RadialProfile build_profile(const RadialDensitySpec& spec, int grid_size) {
    return RadialProfile(spec, grid_size);
}

void DiscreteMeasure::validate() const {
    if (points.size() != weights.size())
        throw UsageError("DiscreteMeasure: points/weights size mismatch");
    if (points.empty()) throw UsageError("DiscreteMeasure: empty measure");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw UsageError("DiscreteMeasure: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw UsageError("DiscreteMeasure: weights sum to " + std::to_string(sum));
}

namespace {

DiscreteMeasure finalize_cloud(std::vector<SpherePoint> pts, std::vector<double> w) {
    // Drop zero-weight nodes (cap supports), then renormalize.
    std::vector<SpherePoint> points;
    std::vector<double> weights;
    double sum = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (w[i] > 0.0) {
            points.push_back(std::move(pts[i]));
            weights.push_back(w[i]);
            sum += w[i];
        }
    }
    if (!(sum > 0.0)) throw NumericalError("discretize_on_sphere: all weights vanish");
    for (double& x : weights) x /= sum;
    DiscreteMeasure m{std::move(points), std::move(weights)};
    m.validate();
    return m;
}

}  // namespace

DiscreteMeasure discretize_on_sphere(const RadialProfile& profile, int count,
                                     DiscretizationScheme scheme, std::uint64_t seed) {
    if (profile.n() != 2)
        throw UnsupportedDimensionError("discretize_on_sphere: implemented for S^2 only");
    if (count < 4) throw UsageError("discretize_on_sphere: count must be >= 4");

    // The schemes are deterministic; the seed only sets a longitude offset.
    Rng rng(seed);
    const double lon_offset = rng.uniform(0.0, 2.0 * kPi);

    std::vector<SpherePoint> pts;
    std::vector<double> w;
    pts.reserve(static_cast<std::size_t>(count));
    w.reserve(static_cast<std::size_t>(count));

    if (scheme == DiscretizationScheme::Fibonacci) {
        // Equal-area lattice on the upper half-sphere, reweighted by the
        // radial factor of the target.
        const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
        for (int i = 0; i < count; ++i) {
            const double z = (static_cast<double>(i) + 0.5) / count;  // height in (0,1)
            const double t = std::acos(z);
            double lon = 2.0 * kPi * std::fmod(static_cast<double>(i) * golden, 1.0);
            lon = std::fmod(lon + lon_offset, 2.0 * kPi);
            pts.push_back(s2_point(t, lon));
            w.push_back(profile.density_wrt_uniform(t));
        }
    } else {
        // Product colatitude x longitude grid at cell centers, weighted by
        // the tabulated density (independent of longitude).
        const double t_max = profile.support_radius();
        const int n_t = std::max(2, static_cast<int>(std::lround(std::sqrt(count / 3.0))));
        const int n_lon = std::max(4, count / n_t);
        const double dt = t_max / n_t;
        for (int i = 0; i < n_t; ++i) {
            const double t = (static_cast<double>(i) + 0.5) * dt;
            const double wt = profile.density_at(t) * dt / n_lon;
            for (int j = 0; j < n_lon; ++j) {
                const double lon =
                    std::fmod(2.0 * kPi * (static_cast<double>(j) + 0.5) / n_lon + lon_offset,
                              2.0 * kPi);
                pts.push_back(s2_point(t, lon));
                w.push_back(wt);
            }
        }
    }
    return finalize_cloud(std::move(pts), std::move(w));
}

}  // namespace hsot
