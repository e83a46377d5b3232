#pragma once

#include <cstdint>
#include <vector>

#include "hsot/geometry.hpp"

namespace hsot {

enum class RadialFamily { Uniform, GaussianLike, Tempered, CapRestriction };
enum class PotentialKind { Quadratic, Linear };

// Rotationally invariant density family on the upper half-sphere, described
// by its radial factor f(t) with respect to the uniform measure, t = d(x, N).
//
//   uniform          f = 1
//   gaussian_like    f = exp(-beta t^2),            beta > 0
//   tempered         f = exp(-V(t)/epsilon),        V quadratic (t^2) or linear (t)
//   cap_restriction  a base family truncated to the ball B(N, cap_radius)
struct RadialDensitySpec {
    int n = 2;
    RadialFamily family = RadialFamily::Uniform;
    double beta = 1.0;
    PotentialKind potential = PotentialKind::Quadratic;
    double epsilon = 1.0;
    double cap_radius = kHalfPi;
    RadialFamily cap_base = RadialFamily::Uniform;  // base family under the cap

    static RadialDensitySpec uniform(int n);
    static RadialDensitySpec gaussian_like(int n, double beta);
    static RadialDensitySpec tempered(int n, PotentialKind potential, double epsilon);
    /// Truncates a (non-cap) base spec to the ball of the given radius.
    static RadialDensitySpec cap(const RadialDensitySpec& base, double radius);

    void validate() const;

    /// sup of the support in colatitude: cap_radius for caps, pi/2 otherwise.
    double support_radius() const;

    /// Unnormalized radial factor f(t); zero beyond the support.
    double radial_density(double t) const;
};

double potential_value(PotentialKind kind, double t);

// Tabulated normalized radial law of a rotationally invariant measure:
// density g(t) proportional to f(t) sin^{n-1}(t) on a uniform colatitude grid
// over the support, with its CDF. Quadrature is composite Simpson with
// analytic midpoint evaluations, so the tabulated CDF is monotone whenever
// the density is nonnegative.
class RadialProfile {
  public:
    RadialProfile(const RadialDensitySpec& spec, int grid_size);

    /// Builds a profile from raw tabulated density values on a uniform grid
    /// starting at 0 (CDF by trapezoid). Values need not be normalized.
    static RadialProfile from_tables(int n, std::vector<double> grid,
                                     std::vector<double> raw_density);

    int n() const { return n_; }
    const RadialDensitySpec& spec() const { return spec_; }
    bool spec_backed() const { return spec_backed_; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& density() const { return density_; }
    const std::vector<double>& cdf_values() const { return cdf_; }
    double support_radius() const { return grid_.back(); }

    /// Piecewise-linear CDF; 1 beyond the support, domain [0, pi/2].
    double cdf(double t) const;

    /// Generalized inverse inf{t : F(t) >= p} of the interpolated CDF.
    double quantile(double p) const;

    /// Piecewise-linear normalized density; 0 beyond the support.
    double density_at(double t) const;

    /// Mean colatitude, the integral of t g(t) dt.
    double mean_radial_distance() const;

    /// Radial factor proportional to f(t), used to reweight near-uniform
    /// point sets. Exact for spec-backed profiles, recovered from the
    /// tabulated density otherwise.
    double density_wrt_uniform(double t) const;

  private:
    RadialProfile() = default;

    int n_ = 2;
    bool spec_backed_ = false;
    RadialDensitySpec spec_;
    double norm_constant_ = 1.0;   // raw mass before normalization
    std::vector<double> grid_;
    std::vector<double> density_;  // normalized g(t_i)
    std::vector<double> cdf_;      // F(t_i), F(0) = 0, F(end) = 1
};

/// Tabulates and normalizes a radial spec; grid_size is the number of
/// quadrature intervals (>= 64).
RadialProfile build_profile(const RadialDensitySpec& spec, int grid_size = 4096);

// Weighted point cloud on the sphere with probability weights.
struct DiscreteMeasure {
    std::vector<SpherePoint> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }
    void validate() const;  // weights nonnegative and summing to 1 (1e-10)
};

enum class DiscretizationScheme { Grid, Fibonacci };

// Deterministic discretization of a radial profile into a weighted cloud on
// the upper half-sphere of S^2. The grid scheme lays a colatitude x longitude
// product grid weighted by the tabulated density; the fibonacci scheme
// reweights an equal-area fibonacci lattice by the radial factor. The seed
// only rotates the configuration about the pole. Zero-weight nodes (outside
// a cap support) are dropped, so the output may hold fewer than count points.
DiscreteMeasure discretize_on_sphere(const RadialProfile& profile, int count,
                                     DiscretizationScheme scheme, std::uint64_t seed);

}  // namespace hsot
