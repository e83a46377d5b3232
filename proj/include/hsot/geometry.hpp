#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

namespace hsot {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm(const Vec& v);

// Point of the unit sphere S^n embedded in R^{n+1}. Ambient coordinates are
// used throughout so symmetries apply exactly in every dimension; the last
// coordinate is the height (x_{n+1} >= 0 on the upper half-sphere).
class SpherePoint {
  public:
    /// Validates the unit-norm invariant (|1 - ||coords||| <= 1e-12).
    explicit SpherePoint(Vec coords);

    /// Rescales an arbitrary nonzero vector onto the sphere.
    static SpherePoint normalized(Vec v);

    /// North pole (0, ..., 0, 1) of S^n.
    static SpherePoint north_pole(int n);

    /// Standard basis vector e_i (0-based) of R^{n+1} as a sphere point.
    static SpherePoint axis(int n, int i);

    int n() const { return static_cast<int>(coords_.size()) - 1; }
    int ambient_dim() const { return static_cast<int>(coords_.size()); }
    const Vec& coords() const { return coords_; }
    double operator[](std::size_t i) const { return coords_[i]; }
    /// Height coordinate x_{n+1}.
    double height() const { return coords_.back(); }

    SpherePoint antipode() const;

  private:
    Vec coords_;
};

double dot(const SpherePoint& x, const SpherePoint& y);

/// Geodesic (great-circle) distance arccos(x . y), dot clamped to [-1, 1].
double geodesic_distance(const SpherePoint& x, const SpherePoint& y);

/// Euclidean (chord) distance in the ambient space.
double euclidean_distance(const SpherePoint& x, const SpherePoint& y);

/// Colatitude d(x, N), the geodesic distance to the north pole.
double colatitude(const SpherePoint& x);

// Tangent vector at a base point; the direction must be orthogonal to the
// base (within 1e-10) and its length is read as arclength in radians.
struct TangentVector {
    TangentVector(SpherePoint base_point, Vec dir);
    SpherePoint base;
    Vec direction;
    double length() const;
};

/// Riemannian exponential: cos(|v|) base + sin(|v|) v/|v|. Rejects |v| > pi.
SpherePoint exp_map(const TangentVector& v);

/// Point at arclength s from x on the minimizing geodesic toward y.
/// Antipodal endpoints with 0 < s < pi are rejected (no unique geodesic).
SpherePoint geodesic_point(const SpherePoint& x, const SpherePoint& y, double s);

/// Rotation of the first two ambient coordinates by theta; fixes the rest,
/// in particular the height. Requires n >= 2.
SpherePoint rotate_about_pole(const SpherePoint& x, double theta);

/// Flips the sign of the height coordinate; fixes the equator pointwise.
SpherePoint reflect_equator(const SpherePoint& x);

// Explicit orthogonal matrix with determinant +1, validated on construction.
class Rotation {
  public:
    /// Row-major (n+1)x(n+1) matrix; checks M^T M = I and det = +1 to 1e-10.
    explicit Rotation(std::vector<Vec> rows);

    /// The block rotation of the first two coordinates on S^n, n >= 2.
    static Rotation pole_block(int n, double theta);

    SpherePoint apply(const SpherePoint& x) const;
    const std::vector<Vec>& rows() const { return rows_; }

  private:
    std::vector<Vec> rows_;
};

/// i.i.d. samples from the uniform measure on the upper half-sphere of S^n:
/// normalized Gaussian vectors reflected to height >= 0. Deterministic in seed.
std::vector<SpherePoint> sample_uniform_halfsphere(int n, int count, std::uint64_t seed);

/// Uniform samples on the full sphere S^n (same construction, no reflection).
std::vector<SpherePoint> sample_uniform_sphere(int n, int count, std::uint64_t seed);

/// Point of S^2 at the given colatitude and longitude.
SpherePoint s2_point(double colat, double lon);

/// Longitude atan2(x_2, x_1) of a point of S^2.
double azimuth(const SpherePoint& x);

}  // namespace hsot
