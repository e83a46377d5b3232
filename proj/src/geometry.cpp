#include "hsot/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hsot/errors.hpp"
#include "hsot/rng.hpp"

namespace hsot {

namespace {

void require_same_dim(const SpherePoint& x, const SpherePoint& y, const char* op) {
    if (x.ambient_dim() != y.ambient_dim())
        throw UsageError(std::string(op) + ": dimension mismatch (" +
                         std::to_string(x.ambient_dim()) + " vs " +
                         std::to_string(y.ambient_dim()) + ")");
}

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vec& v) { return std::sqrt(dot(v, v)); }

SpherePoint::SpherePoint(Vec coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) throw UsageError("SpherePoint: need at least 2 coordinates");
    const double r = norm(coords_);
    if (std::abs(r - 1.0) > 1e-12)
        throw UsageError("SpherePoint: coordinates not unit norm (|v| = " +
                         std::to_string(r) + ")");
}

SpherePoint SpherePoint::normalized(Vec v) {
    const double r = norm(v);
    if (!(r > 1e-14)) throw UsageError("SpherePoint::normalized: vector too close to zero");
    for (double& c : v) c /= r;
    return SpherePoint(std::move(v));
}

SpherePoint SpherePoint::north_pole(int n) {
    if (n < 1) throw UsageError("north_pole: sphere dimension must be >= 1");
    Vec v(static_cast<std::size_t>(n) + 1, 0.0);
    v.back() = 1.0;
    return SpherePoint(std::move(v));
}

SpherePoint SpherePoint::axis(int n, int i) {
    if (n < 1 || i < 0 || i > n) throw UsageError("axis: index out of range");
    Vec v(static_cast<std::size_t>(n) + 1, 0.0);
    v[static_cast<std::size_t>(i)] = 1.0;
    return SpherePoint(std::move(v));
}

SpherePoint SpherePoint::antipode() const {
    Vec v = coords_;
    for (double& c : v) c = -c;
    return SpherePoint(std::move(v));
}

double dot(const SpherePoint& x, const SpherePoint& y) { return dot(x.coords(), y.coords()); }

double geodesic_distance(const SpherePoint& x, const SpherePoint& y) {
    require_same_dim(x, y, "geodesic_distance");
    return std::acos(clamp_unit(dot(x, y)));
}

double euclidean_distance(const SpherePoint& x, const SpherePoint& y) {
    require_same_dim(x, y, "euclidean_distance");
    double s = 0.0;
    for (std::size_t i = 0; i < x.coords().size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double colatitude(const SpherePoint& x) { return std::acos(clamp_unit(x.height())); }

TangentVector::TangentVector(SpherePoint base_point, Vec dir)
    : base(std::move(base_point)), direction(std::move(dir)) {
    if (base.coords().size() != direction.size())
        throw UsageError("TangentVector: dimension mismatch");
    if (std::abs(dot(base.coords(), direction)) > 1e-10)
        throw UsageError("TangentVector: direction not orthogonal to base");
}

double TangentVector::length() const { return norm(direction); }

SpherePoint exp_map(const TangentVector& v) {
    const double len = v.length();
    if (len > kPi + 1e-12)
        throw UsageError("exp_map: |direction| exceeds pi, geodesic not minimizing");
    if (len == 0.0) return v.base;
    const double c = std::cos(len), s = std::sin(len);
    Vec out(v.base.coords().size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = c * v.base[i] + s * v.direction[i] / len;
    return SpherePoint::normalized(std::move(out));
}

SpherePoint geodesic_point(const SpherePoint& x, const SpherePoint& y, double s) {
    require_same_dim(x, y, "geodesic_point");
    const double d = geodesic_distance(x, y);
    if (s < -1e-12 || s > d + 1e-12)
        throw UsageError("geodesic_point: arclength " + std::to_string(s) +
                         " outside [0, " + std::to_string(d) + "]");
    s = std::clamp(s, 0.0, d);
    if (s == 0.0) return x;

    // Unit tangent at x toward y; vanishes only for y = +-x.
    const double c = dot(x, y);
    Vec u(x.coords().size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = y[i] - c * x[i];
    const double nu = norm(u);
    if (nu < 1e-12) {
        if (d > kHalfPi) {  // y = -x
            if (s >= d - 1e-12) return y;
            throw AmbiguityError("geodesic_point: antipodal endpoints, geodesic not unique");
        }
        return x;  // y == x and s == d == 0 handled above; defensive
    }
    const double cs = std::cos(s), ss = std::sin(s);
    Vec out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = cs * x[i] + ss * u[i] / nu;
    return SpherePoint::normalized(std::move(out));
}

SpherePoint rotate_about_pole(const SpherePoint& x, double theta) {
    if (x.n() < 2)
        throw UsageError("rotate_about_pole: needs ambient dimension >= 3");
    Vec v = x.coords();
    const double c = std::cos(theta), s = std::sin(theta);
    const double a = v[0], b = v[1];
    v[0] = c * a - s * b;
    v[1] = s * a + c * b;
    return SpherePoint(std::move(v));
}

SpherePoint reflect_equator(const SpherePoint& x) {
    Vec v = x.coords();
    v.back() = -v.back();
    return SpherePoint(std::move(v));
}

Rotation::Rotation(std::vector<Vec> rows) : rows_(std::move(rows)) {
    const std::size_t m = rows_.size();
    if (m < 2) throw UsageError("Rotation: matrix too small");
    for (const Vec& r : rows_)
        if (r.size() != m) throw UsageError("Rotation: matrix not square");

    // M^T M = I within 1e-10.
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < m; ++k) s += rows_[k][i] * rows_[k][j];
            const double expect = (i == j) ? 1.0 : 0.0;
            if (std::abs(s - expect) > 1e-10)
                throw UsageError("Rotation: matrix not orthogonal");
        }
    }

    // det = +1 within 1e-10, via LU with partial pivoting.
    std::vector<Vec> lu = rows_;
    double det = 1.0;
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(lu[r][col]) > std::abs(lu[piv][col])) piv = r;
        if (piv != col) {
            std::swap(lu[piv], lu[col]);
            det = -det;
        }
        det *= lu[col][col];
        if (lu[col][col] == 0.0) break;
        for (std::size_t r = col + 1; r < m; ++r) {
            const double f = lu[r][col] / lu[col][col];
            for (std::size_t k = col; k < m; ++k) lu[r][k] -= f * lu[col][k];
        }
    }
    if (std::abs(det - 1.0) > 1e-10)
        throw UsageError("Rotation: determinant is not +1");
}

Rotation Rotation::pole_block(int n, double theta) {
    if (n < 2) throw UsageError("Rotation::pole_block: needs n >= 2");
    const std::size_t m = static_cast<std::size_t>(n) + 1;
    std::vector<Vec> rows(m, Vec(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) rows[i][i] = 1.0;
    const double c = std::cos(theta), s = std::sin(theta);
    rows[0][0] = c;
    rows[0][1] = -s;
    rows[1][0] = s;
    rows[1][1] = c;
    return Rotation(std::move(rows));
}

SpherePoint Rotation::apply(const SpherePoint& x) const {
    if (x.coords().size() != rows_.size())
        throw UsageError("Rotation::apply: dimension mismatch");
    Vec out(rows_.size(), 0.0);
    for (std::size_t i = 0; i < rows_.size(); ++i) out[i] = dot(rows_[i], x.coords());
    return SpherePoint::normalized(std::move(out));
}

namespace {

std::vector<SpherePoint> sample_sphere_impl(int n, int count, std::uint64_t seed,
                                            bool reflect_to_upper) {
    if (n < 1) throw UsageError("sample: sphere dimension must be >= 1");
    if (count < 1) throw UsageError("sample: count must be >= 1");
    Rng rng(seed);
    std::vector<SpherePoint> out;
    out.reserve(static_cast<std::size_t>(count));
    const std::size_t dim = static_cast<std::size_t>(n) + 1;
    while (out.size() < static_cast<std::size_t>(count)) {
        Vec v(dim);
        for (double& c : v) c = rng.normal();
        const double r = norm(v);
        if (r < 1e-12) continue;  // astronomically rare, resample
        for (double& c : v) c /= r;
        if (reflect_to_upper && v.back() < 0.0) v.back() = -v.back();
        out.push_back(SpherePoint(std::move(v)));
    }
    return out;
}

}  // namespace

std::vector<SpherePoint> sample_uniform_halfsphere(int n, int count, std::uint64_t seed) {
    return sample_sphere_impl(n, count, seed, /*reflect_to_upper=*/true);
}

std::vector<SpherePoint> sample_uniform_sphere(int n, int count, std::uint64_t seed) {
    return sample_sphere_impl(n, count, seed, /*reflect_to_upper=*/false);
}

SpherePoint s2_point(double colat, double lon) {
    const double st = std::sin(colat);
    return SpherePoint::normalized(
        {st * std::cos(lon), st * std::sin(lon), std::cos(colat)});
}

double azimuth(const SpherePoint& x) {
    if (x.ambient_dim() != 3) throw UsageError("azimuth: defined on S^2 only");
    return std::atan2(x[1], x[0]);
}

}  // namespace hsot
