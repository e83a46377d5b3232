#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hsot/errors.hpp"
#include "hsot/geometry.hpp"
#include "hsot/rng.hpp"

using namespace hsot;

namespace {

double max_coord_diff(const SpherePoint& a, const SpherePoint& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.coords().size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("sphere point invariants") {
    CHECK_THROWS_AS(SpherePoint({1.0, 1.0}), UsageError);
    CHECK_THROWS_AS(SpherePoint::normalized({0.0, 0.0, 0.0}), UsageError);
    const SpherePoint p = SpherePoint::normalized({3.0, 4.0, 0.0});
    CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(p.n() == 2);
}

TEST_CASE("geodesic distance basics") {
    const SpherePoint n2 = SpherePoint::north_pole(2);
    CHECK(geodesic_distance(n2, n2) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(geodesic_distance(SpherePoint::axis(2, 0), SpherePoint::axis(2, 1)) ==
          doctest::Approx(kHalfPi).epsilon(1e-15));
    CHECK(geodesic_distance(n2, n2.antipode()) == doctest::Approx(kPi).epsilon(1e-15));
    CHECK_THROWS_AS(geodesic_distance(n2, SpherePoint::north_pole(3)), UsageError);
}

TEST_CASE("exp map") {
    const SpherePoint n2 = SpherePoint::north_pole(2);
    CHECK(max_coord_diff(exp_map(TangentVector(n2, {0.0, 0.0, 0.0})), n2) == 0.0);

    const SpherePoint quarter = exp_map(TangentVector(n2, {kHalfPi, 0.0, 0.0}));
    CHECK(max_coord_diff(quarter, SpherePoint::axis(2, 0)) < 1e-12);

    const SpherePoint full = exp_map(TangentVector(n2, {kPi, 0.0, 0.0}));
    CHECK(max_coord_diff(full, n2.antipode()) < 1e-12);

    CHECK_THROWS_AS(exp_map(TangentVector(n2, {kPi + 1e-6, 0.0, 0.0})), UsageError);
    // non-orthogonal direction rejected at construction
    CHECK_THROWS_AS(TangentVector(n2, {0.0, 0.0, 0.5}), UsageError);
}

TEST_CASE("geodesic point endpoints and midpoint") {
    const SpherePoint n2 = SpherePoint::north_pole(2);
    const SpherePoint e1 = SpherePoint::axis(2, 0);
    CHECK(max_coord_diff(geodesic_point(n2, e1, 0.0), n2) == 0.0);
    CHECK(max_coord_diff(geodesic_point(n2, e1, kHalfPi), e1) < 1e-12);

    const SpherePoint mid = geodesic_point(n2, e1, kPi / 4.0);
    const double inv_sqrt2 = std::sqrt(2.0) / 2.0;
    CHECK(mid[0] == doctest::Approx(inv_sqrt2).epsilon(1e-14));
    CHECK(mid[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(mid[2] == doctest::Approx(inv_sqrt2).epsilon(1e-14));

    CHECK_THROWS_AS(geodesic_point(n2, e1, kHalfPi + 1e-6), UsageError);
    CHECK_THROWS_AS(geodesic_point(n2, n2.antipode(), 1.0), AmbiguityError);
    // s = pi to the antipode is unambiguous
    CHECK(max_coord_diff(geodesic_point(n2, n2.antipode(), kPi), n2.antipode()) == 0.0);
}

TEST_CASE("rotation about the pole") {
    const SpherePoint n2 = SpherePoint::north_pole(2);
    CHECK(max_coord_diff(rotate_about_pole(n2, 1.234), n2) == 0.0);
    CHECK(max_coord_diff(rotate_about_pole(SpherePoint::axis(2, 0), kHalfPi),
                         SpherePoint::axis(2, 1)) < 1e-12);

    Rng rng(11);
    for (int k = 0; k < 50; ++k) {
        const SpherePoint x = sample_uniform_halfsphere(2, 1, rng.next_u64())[0];
        CHECK(max_coord_diff(rotate_about_pole(x, 2.0 * kPi), x) < 1e-12);
        CHECK(rotate_about_pole(x, 0.7).height() == x.height());
    }
}

TEST_CASE("equator reflection") {
    const SpherePoint n2 = SpherePoint::north_pole(2);
    CHECK(max_coord_diff(reflect_equator(n2), n2.antipode()) == 0.0);
    const SpherePoint eq = SpherePoint::axis(2, 0);
    CHECK(max_coord_diff(reflect_equator(eq), eq) == 0.0);
    Rng rng(12);
    for (int k = 0; k < 50; ++k) {
        const SpherePoint x = sample_uniform_sphere(3, 1, rng.next_u64())[0];
        CHECK(max_coord_diff(reflect_equator(reflect_equator(x)), x) == 0.0);
    }
}

TEST_CASE("symmetries preserve distances") {
    Rng rng(13);
    for (int k = 0; k < 200; ++k) {
        const auto pts = sample_uniform_sphere(2, 2, rng.next_u64());
        const double d = geodesic_distance(pts[0], pts[1]);
        const double theta = rng.uniform(0.0, 2.0 * kPi);
        CHECK(std::abs(geodesic_distance(rotate_about_pole(pts[0], theta),
                                         rotate_about_pole(pts[1], theta)) -
                       d) < 1e-12);
        CHECK(std::abs(geodesic_distance(reflect_equator(pts[0]), reflect_equator(pts[1])) -
                       d) < 1e-12);
    }
}

TEST_CASE("rotation matrix validation") {
    const Rotation r = Rotation::pole_block(2, 0.9);
    const SpherePoint x = s2_point(0.8, 0.3);
    CHECK(max_coord_diff(r.apply(x), rotate_about_pole(x, 0.9)) < 1e-12);

    CHECK_THROWS_AS(Rotation({{1.0, 1.0}, {0.0, 1.0}}), UsageError);
    // orthogonal but orientation-reversing
    CHECK_THROWS_AS(Rotation({{1.0, 0.0}, {0.0, -1.0}}), UsageError);
}

TEST_CASE("triangle inequality on random triples") {
    Rng rng(14);
    for (int k = 0; k < 500; ++k) {
        const auto pts = sample_uniform_sphere(2, 3, rng.next_u64());
        CHECK(geodesic_distance(pts[0], pts[2]) <=
              geodesic_distance(pts[0], pts[1]) + geodesic_distance(pts[1], pts[2]) + 1e-10);
    }
}

TEST_CASE("exp map and distance are consistent") {
    Rng rng(15);
    for (int k = 0; k < 200; ++k) {
        const SpherePoint base = sample_uniform_sphere(2, 1, rng.next_u64())[0];
        // random tangent direction via projection
        Vec dir = {rng.normal(), rng.normal(), rng.normal()};
        const double along = dot(dir, base.coords());
        for (std::size_t i = 0; i < 3; ++i) dir[i] -= along * base[i];
        const double len = norm(dir);
        if (len < 1e-9) continue;
        const double want = rng.uniform(0.0, kPi);
        for (double& c : dir) c *= want / len;
        CHECK(std::abs(geodesic_distance(base, exp_map(TangentVector(base, dir))) - want) <
              1e-10);
    }
}

TEST_CASE("pairwise metric order equivalence") {
    Rng rng(16);
    for (int k = 0; k < 2000; ++k) {
        const auto pts = sample_uniform_sphere(2, 4, rng.next_u64());
        const bool geo = geodesic_distance(pts[0], pts[1]) <= geodesic_distance(pts[2], pts[3]);
        const bool euc =
            euclidean_distance(pts[0], pts[1]) <= euclidean_distance(pts[2], pts[3]);
        CHECK(geo == euc);
    }
}

TEST_CASE("uniform half-sphere sampling") {
    const auto small = sample_uniform_halfsphere(2, 10000, 21);
    for (const SpherePoint& x : small) {
        CHECK(x.height() >= 0.0);
        CHECK(std::abs(norm(x.coords()) - 1.0) <= 1e-12);
    }

    // mean colatitude is 1 (integral of t sin t over [0, pi/2])
    const auto big = sample_uniform_halfsphere(2, 100000, 22);
    double mean = 0.0;
    int in_cap = 0;
    for (const SpherePoint& x : big) {
        const double t = colatitude(x);
        mean += t;
        if (t <= kPi / 3.0) ++in_cap;
    }
    mean /= static_cast<double>(big.size());
    CHECK(std::abs(mean - 1.0) < 0.01);

    // cap of radius pi/3 holds half of the mass: 1 - cos(pi/3) = 1/2
    CHECK(std::abs(static_cast<double>(in_cap) / static_cast<double>(big.size()) - 0.5) <
          0.01);

    // determinism in the seed
    const auto again = sample_uniform_halfsphere(2, 100, 22);
    const auto expect = sample_uniform_halfsphere(2, 100, 22);
    for (int i = 0; i < 100; ++i) CHECK(max_coord_diff(again[i], expect[i]) == 0.0);
}
