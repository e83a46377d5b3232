#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "hsot/errors.hpp"
#include "hsot/measures.hpp"
#include "hsot/rng.hpp"
#include "hsot/transport.hpp"

using namespace hsot;

namespace {

// Test-side quadrature oracle, independent of the profile machinery:
// 64-point Gauss-Legendre on [a, b].
double gauss_legendre(double a, double b, const std::function<double(double)>& f) {
    static std::vector<double> nodes, weights;
    if (nodes.empty()) {
        const int n = 64;
        nodes.resize(n);
        weights.resize(n);
        for (int i = 0; i < n; ++i) {
            // Newton refinement from the Chebyshev initial guess
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double step = p1 / dp;
                x -= step;
                if (std::abs(step) < 1e-15) break;
            }
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double t = 0.5 * (b - a) * nodes[i] + 0.5 * (a + b);
        s += weights[i] * f(t);
    }
    return 0.5 * (b - a) * s;
}

RadialMap linear_map(double slope, int nodes = 512) {
    RadialMap map;
    map.n = 2;
    map.grid.resize(nodes);
    map.values.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
        map.grid[i] = kHalfPi * i / (nodes - 1.0);
        map.values[i] = slope * map.grid[i];
    }
    return map;
}

DiscreteMeasure uniform_cloud(int n_points, std::uint64_t seed) {
    DiscreteMeasure m;
    m.points = sample_uniform_halfsphere(2, n_points, seed);
    m.weights.assign(n_points, 1.0 / n_points);
    return m;
}

}  // namespace

TEST_CASE("monotone map: self transport is the identity") {
    const RadialProfile u = build_profile(RadialDensitySpec::uniform(2), 4096);
    const RadialMap map = monotone_map(u, u);
    double dev = 0.0;
    for (std::size_t i = 0; i < map.grid.size(); ++i)
        dev = std::max(dev, std::abs(map.values[i] - map.grid[i]));
    CHECK(dev < 1e-9);

    const LipschitzReport lip = radial_lipschitz(map);
    CHECK(std::abs(lip.lip_formula.value() - 1.0) < 1e-8);
}

TEST_CASE("monotone map pushes the source law to the target law") {
    const RadialProfile u = build_profile(RadialDensitySpec::uniform(2), 4096);
    const RadialProfile g = build_profile(RadialDensitySpec::gaussian_like(2, 1.0), 4096);
    const RadialMap map = monotone_map(u, g);

    CHECK(map.values.back() == doctest::Approx(kHalfPi).epsilon(1e-12));
    for (std::size_t i = 0; i < map.grid.size(); ++i) {
        CHECK(map.values[i] <= map.grid[i] + 1e-12);  // contraction toward the pole
        if (i > 0) CHECK(map.values[i] >= map.values[i - 1]);
        CHECK(std::abs(g.cdf(map.values[i]) - u.cdf(map.grid[i])) < 1e-7);
    }

    // cap target: the support edge is hit exactly
    const RadialProfile cap = build_profile(
        RadialDensitySpec::cap(RadialDensitySpec::uniform(2), kPi / 3.0), 4096);
    const RadialMap cap_map = monotone_map(u, cap);
    CHECK(cap_map.values.back() == doctest::Approx(kPi / 3.0).epsilon(1e-15));

    CHECK_THROWS_AS(monotone_map(u, build_profile(RadialDensitySpec::uniform(3), 4096)),
                    UsageError);
    CHECK_THROWS_AS(monotone_map(cap, u), UsageError);  // source density vanishes inside
}

TEST_CASE("apply_radial_map moves points along their meridian") {
    const RadialProfile u = build_profile(RadialDensitySpec::uniform(2), 4096);
    const RadialProfile cap = build_profile(
        RadialDensitySpec::cap(RadialDensitySpec::gaussian_like(2, 1.0), 1.1), 4096);
    const RadialMap identity = monotone_map(u, u);
    const RadialMap to_cap = monotone_map(u, cap);

    Rng rng(41);
    for (int k = 0; k < 100; ++k) {
        const SpherePoint x = sample_uniform_halfsphere(2, 1, rng.next_u64())[0];
        CHECK(euclidean_distance(apply_radial_map(identity, x), x) < 1e-9);

        const SpherePoint y = apply_radial_map(to_cap, x);
        CHECK(std::abs(colatitude(y) - to_cap(colatitude(x))) < 1e-12);
        if (colatitude(x) > 1e-3)
            CHECK(std::abs(azimuth(y) - azimuth(x)) < 1e-10);  // same meridian

        // equivariance under rotations about the pole
        const double theta = rng.uniform(0.0, 2.0 * kPi);
        const SpherePoint lhs = apply_radial_map(to_cap, rotate_about_pole(x, theta));
        const SpherePoint rhs = rotate_about_pole(y, theta);
        CHECK(euclidean_distance(lhs, rhs) < 1e-12);
    }

    // the pole is fixed
    const SpherePoint pole = SpherePoint::north_pole(2);
    CHECK(geodesic_distance(apply_radial_map(to_cap, pole), pole) == 0.0);

    // equator lands on the cap edge, same meridian
    const SpherePoint eq = s2_point(kHalfPi, 0.7);
    const SpherePoint edge = apply_radial_map(to_cap, eq);
    CHECK(std::abs(colatitude(edge) - 1.1) < 1e-12);
    CHECK(std::abs(azimuth(edge) - 0.7) < 1e-12);
}

TEST_CASE("radial lipschitz of hand-built maps") {
    // slope-1/2 map: sup of max(1/2, sin(t/2)/sin t) is sin(pi/4) at the equator
    const LipschitzReport lip = radial_lipschitz(linear_map(0.5));
    CHECK(std::abs(lip.lip_formula.value() - std::sqrt(2.0) / 2.0) < 1e-8);
    CHECK(lip.argmax_location.value() == doctest::Approx(kHalfPi).epsilon(1e-12));

    CHECK(std::abs(radial_lipschitz(linear_map(1.0)).lip_formula.value() - 1.0) < 1e-12);

    RadialMap tiny = linear_map(0.5, 100);
    CHECK_THROWS_AS(radial_lipschitz(tiny), UsageError);
}

TEST_CASE("radial lipschitz of the gaussian target matches the quadrature oracle") {
    // independent oracle: r'(pi/2) = Z exp(pi^2/4), Z = integral of
    // exp(-s^2) sin s over [0, pi/2]
    const double z = gauss_legendre(0.0, kHalfPi, [](double s) {
        return std::exp(-s * s) * std::sin(s);
    });
    const double expected = z * std::exp(kPi * kPi / 4.0);

    const RadialProfile u = build_profile(RadialDensitySpec::uniform(2), 4096);
    const RadialProfile g = build_profile(RadialDensitySpec::gaussian_like(2, 1.0), 4096);
    const LipschitzReport lip = radial_lipschitz(monotone_map(u, g));

    CHECK(lip.lip_formula.value() > 1.0);
    CHECK(std::abs(lip.lip_formula.value() - expected) / expected < 1e-4);
    CHECK(lip.argmax_location.value() > kHalfPi - 0.01);
}

TEST_CASE("radial lipschitz rejects interior target-density zeros") {
    // target with an interior zero-density plateau; the rearrangement maps
    // positive source mass onto the plateau edge where the stretch diverges
    const int m = 512;
    std::vector<double> grid(m + 1), dens(m + 1);
    for (int i = 0; i <= m; ++i) {
        grid[i] = kHalfPi * i / m;
        const double t = grid[i];
        dens[i] = (t > 0.6 && t < 0.9) ? 0.0 : std::sin(t);
    }
    const RadialProfile source = build_profile(RadialDensitySpec::uniform(2), m);
    const RadialProfile holey = RadialProfile::from_tables(2, grid, dens);

    RadialMap map;
    map.n = 2;
    map.grid = source.grid();
    map.values.resize(map.grid.size());
    for (std::size_t i = 0; i < map.grid.size(); ++i)
        map.values[i] = 0.65 + 0.2 * map.grid[i] / kHalfPi;  // lands inside the plateau
    map.source = std::make_shared<RadialProfile>(source);
    map.target = std::make_shared<RadialProfile>(holey);
    CHECK_THROWS_AS(radial_lipschitz(map), NumericalError);
}

TEST_CASE("formula and pairwise estimator agree on radial targets") {
    const RadialProfile u = build_profile(RadialDensitySpec::uniform(2), 4096);
    for (const RadialDensitySpec& spec :
         {RadialDensitySpec::gaussian_like(2, 1.0),
          RadialDensitySpec::cap(RadialDensitySpec::gaussian_like(2, 1.0), 1.2)}) {
        const RadialProfile target = build_profile(spec, 4096);
        const RadialMap map = monotone_map(u, target);
        const LipschitzReport formula = radial_lipschitz(map);
        const double t_star = formula.argmax_location.value();

        // meridian chains (radial stretch) plus short parallel pairs
        // (tangential stretch), refined near the argmax
        std::vector<SpherePoint> inputs;
        for (int i = 1; i <= 400; ++i) inputs.push_back(s2_point(kHalfPi * i / 400.0, 0.0));
        for (int i = 0; i <= 200; ++i) {
            const double t = std::clamp(t_star - 0.01 + 0.02 * i / 200.0, 1e-4, kHalfPi);
            inputs.push_back(s2_point(t, 0.0));
        }
        for (int i = 1; i <= 150; ++i) {
            const double t = kHalfPi * i / 150.0;
            inputs.push_back(s2_point(t, 0.0));
            inputs.push_back(s2_point(t, 1e-3));
        }
        std::vector<SpherePoint> outputs;
        outputs.reserve(inputs.size());
        for (const SpherePoint& x : inputs) outputs.push_back(apply_radial_map(map, x));

        const double emp = empirical_lipschitz(inputs, outputs).lip_empirical.value();
        const double lip = formula.lip_formula.value();
        CHECK(emp <= lip * 1.0001);
        CHECK(emp >= lip * 0.98);
    }
}

TEST_CASE("sinkhorn: feasibility on identical marginals") {
    const DiscreteMeasure m = uniform_cloud(40, 51);
    const SinkhornResult res = sinkhorn(m, m, 0.05, 1e-9, 5000);
    CHECK(res.marginal_error < 1e-7);
    // self-transport at regularization reg costs at most reg * log(count)
    CHECK(res.plan.cost() <= 0.05 * std::log(40.0) + 1e-9);

    // duality gap: primal - dual <= reg * log(count)
    double dual = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) dual += m.weights[i] * res.potentials.psi[i];
    for (std::size_t j = 0; j < m.size(); ++j)
        dual += m.weights[j] * res.potentials.psi_c[j];
    const double gap = res.plan.cost() - dual;
    CHECK(gap <= 0.05 * std::log(40.0) + 1e-6);
    CHECK(gap >= -0.05 * std::log(40.0) - 1e-6);
}

TEST_CASE("sinkhorn dual potentials satisfy the relaxed constraint") {
    const DiscreteMeasure a = uniform_cloud(25, 52);
    const DiscreteMeasure b = uniform_cloud(25, 53);
    const double reg = 0.02;
    const SinkhornResult res = sinkhorn(a, b, reg, 1e-9, 5000);
    const double slack = reg * std::log(25.0) + 1e-6;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double d = geodesic_distance(a.points[i], b.points[j]);
            CHECK(res.potentials.psi[i] + res.potentials.psi_c[j] <=
                  0.5 * d * d + slack);
        }
    }
}

TEST_CASE("sinkhorn honors zero weights") {
    DiscreteMeasure src;
    src.points = {s2_point(0.3, 0.1), s2_point(0.9, 2.0)};
    src.weights = {1.0, 0.0};
    DiscreteMeasure tgt;
    tgt.points = {s2_point(0.5, 1.0), s2_point(1.2, 4.0)};
    tgt.weights = {0.5, 0.5};
    const SinkhornResult res = sinkhorn(src, tgt, 0.1, 1e-10, 5000);
    CHECK(res.plan.mass(1, 0) == 0.0);
    CHECK(res.plan.mass(1, 1) == 0.0);
    CHECK(res.plan.mass(0, 0) + res.plan.mass(0, 1) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sinkhorn reports non-convergence") {
    const DiscreteMeasure a = uniform_cloud(12, 54);
    const DiscreteMeasure b = uniform_cloud(12, 55);
    SinkhornOptions options;
    options.reg = 1e-4;
    options.tol = 1e-12;
    options.max_iter = 1;
    options.anneal = false;
    CHECK_THROWS_AS(sinkhorn(a, b, options), NumericalError);
}

TEST_CASE("annealed sinkhorn approaches the exact cost") {
    for (int n : {3, 5}) {
        const DiscreteMeasure a = uniform_cloud(n, 60 + n);
        const DiscreteMeasure b = uniform_cloud(n, 70 + n);
        const TransportPlan exact = exact_ot_small(a, b);
        SinkhornOptions options;
        options.reg = 1e-4;
        options.tol = 1e-10;
        options.max_iter = 5000;
        const SinkhornResult res = sinkhorn(a, b, options);
        CHECK(std::abs(res.plan.cost() - exact.cost()) < 1e-3);
        CHECK(res.plan.cost() >= exact.cost() - 1e-9);  // entropic plans cannot beat exact
    }
}

TEST_CASE("exact_ot_small") {
    // 1x1: the only coupling
    DiscreteMeasure one_a{{s2_point(0.4, 0.0)}, {1.0}};
    DiscreteMeasure one_b{{s2_point(1.0, 0.5)}, {1.0}};
    const TransportPlan tiny = exact_ot_small(one_a, one_b);
    const double d = geodesic_distance(one_a.points[0], one_b.points[0]);
    CHECK(tiny.cost() == doctest::Approx(0.5 * d * d).epsilon(1e-12));

    // an isometric image is matched point-to-point (zero extra cost pairing)
    DiscreteMeasure pair_a{{s2_point(0.4, 0.0), s2_point(0.9, 1.0)}, {0.5, 0.5}};
    DiscreteMeasure pair_b{
        {rotate_about_pole(pair_a.points[0], 0.2), rotate_about_pole(pair_a.points[1], 0.2)},
        {0.5, 0.5}};
    const TransportPlan rotated = exact_ot_small(pair_a, pair_b);
    CHECK(rotated.mass(0, 0) == doctest::Approx(0.5));
    CHECK(rotated.mass(1, 1) == doctest::Approx(0.5));

    // optimality against sampled alternative permutations
    const DiscreteMeasure a = uniform_cloud(5, 81);
    const DiscreteMeasure b = uniform_cloud(5, 82);
    const TransportPlan best = exact_ot_small(a, b);
    Rng rng(83);
    std::vector<std::size_t> perm = {0, 1, 2, 3, 4};
    for (int k = 0; k < 50; ++k) {
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[rng.next_u64() % i]);
        double alt = 0.0;
        for (std::size_t i = 0; i < perm.size(); ++i) {
            const double dd = geodesic_distance(a.points[i], b.points[perm[i]]);
            alt += 0.2 * 0.5 * dd * dd;
        }
        CHECK(best.cost() <= alt + 1e-12);
    }

    // monotone pairing on a shared meridian (1D cyclical monotonicity)
    DiscreteMeasure src, tgt;
    for (int i = 0; i < 6; ++i) {
        src.points.push_back(s2_point(0.1 + 0.2 * i, 0.3));
        tgt.points.push_back(s2_point(0.05 + 0.22 * i, 0.3));
        src.weights.push_back(1.0 / 6.0);
        tgt.weights.push_back(1.0 / 6.0);
    }
    const TransportPlan mono = exact_ot_small(src, tgt);
    for (int i = 0; i < 6; ++i) CHECK(mono.mass(i, i) == doctest::Approx(1.0 / 6.0));

    CHECK_THROWS_AS(exact_ot_small(uniform_cloud(13, 1), uniform_cloud(13, 2)), UsageError);
    DiscreteMeasure lopsided{{s2_point(0.3, 0.0), s2_point(0.6, 0.0)}, {0.7, 0.3}};
    CHECK_THROWS_AS(exact_ot_small(lopsided, uniform_cloud(2, 3)), UsageError);
}

TEST_CASE("barycentric map extraction") {
    const DiscreteMeasure a = uniform_cloud(6, 91);
    const DiscreteMeasure b = uniform_cloud(6, 92);
    const TransportPlan perm = exact_ot_small(a, b);
    const std::vector<SpherePoint> mapped = barycentric_map(perm);
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::size_t j = 0;
        while (perm.mass(i, j) == 0.0) ++j;
        CHECK(euclidean_distance(mapped[i], b.points[j]) < 1e-12);
    }

    // product coupling with a point target collapses everything there
    DiscreteMeasure point_target{{s2_point(0.7, 0.9)}, {1.0}};
    TransportPlan product;
    product.source = a;
    product.target = point_target;
    product.coupling.assign(a.size(), 1.0 / a.size());
    for (const SpherePoint& y : barycentric_map(product))
        CHECK(geodesic_distance(y, point_target.points[0]) < 1e-12);

    // degenerate rows are rejected
    TransportPlan empty_row = product;
    empty_row.coupling[0] = 0.0;
    CHECK_THROWS_AS(barycentric_map(empty_row), DegenerateBarycenterError);

    DiscreteMeasure antipodal{{s2_point(kHalfPi, 0.0), s2_point(kHalfPi, kPi)}, {0.5, 0.5}};
    TransportPlan balanced;
    balanced.source = DiscreteMeasure{{SpherePoint::north_pole(2)}, {1.0}};
    balanced.target = antipodal;
    balanced.coupling = {0.5, 0.5};
    CHECK_THROWS_AS(barycentric_map(balanced), DegenerateBarycenterError);
}

TEST_CASE("empirical lipschitz") {
    const std::vector<SpherePoint> inputs = sample_uniform_halfsphere(2, 60, 95);
    CHECK(empirical_lipschitz(inputs, inputs).lip_empirical.value() ==
          doctest::Approx(1.0).epsilon(1e-12));

    std::vector<SpherePoint> rotated;
    for (const SpherePoint& x : inputs) rotated.push_back(rotate_about_pole(x, 1.1));
    CHECK(std::abs(empirical_lipschitz(inputs, rotated).lip_empirical.value() - 1.0) <
          1e-10);

    // meridian chain through the half-angle contraction
    std::vector<SpherePoint> chain, halved;
    for (int i = 0; i <= 100; ++i) {
        const double t = kHalfPi * i / 100.0;
        chain.push_back(s2_point(t, 0.4));
        halved.push_back(s2_point(t / 2.0, 0.4));
    }
    CHECK(std::abs(empirical_lipschitz(chain, halved).lip_empirical.value() - 0.5) < 1e-9);

    // witness pair rotates with the configuration (unique argmax via a
    // genuinely expanding radial map)
    const RadialProfile u = build_profile(RadialDensitySpec::uniform(2), 2048);
    const RadialProfile g = build_profile(RadialDensitySpec::gaussian_like(2, 1.0), 2048);
    const RadialMap expanding = monotone_map(u, g);
    const std::vector<SpherePoint> cloud = sample_uniform_halfsphere(2, 80, 97);
    std::vector<SpherePoint> cloud_out, cloud_rot, cloud_rot_out;
    for (const SpherePoint& x : cloud) {
        cloud_out.push_back(apply_radial_map(expanding, x));
        cloud_rot.push_back(rotate_about_pole(x, 0.8));
        cloud_rot_out.push_back(apply_radial_map(expanding, cloud_rot.back()));
    }
    const LipschitzReport base_report = empirical_lipschitz(cloud, cloud_out);
    const LipschitzReport rot_report = empirical_lipschitz(cloud_rot, cloud_rot_out);
    CHECK(std::abs(rot_report.lip_empirical.value() - base_report.lip_empirical.value()) <
          1e-10);
    CHECK(euclidean_distance(rot_report.witness->first,
                             rotate_about_pole(base_report.witness->first, 0.8)) < 1e-12);

    // degenerate inputs
    std::vector<SpherePoint> same = {s2_point(0.3, 0.3), s2_point(0.3, 0.3)};
    CHECK_THROWS_AS(empirical_lipschitz(same, same), UsageError);
    CHECK_THROWS_AS(empirical_lipschitz(chain, same), UsageError);
}

TEST_CASE("barycentric map of a fine sinkhorn plan tracks the radial map") {
    const int count = 512;
    const RadialProfile u = build_profile(RadialDensitySpec::uniform(2), 2048);
    const RadialProfile g = build_profile(RadialDensitySpec::gaussian_like(2, 0.01), 2048);
    const RadialMap radial = monotone_map(u, g);

    const DiscreteMeasure src =
        discretize_on_sphere(u, count, DiscretizationScheme::Fibonacci, 5);
    const DiscreteMeasure tgt =
        discretize_on_sphere(g, count, DiscretizationScheme::Fibonacci, 6);
    SinkhornOptions options;
    options.reg = 1e-3;
    options.tol = 1e-7;
    options.max_iter = 4000;
    const SinkhornResult res = sinkhorn(src, tgt, options);
    const std::vector<SpherePoint> bary = barycentric_map(res.plan);

    double dev = 0.0;
    for (std::size_t i = 0; i < src.size(); ++i)
        dev = std::max(dev,
                       geodesic_distance(bary[i], apply_radial_map(radial, src.points[i])));
    CHECK(dev < 0.08);  // near-identity map blurred by regularization
}
