#include "doctest.h"

#include "hdsine/concentration.hpp"
#include "hdsine/errors.hpp"
#include "hdsine/sines.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

using namespace hdsine;

namespace {

constexpr double pi = std::numbers::pi;

// Cantor measure of [a, b] for the two-piece set with ratio rho, by recursion
// down to cylinders of length below `resolution`.
double cantor_interval_mass(double a, double b, double rho, double resolution)
{
    std::function<double(double, double, double)> mass = [&](double left, double len, double weight) -> double {
        if (left >= a && left + len <= b) {
            return weight;
        }
        if (left > b || left + len < a) {
            return 0.0;
        }
        if (len < resolution) {
            return weight * (std::min(b, left + len) - std::max(a, left)) / len;
        }
        const double child = len * rho;
        return mass(left, child, weight / 2) + mass(left + len - child, child, weight / 2);
    };
    return mass(0.0, 1.0, 1.0);
}

}  // namespace

TEST_CASE("plane sampler")
{
    auto rng = substream(60, 0);
    const auto plane = PlaneLebesgueSampler::random(4, 2, rng);
    CHECK(plane.gamma() == 2.0);
    CHECK(plane.c_mu() == 1.0);
    CHECK(std::isinf(plane.support_diam()));
    const Vector x = plane.random_support_point(rng);
    CHECK(plane.on_support(x));
    CHECK_FALSE(plane.on_support(x + 1e-3 * orthogonal_complement(span_of(
                                                  VectorList{plane.basis().col(0), plane.basis().col(1)}, 4))
                                                  .basis()[0]));
    const auto ball = plane.draw(x, 0.3, 5000, rng);
    CHECK(ball.points.size() == 5000);
    CHECK(ball.mass == doctest::Approx(0.09).epsilon(1e-15));
    for (const auto& p : ball.points) {
        REQUIRE((p - x).norm() <= 0.3 * (1 + 1e-12));
        REQUIRE(plane.on_support(p));
    }
    // Acceptance rate of the bounding-square rejection is pi/4.
    CHECK(std::abs(5000.0 / static_cast<double>(ball.proposals) - pi / 4) < 0.03);

    CHECK_THROWS_AS(plane.draw(x + Vector::Ones(4), 0.3, 10, rng), InputError);
    CHECK_THROWS_AS(plane.draw(x, 0.0, 10, rng), InputError);
    CHECK_THROWS_AS(PlaneLebesgueSampler(Vector::Zero(3), 2.0 * Matrix::Identity(3, 2)), InputError);

    const auto report = regularity_self_test(plane, 50, 100, 1e-3, 1.0, 1);
    CHECK(report.min_ratio == doctest::Approx(1.0));
    CHECK(report.max_ratio == doctest::Approx(1.0));
    CHECK(report.within_declared);
}

TEST_CASE("Cantor product sampler")
{
    const CantorProductSampler mu(2, 1.7, 4);
    CHECK(mu.ratio() == doctest::Approx(std::pow(2.0, -1.0 / 0.7)));
    CHECK(mu.support_diam() == doctest::Approx(std::sqrt(2.0)));
    CHECK(mu.c_mu() >= 1.0);
    CHECK(mu.c_mu() < 20.0);

    auto rng = substream(61, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector x = mu.random_support_point(rng);
        REQUIRE(mu.on_support(x));
        const double r = log_uniform(rng, 1e-3, 1.0);
        const auto ball = mu.draw(x, r, 500, rng);
        for (const auto& p : ball.points) {
            REQUIRE((p - x).norm() <= r);
            REQUIRE(mu.on_support(p));
        }
    }
    Vector gap = Vector::Zero(4);
    gap[0] = 0.5;
    gap[1] = 0.5;  // inside the removed middle interval
    CHECK_FALSE(mu.on_support(gap));
    CHECK_THROWS_AS(mu.draw(gap, 0.1, 10, rng), InputError);
    CHECK_THROWS_AS(CantorProductSampler(2, 1.0, 4), InputError);
    CHECK_THROWS_AS(CantorProductSampler(2, 2.5, 4), InputError);

    SUBCASE("independent self-test respects the declared constant")
    {
        const auto report = regularity_self_test(mu, 100, 4000, 1e-3, 1.0, 99);
        CHECK(report.within_declared);
    }

    SUBCASE("one-dimensional Cantor mass matches the interval oracle")
    {
        const CantorProductSampler line(1, 0.6, 1, 4.0);
        for (int trial = 0; trial < 10; ++trial) {
            auto r2 = substream(62, static_cast<std::uint64_t>(trial));
            const Vector x = line.random_support_point(r2);
            const double r = log_uniform(r2, 1e-3, 0.5);
            const auto ball = line.draw(x, r, 20000, r2);
            const double exact = cantor_interval_mass(x[0] - r, x[0] + r, line.ratio(), 1e-12);
            CAPTURE(r);
            CHECK(std::abs(ball.mass - exact) <= 4.0 * ball.mass_stderr + 1e-12);
        }
    }

    SUBCASE("gamma = d reduces to Lebesgue on the unit square")
    {
        const CantorProductSampler square(2, 2.0, 2, 2.0);
        CHECK(square.ratio() == doctest::Approx(0.5));
        Vector x(2);
        x << 0.4, 0.6;
        auto r2 = substream(63, 0);
        const auto ball = square.draw(x, 0.2, 20000, r2);
        CHECK(std::abs(ball.mass - pi * 0.04) <= 4.0 * ball.mass_stderr);
    }
}

TEST_CASE("U_C membership")
{
    auto rng = substream(64, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + trial % 3;
        const auto S = gaussian_vectors(rng, d + 1, d + 2);
        const Vector w = gaussian_vector(rng, d + 2);
        // Every term other than the first repeats v_1 and vanishes, so the
        // pair avoiding index 1 fails once d >= 2.
        CHECK_FALSE(in_U_C(S, w, S[0], 1.0));
    }
    const VectorList planar{Vector::Unit(2, 0), Vector::Unit(2, 0) + Vector::Unit(2, 1)};
    CHECK(in_U_C(planar, Vector::Zero(2), planar[0], 1.0));
    const VectorList dep{Vector::Unit(3, 0), Vector::Unit(3, 1), Vector::Unit(3, 0) + Vector::Unit(3, 1)};
    CHECK(in_U_C(dep, Vector::Zero(3), Vector::Unit(3, 2), 1.0));
    CHECK_THROWS_AS(in_U_C(dep, Vector::Zero(3), Vector::Zero(3), 1.0), InputError);

    // u inside span(S \ {v_1, v_2}) up to a tiny tilt lies in Cone^{1,2}(1/C):
    // both substituted terms nearly vanish while the left side does not.
    const VectorList S{Vector::Unit(3, 0), Vector::Unit(3, 1), Vector::Unit(3, 2)};
    const Vector u = Vector::Unit(3, 2) + 1e-9 * (Vector::Unit(3, 0) + Vector::Unit(3, 1));
    CHECK(in_cone_i(S, 0, 1.0 / 5, u));
    CHECK(in_cone_i(S, 1, 1.0 / 5, u));
    CHECK_FALSE(in_U_C(S, Vector::Zero(3), u, 5.0));
    CHECK_FALSE(in_U_C_one_term(S, Vector::Zero(3), u, 5.0));
}

TEST_CASE("cone complement containment")
{
    const VectorList S{Vector::Unit(3, 0), Vector::Unit(3, 1), Vector::Unit(3, 2)};
    // u in span(S \ v_1) sits in Cone^1 for every eps; with u also in span(S \ v_2)
    // the premise is false and the implication is vacuous.
    const auto vac = cone_complement_containment_check(S, 5.0, Vector::Unit(3, 2));
    CHECK_FALSE(vac.premise);
    CHECK(vac.holds());
    CHECK_THROWS_AS(cone_complement_containment_check(
                        VectorList{Vector::Unit(3, 0), Vector::Unit(3, 1), Vector::Unit(3, 0)}, 2.0,
                        Vector::Unit(3, 2)),
                    InputError);
    CHECK_THROWS_AS(cone_complement_containment_check(S, 2.0, Vector::Zero(3)), InputError);

    int premises = 0;
    for (int trial = 0; trial < 20000; ++trial) {
        auto rng = substream(65, static_cast<std::uint64_t>(trial));
        const int d = 2 + trial % 3;
        const int n = d + 1 + trial / 3 % 2;
        const double C = std::array{2.0, 5.0, 20.0, 1e6}[static_cast<std::size_t>(trial / 6 % 4)];
        const auto S2 = gaussian_vectors(rng, d + 1, n);
        const Vector u = gaussian_vector(rng, n);
        const auto two = cone_complement_containment_check(S2, C, u);
        const auto one = cone_complement_one_term_check(S2, C, u);
        REQUIRE(two.holds());
        REQUIRE(one.holds());
        premises += two.premise ? 1 : 0;
    }
    CHECK(premises > 15000);
}

TEST_CASE("two-cone containment")
{
    const int n = 4;
    const auto V1 = span_of(VectorList{Vector::Unit(n, 0), Vector::Unit(n, 1)}, n);
    const auto V2 = span_of(VectorList{Vector::Unit(n, 0), Vector::Unit(n, 2)}, n);
    const Vector v1 = Vector::Unit(n, 1);
    const Vector v2 = Vector::Unit(n, 2);
    const auto inside = two_cone_containment_check(V1, V2, v1, v2, 1.0, Vector::Unit(n, 0));
    CHECK(inside.premise);
    CHECK(inside.conclusion);
    CHECK_THROWS_AS(two_cone_containment_check(V1, V1, v1, v2, 0.5, v1), InputError);
    CHECK_THROWS_AS(two_cone_containment_check(V1, V2, v2, v1, 0.5, v1), InputError);
    CHECK_THROWS_AS(two_cone_containment_check(V1, V2, v1, v2, 1.5, v1), InputError);
    CHECK_THROWS_AS(two_cone_containment_check(span_of(VectorList{Vector::Unit(n, 0)}, n),
                                               span_of(VectorList{Vector::Unit(n, 1)}, n), Vector::Unit(n, 0),
                                               Vector::Unit(n, 1), 0.5, v1),
                    InputError);

    int premises = 0;
    for (int trial = 0; trial < 20000; ++trial) {
        auto rng = substream(66, static_cast<std::uint64_t>(trial));
        const int k = 3 + trial % 3;
        const int amb = k + trial / 3 % 2;
        const auto S = gaussian_vectors(rng, k, amb);
        const double s = uniform(rng, 0.05, 1.0);
        // Concentrate u near V1 ∩ V2 so the premise is often met.
        const auto W = span_without(S, {0, 1}, amb);
        Vector p = Vector::Zero(amb);
        for (const auto& b : W.basis()) p += gaussian_vector(rng, 1)[0] * b;
        const Vector u = p + log_uniform(rng, 1e-4, 1.0) * p.norm() * unit_vector(rng, amb);
        const auto r = pair_cone_containment_check(S, 0, 1, s, u);
        REQUIRE(r.holds());
        premises += r.premise ? 1 : 0;
    }
    CHECK(premises > 2000);
}

TEST_CASE("tube and cone measure bounds")
{
    auto rng = substream(67, 0);
    const auto plane = PlaneLebesgueSampler::random(4, 2, rng);
    const Vector x = plane.random_support_point(rng);
    const Vector dir = plane.basis().col(0);
    const auto line = orthonormal_frame(VectorList{x, x + dir}, x);

    const auto full = tube_measure_bound_check(plane, line, x, 0.5, 1.0, 2000, rng);
    CHECK(full.fraction == 1.0);
    CHECK(full.empirical == doctest::Approx(0.25));
    CHECK(full.holds);
    const auto null = tube_measure_bound_check(plane, line, x, 0.5, 0.0, 2000, rng);
    CHECK(null.empirical == 0.0);
    CHECK(null.holds);

    for (double eps : {0.05, 0.1, 0.3, 0.7}) {
        const auto rec = tube_measure_bound_check(plane, line, x, 0.2, eps, 40000, rng);
        const double exact = disk_strip_fraction(eps);
        const double se = std::sqrt(exact * (1 - exact) / 40000);
        CAPTURE(eps);
        CHECK(std::abs(rec.fraction - exact) <= 3.0 * se);
        CHECK(rec.holds);
        CHECK(rec.empirical <= rec.bound);
    }
    CHECK(disk_strip_fraction(1.0) == doctest::Approx(1.0));
    CHECK(disk_strip_fraction(0.0) == 0.0);

    const auto plane_span = orthonormal_frame(VectorList{x, x + dir, x + plane.basis().col(1)}, x);
    CHECK_THROWS_AS(tube_measure_bound_check(plane, plane_span, x, 0.5, 0.1, 10, rng), InputError);
    CHECK_THROWS_AS(tube_measure_bound_check(plane, line, x + 0.1 * Vector(plane.basis().col(1)), 0.5, 0.1, 10, rng), InputError);

    const auto cone = cone_measure_bound_check(plane, line, x, 0.3, 0.2, 20000, rng);
    // In the plane the cone is a pair of opposite sectors of half-angle theta.
    CHECK(std::abs(cone.fraction - 2 * 0.2 / pi) <= 3.0 * std::sqrt(0.13 * 0.87 / 20000));
    CHECK(cone.holds);

    const CantorProductSampler mu(2, 1.7, 4);
    for (int trial = 0; trial < 10; ++trial) {
        const Vector c = mu.random_support_point(rng);
        const auto L = orthonormal_frame(VectorList{c, c + unit_vector(rng, 4)}, c);
        const auto rec = tube_measure_bound_check(mu, L, c, log_uniform(rng, 1e-2, 1.0), 0.1, 5000, rng);
        CHECK(rec.holds);
        CHECK(rec.ball_mass > 0.0);
    }
}

TEST_CASE("concentration constants")
{
    // Independent route: s_0' = (2/pi) asin(...) and C = sqrt(5) pi / (2 s_0').
    const double eps = 0.5;
    const double inner = eps / (std::pow(2.0, 3.0 + 1.0) * 1.0 * 3.0);
    const double s0 = 2.0 / pi * std::asin(inner);
    CHECK(c0_prime(eps, 2.0, 2, 1.0) == doctest::Approx(std::sqrt(5.0) * pi / (2 * s0)).epsilon(1e-14));
    CHECK(c0_prime(0.2, 2.0, 2, 1.0) > c0_prime(0.5, 2.0, 2, 1.0));
    CHECK(c0_prime(0.2, 1.7, 2, 3.0) > c0_prime(0.2, 1.7, 2, 1.0));
    CHECK_THROWS_AS(c0_prime(0.2, 2.5, 2, 1.0), InputError);
    CHECK_THROWS_AS(c0_prime(1.2, 2.0, 2, 1.0), InputError);

    const double dp = c0_double_prime(0.2, 2, 1.0);
    CHECK(dp == doctest::Approx(std::sqrt(5.0) * pi * pi / 4 / std::asin(0.2 / std::pow(2.0, 4.0))));
    CHECK(dp < c0_prime(0.2, 2.0, 2, 1.0));

    const double one = c0_one_term(0.2, 3.0, 2, 1.0);
    CHECK(one == doctest::Approx(pi / 2 / std::asin(0.2 / (3 * std::pow(2.0, 6.5)))));
    CHECK_THROWS_AS(c0_one_term(0.2, 2.0, 2, 1.0), InputError);

    const auto radii = log_spaced(0.01, 1.0, 7);
    CHECK(radii.size() == 7);
    CHECK(radii.front() == 0.01);
    CHECK(radii.back() == 1.0);
    CHECK(radii[3] == doctest::Approx(0.1));
}

TEST_CASE("concentration runs")
{
    auto rng = substream(68, 0);
    const auto plane = PlaneLebesgueSampler::random(4, 2, rng);
    ConcentrationConfig cfg;
    cfg.epsilon = 0.2;
    cfg.S = gaussian_vectors(rng, 3, 4);
    cfg.w = plane.random_support_point(rng);
    cfg.radii = log_spaced(0.01, 1.0, 4);
    cfg.samples_per_ball = 3000;
    cfg.seed = 5;

    cfg.C = 1e9;
    for (const auto& rec : run_concentration(cfg, plane)) {
        CHECK(rec.fraction > 0.999);
        CHECK(rec.pass);
    }

    cfg.C = c0_prime(0.2, 2.0, 2, plane.c_mu());
    const auto a = run_concentration(cfg, plane, 1);
    const auto b = run_concentration(cfg, plane, 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].pass);
        CHECK(a[i].samples == 3000);
        CHECK(a[i].fraction == b[i].fraction);
    }

    ConcentrationConfig dep = cfg;
    dep.C = 1.0;
    dep.S = VectorList{Vector::Unit(4, 0), Vector::Unit(4, 1), Vector::Unit(4, 0) - Vector::Unit(4, 1)};
    for (const auto& rec : run_concentration(dep, plane)) {
        CHECK(rec.fraction == 1.0);
    }

    ConcentrationConfig bad = cfg;
    bad.w = cfg.w + Vector::Ones(4);
    CHECK_THROWS_AS(run_concentration(bad, plane), InputError);
    bad = cfg;
    bad.epsilon = 1.0;
    CHECK_THROWS_AS(run_concentration(bad, plane), InputError);
    bad = cfg;
    bad.C = 0.5;
    CHECK_THROWS_AS(run_concentration(bad, plane), InputError);

    const CantorProductSampler mu(2, 1.7, 4);
    ConcentrationConfig cc = cfg;
    cc.w = mu.random_support_point(rng);
    cc.radii = log_spaced(0.01, 1.0, 3);
    cc.C = c0_prime(0.2, 1.7, 2, mu.c_mu());
    for (const auto& rec : run_concentration(cc, mu)) {
        CHECK(rec.pass);
    }
    cc.radii = {2.0};
    CHECK_THROWS_AS(run_concentration(cc, mu), InputError);

    const auto full = PlaneLebesgueSampler::random(3, 3, rng);
    ConcentrationConfig ot = cfg;
    ot.S = gaussian_vectors(rng, 3, 3);
    ot.w = full.random_support_point(rng);
    ot.one_term = true;
    ot.C = c0_one_term(0.2, 3.0, 2, 1.0);
    for (const auto& rec : run_concentration(ot, full)) {
        CHECK(rec.pass);
    }
}
