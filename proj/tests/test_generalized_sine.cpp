#include "doctest.h"

#include "hdsine/errors.hpp"
#include "hdsine/generalized_sine.hpp"

#include <cmath>
#include <numbers>

using namespace hdsine;
using std::numbers::pi;

TEST_CASE("evaluation of s_k")
{
    CHECK(eval_sk({1.0, 1.0}, pi / 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_sk({2.0, 0.0}, 3.0) == 6.0);
    CHECK(eval_sk({1.0, -1.0}, 1.0) == doctest::Approx(std::sinh(1.0)).epsilon(1e-15));
    CHECK(eval_sk({1.0, -1.0}, 1.0) == doctest::Approx(1.17520).epsilon(1e-5));
    CHECK(eval_sk({1.0, 4.0}, 0.3) == doctest::Approx(std::sin(0.6) / 2).epsilon(1e-15));

    SUBCASE("series and closed form agree at the crossover")
    {
        for (double k : {-9.0, -1.0, 1e-3, 1.0, 9.0}) {
            const double x = std::sqrt(1e-8 / std::abs(k));
            const double below = eval_sk({1.0, k}, x * (1 - 1e-12));
            const double closed = k > 0 ? std::sin(std::sqrt(k) * x) / std::sqrt(k)
                                        : std::sinh(std::sqrt(-k) * x) / std::sqrt(-k);
            CHECK(std::abs(below - closed) <= 1e-10 * std::abs(x));
        }
    }
    SUBCASE("continuity in k at zero")
    {
        for (double k : {1e-9, -1e-9}) {
            for (int i = -100; i <= 100; ++i) {
                const double x = 0.1 * i;
                const double v = eval_sk({1.0, k}, x);
                // The leading deviation from x is -k x^3 / 6.
                CHECK(std::abs(v - x) <= std::abs(k * x * x * x) / 6 * (1 + 1e-3) + 1e-15);
                CHECK(std::abs(v - (x - k * x * x * x / 6)) <= 1e-14);
                if (std::abs(x) <= 3.0) CHECK(std::abs(v - x) <= 1e-8);
            }
        }
    }
}

TEST_CASE("functional equation residual")
{
    const RealFunction sine = [](double x) { return std::sin(x); };
    CHECK(functional_equation_residual(sine, pi / 6, pi / 6, pi / 2) <= 1e-15);
    CHECK_THROWS_AS(functional_equation_residual(sine, 0.1, 0.2, 0.0), DomainError);

    const GeneralizedSine hyperbolic{1.0, -1.0};
    double worst = 0.0;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j)
            for (int k = 1; k < 20; ++k)
                worst = std::max(worst, functional_equation_residual(hyperbolic, -1.0 + 0.1 * i, -1.0 + 0.1 * j, 0.1 * k));
    CHECK(worst <= 1e-10);

    // f(x) = x^2: f(3) = 9 against f(2)^2/f(1) + f(-1) = 17.
    const RealFunction square = [](double x) { return x * x; };
    CHECK(functional_equation_residual(square, 1.0, 2.0, 1.0) == doctest::Approx(8.0));
    CHECK(functional_equation_residual(square, 1.0, 1.0, 1.0) == 0.0);
}

TEST_CASE("carmichael residual")
{
    const RealFunction sine = [](double x) { return std::sin(x); };
    CHECK(carmichael_residual(sine, pi / 6, pi / 3) <= 1e-15);
    CHECK(carmichael_residual(GeneralizedSine{3.0, 0.0}, 0.7, -1.3) <= 1e-14);
    const RealFunction cosine = [](double x) { return std::cos(x); };
    CHECK(carmichael_residual(cosine, 0.0, pi / 2) == doctest::Approx(1.0));
}

TEST_CASE("membership")
{
    const auto grid = cube_grid(-1.5, 1.5, 40);
    for (double c : {-2.0, 1.0, 0.5}) {
        for (double k : {-4.0, -1.0, 0.0, 1.0, 9.0}) {
            CAPTURE(c);
            CAPTURE(k);
            const GeneralizedSine f{c, k};
            const auto r = membership_test(f, grid, 1e-9);
            CHECK(r.member);
            CHECK(f(0.0) == 0.0);
            for (int i = 0; i <= 30; ++i) {
                const double x = -1.5 + 0.1 * i;
                CHECK(std::abs(f(-x) + f(x)) <= 1e-12);
            }
        }
    }
    CHECK(membership_test(GeneralizedSine{0.5, 4.0}, cube_grid(-2.0, 2.0, 21), 1e-9).member);

    const RealFunction perturbed = [](double x) { return x + 0.01 * x * x; };
    const auto bad = membership_test(perturbed, grid, 1e-9);
    CHECK_FALSE(bad.member);
    CHECK(bad.max_scaled_residual > 1e-3);

    const RealFunction zero = [](double) { return 0.0; };
    CHECK_THROWS_AS(membership_test(zero, grid, 1e-9), DomainError);
    CHECK_THROWS_AS(membership_test(perturbed, ParameterGrid{}, 1e-9), InputError);
}

TEST_CASE("zero translation")
{
    const GeneralizedSine f{1.0, 1.0};
    for (int i = 0; i <= 200; ++i) {
        const double g = -5.0 + 0.05 * i;
        CHECK(std::abs(std::abs(f(g + pi)) - std::abs(f(g))) <= 1e-12);
    }
}
