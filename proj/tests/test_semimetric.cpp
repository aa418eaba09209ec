#include "doctest.h"

#include "hdsine/errors.hpp"
#include "hdsine/random.hpp"
#include "hdsine/semimetric.hpp"

#include <cmath>

using namespace hdsine;

namespace {

Vector e(int n, int i) { return Vector::Unit(n, i); }

const SineKind kinds[] = {SineKind::polar, SineKind::hyper};

}  // namespace

TEST_CASE("simplex inequality on structured inputs")
{
    for (auto kind : kinds) {
        CAPTURE(to_string(kind));
        auto rng = substream(50, 0);
        const auto vs = gaussian_vectors(rng, 3, 4);
        const PointConfig cfg(Vector::Zero(4), vs);
        const auto r = check_simplex_inequality(kind, cfg, vs[0]);
        CHECK(r.rhs_terms[0] == doctest::Approx(r.lhs));
        CHECK(r.slack == doctest::Approx(r.rhs_terms[1] + r.rhs_terms[2]));
        CHECK(r.holds);

        const PointConfig dep(Vector::Zero(3), VectorList{e(3, 0), e(3, 1), e(3, 0) - e(3, 1)});
        const auto z = check_simplex_inequality(kind, dep, gaussian_vector(rng, 3));
        CHECK(z.lhs < 1e-12);
        CHECK(z.holds);

        CHECK_THROWS_AS(check_simplex_inequality(kind, cfg, Vector::Zero(4)), InputError);
    }
}

TEST_CASE("simplex inequality fuzz")
{
    for (auto kind : kinds) {
        for (int d = 2; d <= 4; ++d) {
            for (int extra : {0, 1, 3}) {
                const auto s = semimetric_audit(kind, d, d + 1 + extra, 2000, 3);
                CAPTURE(to_string(kind));
                CAPTURE(d);
                CAPTURE(extra);
                CHECK(s.failures == 0);
                CHECK(s.symmetry_failures == 0);
                CHECK(s.proof_path_mismatches == 0);
                CHECK(s.chain_failures == 0);
                CHECK(s.min_slack >= -1e-9);
            }
        }
    }
}

TEST_CASE("audit contract")
{
    CHECK_THROWS_AS(semimetric_audit(SineKind::polar, 2, 4, 0, 1), InputError);
    CHECK_THROWS_AS(semimetric_audit(SineKind::polar, 3, 3, 10, 1), InputError);
    const auto a = semimetric_audit(SineKind::hyper, 2, 4, 500, 11, 1);
    const auto b = semimetric_audit(SineKind::hyper, 2, 4, 500, 11, 4);
    CHECK(a.min_slack == b.min_slack);
    CHECK(a.worst.index == b.worst.index);
    CHECK(a.worst.u == b.worst.u);
    const auto again = draw_audit_instance(2, 4, 11, a.worst.index);
    CHECK(again.vs[2] == a.worst.vs[2]);
}

TEST_CASE("projection monotonicity")
{
    for (auto kind : kinds) {
        SUBCASE("u inside V and orthogonal to V")
        {
            const VectorList head{e(5, 0), e(5, 0) + e(5, 1)};
            const auto V = span_of(VectorList{e(5, 0), e(5, 1), e(5, 2)}, 5);
            CHECK(check_projection_monotonicity(kind, head, e(5, 2) + 0.3 * e(5, 0), V));
            VectorList with_zero = head;
            with_zero.push_back(V.project(e(5, 4)));
            CHECK(abs_sine(kind, with_zero) == 0.0);
            CHECK(check_projection_monotonicity(kind, head, e(5, 4), V));
            CHECK_THROWS_AS(check_projection_monotonicity(kind, VectorList{e(5, 0), e(5, 3)}, e(5, 2), V),
                            InputError);
        }
        for (int trial = 0; trial < 5000; ++trial) {
            auto rng = substream(51, static_cast<std::uint64_t>(trial));
            const int d = 2 + trial % 2;
            const int n = d + 3;
            const auto basis = gaussian_vectors(rng, d + 1, n);
            const auto V = span_of(basis, n);
            VectorList head;
            for (int i = 0; i < d; ++i) {
                Vector v = Vector::Zero(n);
                for (const auto& b : basis) v += uniform(rng, -1.0, 1.0) * b;
                head.push_back(v);
            }
            REQUIRE(check_projection_monotonicity(kind, head, gaussian_vector(rng, n), V));
        }
    }
}

TEST_CASE("orthogonal one-term bound")
{
    for (auto kind : kinds) {
        const VectorList ortho{e(4, 0), e(4, 1), e(4, 2)};
        const auto V = span_of(ortho, 4);
        CHECK(check_orthogonal_one_term(kind, ortho, V, e(4, 3)));
        CHECK(check_orthogonal_one_term(kind, VectorList{e(4, 0), e(4, 1), e(4, 0)}, V, e(4, 3)));
        CHECK_THROWS_AS(check_orthogonal_one_term(kind, ortho, V, e(4, 3) + e(4, 0)), InputError);
        CHECK_THROWS_AS(check_orthogonal_one_term(kind, ortho, V, Vector::Zero(4)), InputError);
        for (int trial = 0; trial < 5000; ++trial) {
            auto rng = substream(52, static_cast<std::uint64_t>(trial));
            const int d = 2 + trial % 2;
            const int n = d + 2;
            const auto vs = gaussian_vectors(rng, d + 1, n);
            const auto W = span_of(vs, n);
            const Vector g = gaussian_vector(rng, n);
            const Vector u = g - W.project(g);
            REQUIRE(check_orthogonal_one_term(kind, vs, W, u));
        }
    }
}

TEST_CASE("identity route and chaining")
{
    for (auto kind : kinds) {
        for (int trial = 0; trial < 2000; ++trial) {
            auto rng = substream(53, static_cast<std::uint64_t>(trial));
            const int d = 1 + trial % 4;
            const auto vs = gaussian_vectors(rng, d + 1, d + 1);
            const Vector u = gaussian_vector(rng, d + 1);
            const auto proof = proof_path_check(kind, vs, u);
            CHECK_FALSE(proof.trivial);
            CHECK(proof.max_coefficient <= 1.0 + 1e-12);
            CHECK(proof.holds);
        }
        CHECK(proof_path_check(kind, VectorList{e(2, 0), e(2, 1)}, 3.0 * e(2, 1)).trivial);
        CHECK_THROWS_AS(proof_path_check(kind, VectorList{e(3, 0), e(3, 1)}, e(3, 2)), InputError);
        for (int trial = 0; trial < 2000; ++trial) {
            auto rng = substream(54, static_cast<std::uint64_t>(trial));
            const int d = 2 + trial % 3;
            const int n = d + 2 + trial % 2;
            const auto c = chaining_check(kind, gaussian_vectors(rng, d + 1, n), gaussian_vector(rng, n));
            CHECK(c.applicable);
            CHECK(c.holds);
            CHECK(c.projected_sum <= c.sum + 1e-9);
        }
    }
}
