#pragma once

#include "hdsine/linalg.hpp"
#include "hdsine/sines.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hdsine {

/// Allowed negative slack, relative to max(1, lhs).
constexpr double kSlackTolerance = 1e-9;

struct SimplexInequalityReport {
    double lhs = 0.0;
    std::vector<double> rhs_terms;
    double slack = 0.0;  ///< sum of rhs_terms - lhs
    bool holds = true;
};

/// |sine_w(v)| against sum_i |sine_w(v with u in slot i)|. Throws InputError for u == w.
SimplexInequalityReport check_simplex_inequality(SineKind kind, const PointConfig& cfg, const Vector& u);

/// |sine_0(head, P_V u)| <= |sine_0(head, u)| + 1e-9 for d vectors `head`
/// inside the (d+1)-dimensional V. Throws InputError when a head vector is
/// not in V or V has the wrong dimension.
bool check_projection_monotonicity(SineKind kind, const VectorList& head, const Vector& u, const SubspaceFrame& V);

/// |sine_0(vs)| <= |sine_0(vs with u in slot i)| + 1e-9 for every i, where
/// vs lies in the (d+1)-dimensional V and u is a nonzero vector orthogonal to V.
/// Throws InputError when u is zero or not orthogonal to V, or vs leaves V.
bool check_orthogonal_one_term(SineKind kind, const VectorList& vs, const SubspaceFrame& V, const Vector& u);

/// The inequality in R^{d+1} derived from the exact identities: flip signs so u
/// lies in the cone, then bound every coefficient by one.
struct ProofPathResult {
    bool trivial = false;          ///< dependent vectors or u parallel to some v_i
    double max_coefficient = 0.0;  ///< |u_tilde| (polar) or max Q_i (hyper)
    double identity_residual = 0.0;  ///< relative
    double absolute_residual = 0.0;
    bool holds = true;  ///< coefficients <= 1 and absolute residual within the slack tolerance
};

/// w = 0, n = d+1. Throws InputError otherwise.
ProofPathResult proof_path_check(SineKind kind, const VectorList& vs, const Vector& u);

/// For n > d+1 with P(u) != 0, P the projection onto span(vs):
/// lhs <= sum with P(u) <= sum with u, the second step termwise.
struct ChainResult {
    bool applicable = false;
    double lhs = 0.0;
    double projected_sum = 0.0;
    double sum = 0.0;
    bool holds = true;
};

ChainResult chaining_check(SineKind kind, const VectorList& vs, const Vector& u);

enum class FuzzFamily { gaussian, nearly_dependent, nearly_parallel, huge_scale, tiny_scale };

const char* to_string(FuzzFamily family);

/// A reproducible random input: apex, points and the substituted vector.
struct AuditInstance {
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    FuzzFamily family = FuzzFamily::gaussian;
    Vector w;
    VectorList vs;
    Vector u;
};

/// Trial `index` of an audit with `seed`; the family cycles with the index.
AuditInstance draw_audit_instance(int d, int n, std::uint64_t seed, std::uint64_t index);

/// All checks of one audit trial.
struct AuditTrial {
    double lhs = 0.0;
    double rhs_sum = 0.0;
    double slack = 0.0;
    bool holds = true;          ///< simplex inequality within the slack tolerance
    bool symmetric = true;      ///< |sine| unchanged under a seeded shuffle
    bool proof_mismatch = false;
    bool chain_failed = false;
    bool all_ok() const { return holds && symmetric && !proof_mismatch && !chain_failed; }
};

AuditTrial audit_trial(SineKind kind, int d, int n, std::uint64_t seed, std::uint64_t index);

struct AuditSummary {
    SineKind kind = SineKind::polar;
    int d = 0;
    int n = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t failures = 0;
    std::uint64_t symmetry_failures = 0;
    std::uint64_t proof_path_mismatches = 0;  ///< n == d+1 only
    std::uint64_t chain_failures = 0;         ///< n > d+1 only
    double min_slack = 0.0;
    AuditInstance worst;                      ///< smallest slack, lowest index on ties
    SimplexInequalityReport worst_report;
};

/// Seeded fuzz of the simplex inequality plus symmetry, proof-path and
/// chaining checks. Results do not depend on `workers`.
/// Throws InputError for trials < 1 or n < d+1.
AuditSummary semimetric_audit(SineKind kind, int d, int n, std::uint64_t trials, std::uint64_t seed,
                              int workers = 0);

}  // namespace hdsine
