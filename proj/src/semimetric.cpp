#include "hdsine/semimetric.hpp"

#include "hdsine/errors.hpp"
#include "hdsine/identities.hpp"
#include "hdsine/parallel.hpp"
#include "hdsine/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hdsine {

namespace {

// Tolerated excess in the one-sided comparisons of sine values.
constexpr double kCompareSlack = 1e-9;

// Largest deviation of |sine| under a permutation of its arguments.
constexpr double kSymmetryTolerance = 1e-10;

VectorList shifted(const VectorList& vs, const Vector& w)
{
    VectorList out;
    out.reserve(vs.size());
    for (const auto& v : vs) {
        out.push_back(v - w);
    }
    return out;
}

void require_dimension(const SubspaceFrame& V, int rank, const char* what)
{
    if (V.is_affine() || V.rank() != rank) {
        throw InputError(std::string(what) + ": V must be a linear subspace of dimension d+1");
    }
}

void require_inside(const VectorList& vs, const SubspaceFrame& V)
{
    for (const auto& v : vs) {
        if (!V.contains(v, v.norm())) {
            throw InputError("a vector is not contained in V");
        }
    }
}

}  // namespace

SimplexInequalityReport check_simplex_inequality(SineKind kind, const PointConfig& cfg, const Vector& u)
{
    if (u.size() != cfg.ambient_dim() || !u.allFinite()) {
        throw InputError("u must be a finite vector of the ambient dimension");
    }
    if (u == cfg.w()) {
        throw InputError("u must differ from the distinguished vertex");
    }
    const VectorList edges = cfg.edges();
    const Vector edge_u = u - cfg.w();
    SimplexInequalityReport out;
    out.lhs = abs_sine(kind, edges);
    double sum = 0.0;
    for (int i = 0; i <= cfg.d(); ++i) {
        const double term = abs_sine(kind, replaced(edges, i, edge_u));
        out.rhs_terms.push_back(term);
        sum += term;
    }
    out.slack = sum - out.lhs;
    out.holds = out.slack >= -kSlackTolerance * std::max(1.0, out.lhs);
    return out;
}

bool check_projection_monotonicity(SineKind kind, const VectorList& head, const Vector& u, const SubspaceFrame& V)
{
    require_dimension(V, static_cast<int>(head.size()) + 1, "projection monotonicity");
    require_inside(head, V);
    VectorList with_u = head;
    with_u.push_back(u);
    VectorList with_projection = head;
    with_projection.push_back(V.project(u));
    return abs_sine(kind, with_projection) <= abs_sine(kind, with_u) + kCompareSlack;
}

bool check_orthogonal_one_term(SineKind kind, const VectorList& vs, const SubspaceFrame& V, const Vector& u)
{
    require_dimension(V, static_cast<int>(vs.size()), "orthogonal one-term bound");
    require_inside(vs, V);
    const double norm = u.norm();
    if (norm == 0.0) {
        throw InputError("u must be nonzero");
    }
    if (V.project(u).norm() > V.tolerance() * norm) {
        throw InputError("u is not orthogonal to V");
    }
    const double lhs = abs_sine(kind, vs);
    for (int i = 0; i < static_cast<int>(vs.size()); ++i) {
        if (lhs > abs_sine(kind, replaced(vs, i, u)) + kCompareSlack) {
            return false;
        }
    }
    return true;
}

ProofPathResult proof_path_check(SineKind kind, const VectorList& vs, const Vector& u)
{
    const int n = common_dimension(vs);
    if (n != static_cast<int>(vs.size()) || u.size() != n || n < 2) {
        throw InputError("the identity route needs d+1 vectors in R^{d+1}");
    }
    ProofPathResult out;
    if (abs_polar_sine(vs) < kDefaultTolerance) {
        out.trivial = true;
        return out;
    }
    const VectorList flipped = sign_flip_reduction(vs, u);
    try {
        if (kind == SineKind::polar) {
            const auto uni = polar_uniform_identity(flipped, u);
            out.max_coefficient = uni.u_tilde_norm;
            out.identity_residual = uni.residual;
            out.absolute_residual = uni.residual * uni.scale;
        } else {
            const auto ctx = build_context(flipped, u, hypersine_beta_choice(flipped));
            const auto q = q_coefficients(ctx);
            out.max_coefficient = *std::max_element(q.content_ratio.begin(), q.content_ratio.end());
            out.identity_residual = q.identity_residual;
            out.absolute_residual = q.identity_residual * q.identity_scale;
        }
    } catch (const PreconditionError&) {
        // u is parallel to some v_i: that term reproduces the left side.
        out.trivial = true;
        return out;
    }
    // |S(v)| <= sum c_i |S(v, u in slot i)| + residual <= sum |S(v, u in slot i)| + residual.
    const double lhs = abs_sine(kind, vs);
    out.holds = out.max_coefficient <= 1.0 + kCompareSlack &&
                out.absolute_residual <= kSlackTolerance * std::max(1.0, lhs);
    return out;
}

ChainResult chaining_check(SineKind kind, const VectorList& vs, const Vector& u)
{
    const int n = common_dimension(vs);
    const int d = static_cast<int>(vs.size()) - 1;
    ChainResult out;
    const auto V = span_of(vs, n);
    if (n <= d + 1 || V.rank() != d + 1) {
        return out;
    }
    const Vector pu = V.project(u);
    if (pu.norm() <= kDefaultTolerance * u.norm()) {
        return out;
    }
    out.applicable = true;
    out.lhs = abs_sine(kind, vs);
    bool termwise = true;
    for (int i = 0; i <= d; ++i) {
        const double projected = abs_sine(kind, replaced(vs, i, pu));
        const double original = abs_sine(kind, replaced(vs, i, u));
        termwise = termwise && projected <= original + kCompareSlack;
        out.projected_sum += projected;
        out.sum += original;
    }
    out.holds = termwise && out.lhs <= out.projected_sum + kCompareSlack;
    return out;
}

const char* to_string(FuzzFamily family)
{
    switch (family) {
    case FuzzFamily::gaussian: return "gaussian";
    case FuzzFamily::nearly_dependent: return "nearly_dependent";
    case FuzzFamily::nearly_parallel: return "nearly_parallel";
    case FuzzFamily::huge_scale: return "huge_scale";
    case FuzzFamily::tiny_scale: return "tiny_scale";
    }
    return "unknown";
}

AuditInstance draw_audit_instance(int d, int n, std::uint64_t seed, std::uint64_t index)
{
    if (d < 1 || n < d + 1) {
        throw InputError("audit needs d >= 1 and n >= d+1");
    }
    auto rng = substream(seed, index);
    AuditInstance out;
    out.seed = seed;
    out.index = index;
    out.family = static_cast<FuzzFamily>(index % 5);
    out.w = gaussian_vector(rng, n);
    out.vs = gaussian_vectors(rng, d + 1, n);
    out.u = gaussian_vector(rng, n);
    switch (out.family) {
    case FuzzFamily::gaussian:
        break;
    case FuzzFamily::nearly_dependent: {
        Vector last = out.w;
        for (int i = 0; i < d; ++i) {
            last += uniform(rng, -1.0, 1.0) * (out.vs[static_cast<std::size_t>(i)] - out.w);
        }
        out.vs.back() = last + 1e-6 * gaussian_vector(rng, n);
        break;
    }
    case FuzzFamily::nearly_parallel: {
        const auto k = static_cast<std::size_t>(index / 5 % static_cast<std::uint64_t>(d + 1));
        const Vector edge = out.vs[k] - out.w;
        const double t = (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0) * uniform(rng, 0.2, 2.0);
        out.u = out.w + t * edge + 1e-7 * edge.norm() * gaussian_vector(rng, n);
        break;
    }
    case FuzzFamily::huge_scale:
    case FuzzFamily::tiny_scale: {
        const double scale = out.family == FuzzFamily::huge_scale ? 1e8 : 1e-8;
        out.w *= scale;
        for (auto& v : out.vs) {
            v *= scale;
        }
        out.u *= scale;
        break;
    }
    }
    return out;
}

AuditTrial audit_trial(SineKind kind, int d, int n, std::uint64_t seed, std::uint64_t index)
{
    const auto inst = draw_audit_instance(d, n, seed, index);
    AuditTrial out;
    const auto report = check_simplex_inequality(kind, PointConfig(inst.w, inst.vs), inst.u);
    out.lhs = report.lhs;
    out.slack = report.slack;
    out.rhs_sum = std::accumulate(report.rhs_terms.begin(), report.rhs_terms.end(), 0.0);
    out.holds = report.holds;

    const VectorList edges = shifted(inst.vs, inst.w);
    const Vector edge_u = inst.u - inst.w;
    VectorList permuted = edges;
    auto rng = substream(seed, index, 1);
    std::shuffle(permuted.begin(), permuted.end(), rng);
    out.symmetric = std::abs(abs_sine(kind, permuted) - report.lhs) <= kSymmetryTolerance;

    if (n == d + 1) {
        const auto proof = proof_path_check(kind, edges, edge_u);
        out.proof_mismatch = proof.holds != report.holds;
    } else {
        out.chain_failed = !chaining_check(kind, edges, edge_u).holds;
    }
    return out;
}

AuditSummary semimetric_audit(SineKind kind, int d, int n, std::uint64_t trials, std::uint64_t seed, int workers)
{
    if (trials < 1) {
        throw InputError("an audit needs at least one trial");
    }
    if (d < 1 || n < d + 1) {
        throw InputError("audit needs d >= 1 and n >= d+1");
    }
    std::vector<AuditTrial> outcomes(trials);
    parallel_for(
        trials, [&](std::size_t i) { outcomes[i] = audit_trial(kind, d, n, seed, i); },
        workers > 0 ? workers : worker_count());

    AuditSummary summary;
    summary.kind = kind;
    summary.d = d;
    summary.n = n;
    summary.trials = trials;
    summary.seed = seed;
    summary.min_slack = std::numeric_limits<double>::infinity();
    std::uint64_t worst = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        const auto& o = outcomes[i];
        summary.failures += o.holds ? 0 : 1;
        summary.symmetry_failures += o.symmetric ? 0 : 1;
        summary.proof_path_mismatches += o.proof_mismatch ? 1 : 0;
        summary.chain_failures += o.chain_failed ? 1 : 0;
        if (o.slack < summary.min_slack) {
            summary.min_slack = o.slack;
            worst = i;
        }
    }
    summary.worst = draw_audit_instance(d, n, seed, worst);
    summary.worst_report =
        check_simplex_inequality(kind, PointConfig(summary.worst.w, summary.worst.vs), summary.worst.u);
    return summary;
}

}  // namespace hdsine
