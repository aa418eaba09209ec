#include "hdsine/identities.hpp"

#include "hdsine/angles.hpp"
#include "hdsine/errors.hpp"
#include "hdsine/random.hpp"
#include "hdsine/sines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hdsine {

namespace {

// Coefficients within this fraction of sum |lambda| below zero are rounding.
constexpr double kConeSlack = 1e-12;

double residual_scale(double lhs, const std::vector<double>& terms)
{
    double absolute_terms = 0.0;
    for (double t : terms) {
        absolute_terms += std::abs(t);
    }
    return std::max(std::abs(lhs), absolute_terms);
}

double relative_residual(double lhs, const std::vector<double>& terms)
{
    double sum = 0.0, magnitude = std::abs(lhs);
    double absolute_terms = 0.0;
    for (double t : terms) {
        sum += t;
        absolute_terms += std::abs(t);
    }
    magnitude = std::max(magnitude, absolute_terms);
    if (magnitude == 0.0) {
        return 0.0;
    }
    return std::abs(lhs - sum) / magnitude;
}

double spread(std::initializer_list<double> values)
{
    const auto [lo, hi] = std::minmax(values);
    const double scale = std::max(std::abs(lo), std::abs(hi));
    return scale == 0.0 ? 0.0 : (hi - lo) / scale;
}

void require_basis(const VectorList& vs)
{
    const int n = common_dimension(vs);
    if (n < 2 || static_cast<int>(vs.size()) != n) {
        throw InputError("identities need d+1 >= 2 vectors spanning R^{d+1}");
    }
    if (abs_polar_sine(vs) < kDefaultTolerance) {
        throw InputError("vectors do not form a basis");
    }
}

double signed_polar(const VectorList& vs)
{
    return polar_sine(PointConfig::at_origin(vs)).value;
}

double signed_hyper(const VectorList& vs)
{
    return hypersine(PointConfig::at_origin(vs)).value;
}

}  // namespace

VectorList IdentityContext::scaled() const
{
    VectorList out;
    out.reserve(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) {
        out.push_back(betas[i] * vs[i]);
    }
    return out;
}

IdentityContext build_context(const VectorList& vs, const Vector& u, const std::vector<double>& betas)
{
    require_basis(vs);
    const auto n = vs.size();
    if (static_cast<std::size_t>(u.size()) != n || !u.allFinite()) {
        throw InputError("u must be a finite vector of the same dimension");
    }
    if (betas.size() != n) {
        throw InputError("need one beta per vector");
    }
    for (double b : betas) {
        if (!(b > 0.0) || !std::isfinite(b)) {
            throw InputError("betas must be positive and finite");
        }
    }
    IdentityContext ctx{vs, u, betas, {}, {}};
    const Matrix a = as_columns(ctx.scaled());
    const Vector lambda = a.partialPivLu().solve(u);
    const double scale = lambda.cwiseAbs().sum();
    int positive = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double l = lambda(static_cast<Eigen::Index>(i));
        if (l < -kConeSlack * scale) {
            throw PreconditionError("u is outside the cone of the vectors (lambda_" +
                                    std::to_string(i + 1) + " = " + std::to_string(l) + ")");
        }
        if (l > kConeSlack * scale) {
            ++positive;
        } else {
            l = 0.0;
        }
        ctx.lambdas.push_back(l);
    }
    if (positive <= 1) {
        throw PreconditionError("u is zero or parallel to one of the vectors");
    }
    double total = 0.0;
    for (double l : ctx.lambdas) {
        total += l;
    }
    ctx.u_tilde = u / total;
    return ctx;
}

std::vector<double> uniform_beta(const VectorList& vs)
{
    std::vector<double> out;
    for (const auto& v : vs) {
        const double norm = v.norm();
        if (norm == 0.0) {
            throw InputError("zero vector has no uniform weight");
        }
        out.push_back(1.0 / norm);
    }
    return out;
}

std::vector<double> hypersine_beta_choice(const VectorList& vs)
{
    require_basis(vs);
    std::vector<double> out;
    for (int i = 0; i < static_cast<int>(vs.size()); ++i) {
        out.push_back(abs_content(removed(vs, i)));
    }
    return out;
}

double det_affine_split(const IdentityContext& ctx)
{
    const VectorList scaled = ctx.scaled();
    std::vector<double> terms;
    for (int i = 0; i <= ctx.d(); ++i) {
        terms.push_back(determinant(replaced(scaled, i, ctx.u_tilde)));
    }
    return relative_residual(determinant(scaled), terms);
}

PCoefficients p_coefficients(const IdentityContext& ctx)
{
    PCoefficients out;
    const VectorList scaled = ctx.scaled();
    const double ut = ctx.u_tilde.norm();
    std::vector<double> terms;
    for (int i = 0; i <= ctx.d(); ++i) {
        const Vector& a = scaled[static_cast<std::size_t>(i)];
        const double by_norm = ut / a.norm();
        const double num = abs_polar_sine(VectorList{-a, ctx.u_tilde - a});
        const double den = abs_polar_sine(VectorList{ctx.u_tilde, a - ctx.u_tilde});
        double by_sine = by_norm;
        if (den > kDefaultTolerance) {
            by_sine = num / den;
        } else {
            out.fell_back = true;
        }
        out.norm_ratio.push_back(by_norm);
        out.sine_ratio.push_back(by_sine);
        out.path_disagreement = std::max(out.path_disagreement, spread({by_norm, by_sine}));
        terms.push_back(by_norm * signed_polar(replaced(ctx.vs, i, ctx.u)));
    }
    out.identity_residual = relative_residual(signed_polar(ctx.vs), terms);
    out.identity_scale = residual_scale(signed_polar(ctx.vs), terms);
    return out;
}

UniformPolarIdentity polar_uniform_identity(const VectorList& vs, const Vector& u)
{
    const auto ctx = build_context(vs, u, uniform_beta(vs));
    UniformPolarIdentity out;
    out.u_tilde_norm = ctx.u_tilde.norm();
    std::vector<double> terms;
    for (int i = 0; i <= ctx.d(); ++i) {
        terms.push_back(out.u_tilde_norm * signed_polar(replaced(vs, i, u)));
    }
    out.residual = relative_residual(signed_polar(vs), terms);
    out.scale = residual_scale(signed_polar(vs), terms);
    return out;
}

QCoefficients q_coefficients(const IdentityContext& ctx)
{
    QCoefficients out;
    const int d = ctx.d();
    const int n = d + 1;
    const VectorList scaled = ctx.scaled();
    const double root = 1.0 / d;
    const double ut = ctx.u_tilde.norm();
    out.all_positive = true;
    std::vector<double> terms;
    for (int i = 0; i <= d; ++i) {
        const Vector& a = scaled[static_cast<std::size_t>(i)];
        const VectorList with_u = replaced(scaled, i, ctx.u_tilde);
        double contents = 1.0, distances = 1.0, elevations = 1.0, law = 1.0;
        for (int j = 0; j <= d; ++j) {
            if (j == i) {
                continue;
            }
            const double face = abs_content(removed(scaled, j));
            const auto L = span_without(ctx.vs, {i, j}, n);
            const double base_dist = L.distance_to(a);
            const double base_elev = elevation_sine(a, L);
            if (face == 0.0 || base_dist == 0.0 || base_elev == 0.0) {
                throw InputError("degenerate sub-face in the hypersine coefficients");
            }
            contents *= abs_content(removed(with_u, j)) / face;
            distances *= L.distance_to(ctx.u_tilde) / base_dist;
            elevations *= elevation_sine(ctx.u_tilde, L) / base_elev;

            // u_tilde sits in slot j and 0 in slot i; the opposite placement
            // carries a factor -1 per ratio.
            const VectorList swapped = replaced(replaced(scaled, j, ctx.u_tilde), i, Vector::Zero(n));
            const double top = hypersine(PointConfig(a, swapped)).value;
            const double bottom = hypersine(PointConfig(ctx.u_tilde, replaced(scaled, j, Vector::Zero(n)))).value;
            if (bottom == 0.0) {
                throw InputError("degenerate sub-face in the hypersine coefficients");
            }
            law *= top / bottom;
        }
        const double q1 = std::pow(contents, root);
        const double q2 = std::pow(distances, root);
        const double q3 = ut / a.norm() * std::pow(elevations, root);
        out.content_ratio.push_back(q1);
        out.distance_ratio.push_back(q2);
        out.elevation_form.push_back(q3);
        out.law_of_sines.push_back(law);
        out.all_positive = out.all_positive && law > 0.0;
        out.path_disagreement = std::max(out.path_disagreement, spread({q1, q2, q3}));
        out.law_of_sines_disagreement = std::max(out.law_of_sines_disagreement, spread({q1, law}));
        terms.push_back(q1 * signed_hyper(replaced(ctx.vs, i, ctx.u)));
    }
    out.identity_residual = relative_residual(signed_hyper(ctx.vs), terms);
    out.identity_scale = residual_scale(signed_hyper(ctx.vs), terms);
    return out;
}

VectorList sign_flip_reduction(const VectorList& vs, const Vector& u)
{
    require_basis(vs);
    const Vector lambda = as_columns(vs).partialPivLu().solve(u);
    VectorList out = vs;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (lambda(static_cast<Eigen::Index>(i)) < 0.0) {
            out[i] = -out[i];
        }
    }
    return out;
}

double sine_identity_residual(double alpha, double beta, double delta)
{
    const double sd = std::sin(delta);
    if (std::abs(sd) <= 1e-12) {
        throw DomainError("sin(delta) vanishes");
    }
    const double rhs = std::sin(alpha + delta) / sd * std::sin(beta) +
                       std::sin(delta - beta) / sd * std::sin(alpha);
    return std::abs(std::sin(alpha + beta) - rhs);
}

double half_angle_identity_residual(double alpha, double beta)
{
    const double sh = std::sin((alpha - beta) / 2);
    if (std::abs(sh) <= 1e-12) {
        throw DomainError("sin((alpha - beta)/2) vanishes");
    }
    const double rhs = std::sin((alpha + beta) / 2) / sh * (std::sin(alpha) - std::sin(beta));
    return std::abs(std::sin(alpha + beta) - rhs);
}

IdentityContext draw_identity_context(int d, std::uint64_t seed, std::uint64_t index)
{
    if (d < 1) {
        throw InputError("d must be positive");
    }
    auto rng = substream(seed, index);
    const int n = d + 1;
    const VectorList vs = gaussian_vectors(rng, n, n);
    Vector u = Vector::Zero(n);
    for (const auto& v : vs) {
        u += uniform(rng, 0.05, 2.0) * v;
    }
    std::vector<double> betas;
    for (int i = 0; i < n; ++i) {
        betas.push_back(log_uniform(rng, 0.1, 10.0));
    }
    return build_context(vs, u, betas);
}

bool IdentityTrial::holds() const
{
    return det_split <= 1e-9 && p_identity_residual <= 1e-9 && uniform_polar_residual <= 1e-9 &&
           q_identity_residual <= 1e-9 && p_path_disagreement <= 1e-8 && q_path_disagreement <= 1e-8 &&
           q_law_of_sines_disagreement <= 1e-8 && q_all_positive;
}

IdentityTrial identity_trial(const IdentityContext& ctx)
{
    IdentityTrial out;
    out.det_split = det_affine_split(ctx);
    const auto p = p_coefficients(ctx);
    out.p_path_disagreement = p.path_disagreement;
    out.p_identity_residual = p.identity_residual;
    out.uniform_polar_residual = polar_uniform_identity(ctx.vs, ctx.u).residual;
    const auto q = q_coefficients(ctx);
    out.q_path_disagreement = q.path_disagreement;
    out.q_law_of_sines_disagreement = q.law_of_sines_disagreement;
    out.q_identity_residual = q.identity_residual;
    out.q_all_positive = q.all_positive;
    out.min_q = *std::min_element(q.law_of_sines.begin(), q.law_of_sines.end());
    return out;
}

}  // namespace hdsine
