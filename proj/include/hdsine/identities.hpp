#pragma once

#include "hdsine/linalg.hpp"

#include <cstdint>
#include <vector>

namespace hdsine {

/// A basis v_1..v_{d+1} of R^{d+1}, a vector u in its closed positive cone and
/// positive weights beta, with u = sum lambda_i beta_i v_i and
/// u_tilde = u / sum lambda_i on the affine hull of the beta_i v_i.
struct IdentityContext {
    VectorList vs;
    Vector u;
    std::vector<double> betas;
    std::vector<double> lambdas;
    Vector u_tilde;

    int d() const { return static_cast<int>(vs.size()) - 1; }
    /// beta_i v_i
    VectorList scaled() const;
};

/// Solves for lambda and forms u_tilde.
///
/// Throws InputError for a singular or wrongly sized basis or non-positive
/// betas, PreconditionError when u leaves the cone (some lambda_i below
/// -1e-12 relative) or is parallel to one of the v_i.
IdentityContext build_context(const VectorList& vs, const Vector& u, const std::vector<double>& betas);

/// beta_i = 1 / |v_i|.
std::vector<double> uniform_beta(const VectorList& vs);

/// beta_i = M_d(vs without v_i); all scaled d-faces through 0 then have equal
/// content. Throws InputError for dependent vs.
std::vector<double> hypersine_beta_choice(const VectorList& vs);

/// |det(beta v) - sum_i det(beta v with u_tilde in slot i)| relative to |det(beta v)|.
double det_affine_split(const IdentityContext& ctx);

struct PCoefficients {
    std::vector<double> norm_ratio;  ///< |u_tilde| / |beta_i v_i|
    std::vector<double> sine_ratio;  ///< two-dimensional polar sine ratio
    bool fell_back = false;          ///< some sine ratio was undefined and copied from norm_ratio
    double path_disagreement = 0.0;  ///< max relative difference of the two paths
    double identity_residual = 0.0;  ///< relative residual of p(v) = sum P_i p(v, u in slot i)
    double identity_scale = 0.0;     ///< max(|p(v)|, sum of |terms|), the residual's reference
};

PCoefficients p_coefficients(const IdentityContext& ctx);

/// Relative residual of p(v) = |u_tilde| sum_i p(v, u in slot i) for beta_i = 1/|v_i|,
/// together with that |u_tilde|.
struct UniformPolarIdentity {
    double u_tilde_norm = 0.0;
    double residual = 0.0;
    double scale = 0.0;  ///< max(|p(v)|, sum of |terms|)
};

UniformPolarIdentity polar_uniform_identity(const VectorList& vs, const Vector& u);

struct QCoefficients {
    std::vector<double> content_ratio;   ///< products of d-face content ratios
    std::vector<double> distance_ratio;  ///< products of distance ratios to span(S \ {v_i, v_j})
    std::vector<double> elevation_form;  ///< P_i times products of elevation sine ratios
    std::vector<double> law_of_sines;    ///< signed hypersine ratios at shifted apices
    double path_disagreement = 0.0;      ///< max relative spread among the first three paths
    double law_of_sines_disagreement = 0.0;
    bool all_positive = false;           ///< every signed law-of-sines coefficient > 0
    double identity_residual = 0.0;      ///< relative residual of g(v) = sum Q_i g(v, u in slot i)
    double identity_scale = 0.0;         ///< max(|g(v)|, sum of |terms|)
};

/// Throws InputError when a sub-face degenerates.
QCoefficients q_coefficients(const IdentityContext& ctx);

/// Seeded random context: Gaussian basis, u with coefficients uniform in
/// [0.05, 2] and betas log-uniform in [0.1, 10].
IdentityContext draw_identity_context(int d, std::uint64_t seed, std::uint64_t index);

/// Every identity evaluated on one context.
struct IdentityTrial {
    double det_split = 0.0;
    double p_path_disagreement = 0.0;
    double p_identity_residual = 0.0;
    double uniform_polar_residual = 0.0;
    double q_path_disagreement = 0.0;
    double q_law_of_sines_disagreement = 0.0;
    double q_identity_residual = 0.0;
    double min_q = 0.0;
    bool q_all_positive = false;
    /// Residuals <= 1e-9, path disagreements <= 1e-8, every Q_i > 0.
    bool holds() const;
};

IdentityTrial identity_trial(const IdentityContext& ctx);

/// sign(lambda_i) v_i for u = sum lambda_i v_i, so that u lies in the closed
/// positive cone of the result. Zero coefficients keep their vector.
VectorList sign_flip_reduction(const VectorList& vs, const Vector& u);

/// |sin(a+b) - (sin(a+c)/sin(c) sin(b) + sin(c-b)/sin(c) sin(a))|.
double sine_identity_residual(double alpha, double beta, double delta);

/// |sin(a+b) - sin((a+b)/2)/sin((a-b)/2) (sin a - sin b)|; requires a != b.
double half_angle_identity_residual(double alpha, double beta);

}  // namespace hdsine
