#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace hdsine {

/// c * s_k: sin(sqrt(k) x)/sqrt(k) for k > 0, x for k = 0, sinh(sqrt(-k) x)/sqrt(-k) for k < 0.
struct GeneralizedSine {
    double c = 1.0;
    double k = 0.0;

    double operator()(double x) const;
};

/// c * s_k(x); uses x - k x^3/6 + k^2 x^5/120 when |k| x^2 < 1e-8.
double eval_sk(const GeneralizedSine& f, double x);

using RealFunction = std::function<double(double)>;

/// |f(a+b) - (f(a+delta)/f(delta) f(b) + f(delta-b)/f(delta) f(a))|.
/// Throws DomainError when |f(delta)| <= 1e-12.
double functional_equation_residual(const RealFunction& f, double alpha, double beta, double delta);

/// |f(a+b) f(b-a) - (f(b)^2 - f(a)^2)|.
double carmichael_residual(const RealFunction& f, double alpha, double beta);

struct ParameterGrid {
    std::vector<double> alphas;
    std::vector<double> betas;
    std::vector<double> deltas;
};

/// The same `points` equispaced values in [lo, hi] on every axis.
ParameterGrid cube_grid(double lo, double hi, int points);

struct MembershipResult {
    bool member = false;
    double max_residual = 0.0;         ///< largest raw residual
    double max_scaled_residual = 0.0;  ///< largest residual / max(1, |f(a+b)|)
    double worst_alpha = 0.0;
    double worst_beta = 0.0;
    double worst_delta = 0.0;
    std::size_t evaluations = 0;
    std::size_t skipped_deltas = 0;    ///< grid deltas with |f(delta)| <= 1e-12
};

/// Membership in the solution set, judged on the grid: every scaled residual
/// must be <= tol. Throws InputError for an empty grid and DomainError when no
/// grid delta is admissible.
MembershipResult membership_test(const RealFunction& f, const ParameterGrid& grid, double tol);

}  // namespace hdsine
