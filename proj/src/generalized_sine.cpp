#include "hdsine/generalized_sine.hpp"

#include "hdsine/errors.hpp"

#include <cmath>

namespace hdsine {

namespace {

// Below this |k| x^2 the three-term series is exact to rounding.
constexpr double kSeriesThreshold = 1e-8;

// |f(delta)| at or below this is treated as a zero of f.
constexpr double kZeroCutoff = 1e-12;

}  // namespace

double GeneralizedSine::operator()(double x) const
{
    return eval_sk(*this, x);
}

double eval_sk(const GeneralizedSine& f, double x)
{
    const double k = f.k;
    if (std::abs(k) * x * x < kSeriesThreshold) {
        const double x2 = x * x;
        return f.c * x * (1.0 - k * x2 / 6.0 + k * k * x2 * x2 / 120.0);
    }
    if (k > 0.0) {
        const double r = std::sqrt(k);
        return f.c * std::sin(r * x) / r;
    }
    const double r = std::sqrt(-k);
    return f.c * std::sinh(r * x) / r;
}

double functional_equation_residual(const RealFunction& f, double alpha, double beta, double delta)
{
    const double fd = f(delta);
    if (!(std::abs(fd) > kZeroCutoff)) {
        throw DomainError("f(delta) vanishes");
    }
    const double rhs = f(alpha + delta) / fd * f(beta) + f(delta - beta) / fd * f(alpha);
    return std::abs(f(alpha + beta) - rhs);
}

double carmichael_residual(const RealFunction& f, double alpha, double beta)
{
    const double fa = f(alpha), fb = f(beta);
    return std::abs(f(alpha + beta) * f(beta - alpha) - (fb * fb - fa * fa));
}

ParameterGrid cube_grid(double lo, double hi, int points)
{
    if (points < 1 || !(hi >= lo)) {
        throw InputError("grid needs at least one point and lo <= hi");
    }
    std::vector<double> axis;
    for (int i = 0; i < points; ++i) {
        axis.push_back(points == 1 ? lo : lo + (hi - lo) * i / (points - 1));
    }
    return {axis, axis, axis};
}

MembershipResult membership_test(const RealFunction& f, const ParameterGrid& grid, double tol)
{
    if (grid.alphas.empty() || grid.betas.empty() || grid.deltas.empty()) {
        throw InputError("membership grid is empty");
    }
    std::vector<double> deltas;
    MembershipResult out;
    for (double delta : grid.deltas) {
        if (std::abs(f(delta)) > kZeroCutoff) {
            deltas.push_back(delta);
        } else {
            ++out.skipped_deltas;
        }
    }
    if (deltas.empty()) {
        throw DomainError("no admissible delta on the grid");
    }
    for (double a : grid.alphas) {
        for (double b : grid.betas) {
            const double scale = std::max(1.0, std::abs(f(a + b)));
            for (double delta : deltas) {
                const double r = functional_equation_residual(f, a, b, delta);
                ++out.evaluations;
                out.max_residual = std::max(out.max_residual, r);
                if (r / scale > out.max_scaled_residual || std::isnan(r)) {
                    out.max_scaled_residual = r / scale;
                    out.worst_alpha = a;
                    out.worst_beta = b;
                    out.worst_delta = delta;
                }
            }
        }
    }
    out.member = out.max_scaled_residual <= tol;
    return out;
}

}  // namespace hdsine
