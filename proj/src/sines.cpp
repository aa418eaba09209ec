#include "hdsine/sines.hpp"

#include "hdsine/angles.hpp"
#include "hdsine/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hdsine {

namespace {

// Overshoot of |value| past 1 that is attributed to rounding and clamped.
constexpr double kUnitOvershoot = 1e-9;

double clamp_unit(double value)
{
    if (std::abs(value) > 1.0 + kUnitOvershoot || !std::isfinite(value)) {
        throw ConsistencyError("sine value " + std::to_string(value) + " outside [-1, 1]");
    }
    return std::clamp(value, -1.0, 1.0);
}

bool use_sign(const PointConfig& cfg, SignMode mode)
{
    if (mode == SignMode::signed_only && !cfg.full_dimensional()) {
        throw InputError("signed sines exist only when the ambient dimension is d+1");
    }
    return mode != SignMode::absolute && cfg.full_dimensional();
}

// Unit edge directions, or nothing when an edge vanishes.
bool normalize(VectorList& edges)
{
    for (auto& e : edges) {
        const double norm = e.norm();
        if (norm == 0.0) {
            return false;
        }
        e /= norm;
    }
    return true;
}

double numerator(const VectorList& units, bool with_sign)
{
    return with_sign ? determinant(units) : abs_content(units);
}

// Signed or unsigned hypersine of unit edge directions.
double hypersine_of_units(const VectorList& units, bool with_sign)
{
    const int d = static_cast<int>(units.size()) - 1;
    double log_faces = 0.0;
    for (int j = 0; j <= d; ++j) {
        const double face = abs_content(removed(units, j));
        if (face < kDefaultTolerance) {
            return 0.0;
        }
        log_faces += std::log(face);
    }
    return numerator(units, with_sign) / std::exp(log_faces / d);
}

}  // namespace

PointConfig::PointConfig(Vector w, VectorList vs) : w_(std::move(w)), vs_(std::move(vs))
{
    if (vs_.size() < 2) {
        throw InputError("a point configuration needs at least two points besides w");
    }
    if (!w_.allFinite()) {
        throw InputError("distinguished vertex has non-finite coordinates");
    }
    const int n = common_dimension(vs_);
    if (n != w_.size()) {
        throw InputError("points and distinguished vertex differ in dimension");
    }
    if (n < d() + 1) {
        throw InputError("ambient dimension " + std::to_string(n) + " is below d+1 = " +
                         std::to_string(d() + 1));
    }
}

PointConfig PointConfig::at_origin(VectorList vs)
{
    if (vs.empty()) {
        throw InputError("a point configuration needs at least two points besides w");
    }
    const auto n = vs.front().size();
    return PointConfig(Vector::Zero(n), std::move(vs));
}

VectorList PointConfig::edges() const
{
    VectorList out;
    out.reserve(vs_.size());
    for (const auto& v : vs_) {
        out.push_back(v - w_);
    }
    return out;
}

PointConfig PointConfig::substituted(int i, const Vector& u) const
{
    return PointConfig(w_, replaced(vs_, i, u));
}

SineValue polar_sine(const PointConfig& cfg, SignMode mode)
{
    const bool with_sign = use_sign(cfg, mode);
    VectorList units = cfg.edges();
    if (!normalize(units)) {
        return {0.0, with_sign};
    }
    return {clamp_unit(numerator(units, with_sign)), with_sign};
}

SineValue hypersine(const PointConfig& cfg, SignMode mode)
{
    const bool with_sign = use_sign(cfg, mode);
    VectorList units = cfg.edges();
    if (!normalize(units)) {
        return {0.0, with_sign};
    }
    return {clamp_unit(hypersine_of_units(units, with_sign)), with_sign};
}

double abs_polar_sine(std::span<const Vector> edges)
{
    VectorList units(edges.begin(), edges.end());
    if (!normalize(units)) {
        return 0.0;
    }
    return clamp_unit(abs_content(units));
}

double abs_hypersine(std::span<const Vector> edges)
{
    VectorList units(edges.begin(), edges.end());
    if (!normalize(units)) {
        return 0.0;
    }
    return clamp_unit(hypersine_of_units(units, false));
}

double abs_sine(SineKind kind, std::span<const Vector> edges)
{
    return kind == SineKind::polar ? abs_polar_sine(edges) : abs_hypersine(edges);
}

const char* to_string(SineKind kind)
{
    return kind == SineKind::polar ? "polar" : "hyper";
}

double polar_sine_product_form(const PointConfig& cfg)
{
    const VectorList edges = cfg.edges();
    const int n = cfg.ambient_dim();
    for (const auto& e : edges) {
        if (e.norm() == 0.0) {
            return 0.0;
        }
    }
    double value = 1.0;
    for (std::size_t k = 1; k < edges.size(); ++k) {
        const auto below = span_of(std::span(edges).first(k), n);
        value *= elevation_sine(edges[k], below);
    }
    return value;
}

double hypersine_product_form(const PointConfig& cfg)
{
    VectorList edges = cfg.edges();
    const int n = cfg.ambient_dim();
    if (span_of(edges, n).rank() != cfg.d() + 1) {
        throw PreconditionError("dihedral angles are undefined for dependent vectors");
    }
    // |g_m sin|^m for the leading m+1 edges, built up from m = 1.
    double power = elevation_sine(edges[1], span_of(std::span(edges).first(1), n));
    for (int m = 2; m <= cfg.d(); ++m) {
        const auto head = std::span(edges).first(static_cast<std::size_t>(m) + 1);
        const auto& top = head[static_cast<std::size_t>(m)];
        const auto base = span_without(head, {m}, n);
        double dihedrals = 1.0;
        for (int i = 0; i < m; ++i) {
            dihedrals *= dihedral_sine(span_without(head, {i}, n), base, top);
        }
        // power currently holds |g_{m-1} sin|^{m-1} of the first m edges.
        power = dihedrals * power;
    }
    return std::pow(power, 1.0 / cfg.d());
}

double law_of_sines_ratio(const PointConfig& cfg, std::span<const int> order)
{
    const int d = cfg.d();
    const auto count = static_cast<std::size_t>(d) + 2;
    std::vector<int> sorted(order.begin(), order.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < count; ++i) {
        if (sorted.size() != count || sorted[i] != static_cast<int>(i)) {
            throw InputError("vertex order is not a permutation of the d+2 vertices");
        }
    }
    const auto vertex = [&](int j) -> const Vector& {
        return j == 0 ? cfg.w() : cfg.vs()[static_cast<std::size_t>(j) - 1];
    };
    const Vector& apex = vertex(order[0]);
    VectorList rest;
    for (std::size_t i = 1; i < count; ++i) {
        rest.push_back(vertex(order[i]));
    }
    const PointConfig moved(apex, rest);
    VectorList units = moved.edges();
    if (!normalize(units) || abs_content(units) < kDefaultTolerance) {
        throw PreconditionError("degenerate simplex");
    }
    VectorList opposite;
    for (std::size_t k = 1; k < rest.size(); ++k) {
        opposite.push_back(rest[k] - rest[0]);
    }
    const double g = std::abs(hypersine(moved, SignMode::absolute).value);
    return g / std::pow(abs_content(opposite), 1.0 / d);
}

}  // namespace hdsine
