#pragma once

#include "hdsine/linalg.hpp"

#include <span>
#include <vector>

namespace hdsine {

/// A distinguished vertex w and d+1 further points in R^n, n >= d+1.
///
/// The sine functions act on the edge vectors v_j - w.
class PointConfig {
public:
    /// Throws InputError unless there are at least two points, all of the
    /// same dimension as w, and n >= d+1.
    PointConfig(Vector w, VectorList vs);

    /// w = 0.
    static PointConfig at_origin(VectorList vs);

    const Vector& w() const { return w_; }
    const VectorList& vs() const { return vs_; }
    int d() const { return static_cast<int>(vs_.size()) - 1; }
    int ambient_dim() const { return static_cast<int>(w_.size()); }

    /// True when the ambient dimension is exactly d+1 (the sines carry a sign).
    bool full_dimensional() const { return ambient_dim() == d() + 1; }

    /// v_j - w for every j.
    VectorList edges() const;

    /// The same configuration with v_i replaced by u.
    PointConfig substituted(int i, const Vector& u) const;

private:
    Vector w_;
    VectorList vs_;
};

struct SineValue {
    double value = 0.0;
    bool is_signed = false;
};

enum class SignMode {
    automatic,  ///< signed iff n == d+1
    absolute,   ///< always |value|
    signed_only ///< signed; InputError when n > d+1
};

/// M_{d+1}(edges) / prod |edge_j|; zero when any edge vanishes.
SineValue polar_sine(const PointConfig& cfg, SignMode mode = SignMode::automatic);

/// M_{d+1}(edges) / (prod_j M_d(edges without j))^{1/d}; zero when any face
/// through w is degenerate.
SineValue hypersine(const PointConfig& cfg, SignMode mode = SignMode::automatic);

/// |polar sine| of vectors taken from the origin.
double abs_polar_sine(std::span<const Vector> edges);

/// |hypersine| of vectors taken from the origin.
double abs_hypersine(std::span<const Vector> edges);

enum class SineKind { polar, hyper };

/// |sine| of the given kind for vectors taken from the origin.
double abs_sine(SineKind kind, std::span<const Vector> edges);

const char* to_string(SineKind kind);

/// Elevation sine of the last edge over the span of the others, times the
/// (d-1)-polar sine of the others, unrolled down to d = 1.
double polar_sine_product_form(const PointConfig& cfg);

/// (prod_i sin(dihedral_i) * |g_{d-1} sin(v_1..v_d)|^{d-1})^{1/d}, unrolled
/// down to d = 1. Throws PreconditionError for dependent edges.
double hypersine_product_form(const PointConfig& cfg);

/// |g_d sin| at the apex chosen by `order` divided by the d-th root of the
/// content of the opposite face.
///
/// `order` is a permutation of {0, ..., d+1} where 0 names w and j names v_j;
/// order[0] becomes the apex. Throws PreconditionError for a degenerate simplex.
double law_of_sines_ratio(const PointConfig& cfg, std::span<const int> order);

}  // namespace hdsine
