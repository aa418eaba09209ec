#pragma once

#include "hdsine/linalg.hpp"

#include <variant>

namespace hdsine {

/// dist(u, W) / |u|, clamped to [0, 1]; zero for u = 0 and one for a rank-0 W.
double elevation_sine(const Vector& u, const SubspaceFrame& W);

/// Smallest angle between u and a nonzero element of the linear subspace W.
/// Returns 0 for u = 0. Throws InputError for a rank-0 or affine W.
double elevation_angle(const Vector& u, const SubspaceFrame& W);

/// max(theta(v1, V), theta(v2, V)).
double max_elevation(const Vector& v1, const Vector& v2, const SubspaceFrame& V);

/// Sine of the dihedral angle between equidimensional linear subspaces W and V
/// meeting in codimension one, evaluated as dist(w, V) / dist(w, W ∩ V).
///
/// Throws InputError when the dimensions do not match, when W ∩ V is not of
/// codimension one, or when the witness is not in W \ V.
double dihedral_sine(const SubspaceFrame& W, const SubspaceFrame& V, const Vector& witness);

/// The basis vector of W farthest from V.
Vector dihedral_witness(const SubspaceFrame& W, const SubspaceFrame& V);

struct Ball {
    Vector center;
    double radius = 1.0;
};

struct Tube {
    SubspaceFrame axis;
    double height = 0.0;
};

/// Points u with dist(u, axis) <= |u - apex| * sin(theta).
struct Cone {
    double theta = 0.0;
    SubspaceFrame axis;
    Vector apex;
};

using Region = std::variant<Ball, Tube, Cone>;

Region make_ball(Vector center, double radius);
Region make_tube(SubspaceFrame axis, double height);
Region make_cone(double theta, SubspaceFrame axis, Vector apex);

/// Closed-region membership.
bool region_contains(const Region& region, const Vector& u);

/// Cone membership without building a Region.
inline bool in_cone(double theta, const SubspaceFrame& axis, const Vector& apex, const Vector& u)
{
    return axis.distance_to(u) <= (u - apex).norm() * std::sin(theta);
}

}  // namespace hdsine
