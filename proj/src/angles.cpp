#include "hdsine/angles.hpp"

#include "hdsine/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hdsine {

double elevation_sine(const Vector& u, const SubspaceFrame& W)
{
    const double norm = u.norm();
    if (norm == 0.0) {
        return 0.0;
    }
    return std::clamp(W.distance_to(u) / norm, 0.0, 1.0);
}

double elevation_angle(const Vector& u, const SubspaceFrame& W)
{
    if (W.rank() == 0) {
        throw InputError("elevation angle over a trivial subspace");
    }
    if (W.is_affine()) {
        throw InputError("elevation angle needs a linear subspace");
    }
    return std::asin(elevation_sine(u, W));
}

double max_elevation(const Vector& v1, const Vector& v2, const SubspaceFrame& V)
{
    return std::max(elevation_angle(v1, V), elevation_angle(v2, V));
}

double dihedral_sine(const SubspaceFrame& W, const SubspaceFrame& V, const Vector& witness)
{
    if (W.rank() != V.rank() || W.rank() == 0) {
        throw InputError("dihedral angle needs nontrivial subspaces of equal dimension");
    }
    if (joint_rank(W, V) != W.rank() + 1) {
        throw InputError("subspaces do not meet in codimension one");
    }
    const double scale = witness.norm();
    if (!W.contains(witness, scale)) {
        throw InputError("dihedral witness is not in W");
    }
    const double off = V.distance_to(witness);
    if (off <= W.tolerance() * std::max(1.0, scale)) {
        throw InputError("dihedral witness lies in V");
    }
    const auto common = intersect(W, V);
    return std::clamp(off / common.distance_to(witness), 0.0, 1.0);
}

Vector dihedral_witness(const SubspaceFrame& W, const SubspaceFrame& V)
{
    if (W.rank() == 0) {
        throw InputError("no witness in a trivial subspace");
    }
    const auto& basis = W.basis();
    const auto best = std::max_element(basis.begin(), basis.end(), [&](const Vector& a, const Vector& b) {
        return V.distance_to(a) < V.distance_to(b);
    });
    return *best;
}

Region make_ball(Vector center, double radius)
{
    if (!(radius > 0.0)) {
        throw InputError("ball radius must be positive");
    }
    return Ball{std::move(center), radius};
}

Region make_tube(SubspaceFrame axis, double height)
{
    if (!(height >= 0.0)) {
        throw InputError("tube height must be nonnegative");
    }
    return Tube{std::move(axis), height};
}

Region make_cone(double theta, SubspaceFrame axis, Vector apex)
{
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
        throw InputError("cone angle must lie in [0, pi/2]");
    }
    if (!axis.contains(apex, apex.norm())) {
        throw InputError("cone apex is not on its axis");
    }
    return Cone{theta, std::move(axis), std::move(apex)};
}

bool region_contains(const Region& region, const Vector& u)
{
    struct Visitor {
        const Vector& u;
        bool operator()(const Ball& b) const { return (u - b.center).norm() <= b.radius; }
        bool operator()(const Tube& t) const { return t.axis.distance_to(u) <= t.height; }
        bool operator()(const Cone& c) const { return in_cone(c.theta, c.axis, c.apex, u); }
    };
    return std::visit(Visitor{u}, region);
}

}  // namespace hdsine
