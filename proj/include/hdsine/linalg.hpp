#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace hdsine {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorList = std::vector<Vector>;

/// Relative tolerance used by every rank decision unless a caller overrides it.
inline constexpr double kDefaultTolerance = 1e-10;

/// k-content of the parallelotope spanned by k vectors.
///
/// The value carries a sign only when k equals the ambient dimension; in that
/// case it is the determinant with respect to an orthonormal basis.
struct ContentResult {
    double value = 0.0;
    int k = 0;
    bool is_signed = false;
};

/// Throws InputError unless every vector has the same length and finite entries.
int common_dimension(std::span<const Vector> vs);

/// Vectors stacked as the columns of an n x k matrix.
Matrix as_columns(std::span<const Vector> vs);

/// Entry (i, j) is <v_i, v_j>.
Matrix gram_matrix(std::span<const Vector> vs);

/// sqrt(det Gram(vs)), computed from a Householder QR of the column matrix.
/// Never negative; returns 1 for an empty list and 0 when k exceeds n.
double abs_content(std::span<const Vector> vs);

/// Signed determinant of n vectors in R^n, standard coordinate basis.
double determinant(std::span<const Vector> vs);

ContentResult content(std::span<const Vector> vs);

/// As content(vs), but a full-rank k == n evaluation is taken with respect to
/// the orthonormal basis held in the columns of `phi`.
ContentResult content(std::span<const Vector> vs, const Matrix& phi);

/// Orthonormal basis of a linear or affine subspace.
///
/// A linear frame has a zero origin. Rank is decided once, at construction,
/// relative to the largest input norm.
class SubspaceFrame {
public:
    SubspaceFrame() = default;
    SubspaceFrame(Vector origin, std::vector<Vector> basis, double tolerance, bool affine);

    int rank() const { return static_cast<int>(basis_.size()); }
    int ambient_dim() const { return static_cast<int>(origin_.size()); }
    bool is_affine() const { return affine_; }
    double tolerance() const { return tolerance_; }
    const Vector& origin() const { return origin_; }
    const std::vector<Vector>& basis() const { return basis_; }

    /// Basis vectors as the columns of an n x rank matrix.
    Matrix basis_matrix() const;

    /// Orthogonal projection onto the (affine) subspace.
    Vector project(const Vector& u) const;

    double distance_to(const Vector& u) const;

    /// True when distance_to(u) <= tolerance * max(1, scale).
    bool contains(const Vector& u, double scale = 1.0) const;

private:
    Vector origin_;
    std::vector<Vector> basis_;
    double tolerance_ = kDefaultTolerance;
    bool affine_ = false;
};

/// Modified Gram-Schmidt with one reorthogonalization pass.
///
/// With `origin`, the frame spans {v_i - origin} anchored at origin. A vector
/// whose residual norm is at most tol * (largest input norm) is dropped.
/// `ambient_dim` fixes the dimension of an empty, origin-less frame.
SubspaceFrame orthonormal_frame(std::span<const Vector> vs,
                                const std::optional<Vector>& origin = std::nullopt,
                                double tol = kDefaultTolerance, int ambient_dim = -1);

/// Linear span of `vs` in R^ambient_dim.
SubspaceFrame span_of(std::span<const Vector> vs, int ambient_dim,
                      double tol = kDefaultTolerance);

/// Linear span of `vs` with the entries listed in `skip` left out.
SubspaceFrame span_without(std::span<const Vector> vs, std::initializer_list<int> skip,
                           int ambient_dim, double tol = kDefaultTolerance);

/// Intersection of two linear subspaces, from the null space of (I - P_b) restricted to a.
SubspaceFrame intersect(const SubspaceFrame& a, const SubspaceFrame& b);

/// Rank of the sum of two linear subspaces.
int joint_rank(const SubspaceFrame& a, const SubspaceFrame& b);

/// Orthogonal complement of a linear frame inside R^n.
SubspaceFrame orthogonal_complement(const SubspaceFrame& frame);

/// |det(vs) - sum_i det(vs with v_i replaced by u)| for u in the affine hull of vs.
///
/// Throws InputError unless there are exactly n vectors in R^n and
/// PreconditionError when u is not an affine combination of vs.
double affine_det_identity_check(std::span<const Vector> vs, const Vector& u);

/// Copy of `vs` with entry i replaced by u.
VectorList replaced(std::span<const Vector> vs, int i, const Vector& u);

/// Copy of `vs` with entry i removed.
VectorList removed(std::span<const Vector> vs, int i);

}  // namespace hdsine
