#include "hdsine/linalg.hpp"

#include "hdsine/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hdsine {

namespace {

// Principal-angle sines at or below this count as a shared direction.
constexpr double kIntersectionSineCutoff = 1e-8;

// Removes from r its components along the (orthonormal) vectors in basis.
void subtract_projections(Vector& r, const std::vector<Vector>& basis)
{
    for (const auto& b : basis) {
        r -= b.dot(r) * b;
    }
}

}  // namespace

int common_dimension(std::span<const Vector> vs)
{
    if (vs.empty()) {
        return -1;
    }
    const auto n = vs.front().size();
    for (const auto& v : vs) {
        if (v.size() != n) {
            throw InputError("vectors have different ambient dimensions");
        }
        if (!v.allFinite()) {
            throw InputError("vector with non-finite coordinates");
        }
    }
    return static_cast<int>(n);
}

Matrix as_columns(std::span<const Vector> vs)
{
    const int n = common_dimension(vs);
    Matrix a(std::max(n, 0), static_cast<Eigen::Index>(vs.size()));
    for (std::size_t j = 0; j < vs.size(); ++j) {
        a.col(static_cast<Eigen::Index>(j)) = vs[j];
    }
    return a;
}

Matrix gram_matrix(std::span<const Vector> vs)
{
    const Matrix a = as_columns(vs);
    return a.transpose() * a;
}

double abs_content(std::span<const Vector> vs)
{
    if (vs.empty()) {
        return 1.0;
    }
    const Matrix a = as_columns(vs);
    if (a.cols() > a.rows()) {
        return 0.0;
    }
    const Eigen::HouseholderQR<Matrix> qr(a);
    const Matrix& r = qr.matrixQR();
    double value = 1.0;
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
        value *= std::abs(r(i, i));
    }
    return value;
}

double determinant(std::span<const Vector> vs)
{
    const Matrix a = as_columns(vs);
    if (a.rows() != a.cols()) {
        throw InputError("determinant needs exactly n vectors in R^n");
    }
    if (a.rows() == 0) {
        return 1.0;
    }
    return a.partialPivLu().determinant();
}

ContentResult content(std::span<const Vector> vs)
{
    const int n = common_dimension(vs);
    const int k = static_cast<int>(vs.size());
    if (n >= 0 && k > n) {
        throw InputError("content of " + std::to_string(k) + " vectors in R^" +
                         std::to_string(n));
    }
    if (k == n) {
        return {determinant(vs), k, true};
    }
    return {abs_content(vs), k, false};
}

ContentResult content(std::span<const Vector> vs, const Matrix& phi)
{
    const int n = common_dimension(vs);
    const int k = static_cast<int>(vs.size());
    if (k != n) {
        return content(vs);
    }
    if (phi.rows() != n || phi.cols() != n) {
        throw InputError("orientation basis must be n x n");
    }
    const Matrix defect = phi.transpose() * phi - Matrix::Identity(n, n);
    if (defect.cwiseAbs().maxCoeff() > 1e-9) {
        throw InputError("orientation basis is not orthonormal");
    }
    const Matrix coords = phi.transpose() * as_columns(vs);
    return {coords.partialPivLu().determinant(), k, true};
}

SubspaceFrame::SubspaceFrame(Vector origin, std::vector<Vector> basis, double tolerance,
                             bool affine)
    : origin_(std::move(origin)), basis_(std::move(basis)), tolerance_(tolerance),
      affine_(affine)
{
}

Matrix SubspaceFrame::basis_matrix() const
{
    Matrix b(ambient_dim(), rank());
    for (int j = 0; j < rank(); ++j) {
        b.col(j) = basis_[static_cast<std::size_t>(j)];
    }
    return b;
}

Vector SubspaceFrame::project(const Vector& u) const
{
    if (origin_.size() != u.size()) {
        if (rank() == 0 && !affine_) {
            return Vector::Zero(u.size());
        }
        throw InputError("projection of a vector from a different ambient space");
    }
    const Vector shifted = u - origin_;
    Vector p = origin_;
    for (const auto& b : basis_) {
        p += b.dot(shifted) * b;
    }
    return p;
}

double SubspaceFrame::distance_to(const Vector& u) const
{
    return (u - project(u)).norm();
}

bool SubspaceFrame::contains(const Vector& u, double scale) const
{
    return distance_to(u) <= tolerance_ * std::max(1.0, scale);
}

SubspaceFrame orthonormal_frame(std::span<const Vector> vs, const std::optional<Vector>& origin,
                                double tol, int ambient_dim)
{
    if (!(tol > 0.0)) {
        throw InputError("frame tolerance must be positive");
    }
    int n = common_dimension(vs);
    if (origin) {
        if (n >= 0 && origin->size() != n) {
            throw InputError("frame origin has the wrong dimension");
        }
        n = static_cast<int>(origin->size());
    }
    if (n < 0) {
        n = std::max(ambient_dim, 0);
    }
    const Vector o = origin ? *origin : Vector::Zero(n);

    double max_norm = 0.0;
    for (const auto& v : vs) {
        max_norm = std::max(max_norm, (v - o).norm());
    }
    std::vector<Vector> basis;
    if (max_norm == 0.0) {
        return SubspaceFrame(o, std::move(basis), tol, origin.has_value());
    }
    const double cutoff = tol * max_norm;
    for (const auto& v : vs) {
        if (static_cast<int>(basis.size()) == n) {
            break;
        }
        Vector r = v - o;
        subtract_projections(r, basis);
        subtract_projections(r, basis);
        const double norm = r.norm();
        if (norm > cutoff) {
            basis.push_back(r / norm);
        }
    }
    return SubspaceFrame(o, std::move(basis), tol, origin.has_value());
}

SubspaceFrame span_of(std::span<const Vector> vs, int ambient_dim, double tol)
{
    return orthonormal_frame(vs, std::nullopt, tol, ambient_dim);
}

SubspaceFrame span_without(std::span<const Vector> vs, std::initializer_list<int> skip,
                           int ambient_dim, double tol)
{
    VectorList kept;
    kept.reserve(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (std::find(skip.begin(), skip.end(), static_cast<int>(i)) == skip.end()) {
            kept.push_back(vs[i]);
        }
    }
    return span_of(kept, ambient_dim, tol);
}

SubspaceFrame intersect(const SubspaceFrame& a, const SubspaceFrame& b)
{
    if (a.is_affine() || b.is_affine()) {
        throw InputError("intersect expects linear frames");
    }
    const int n = std::max(a.ambient_dim(), b.ambient_dim());
    if (a.rank() == 0 || b.rank() == 0) {
        return SubspaceFrame(Vector::Zero(n), {}, a.tolerance(), false);
    }
    if (a.ambient_dim() != b.ambient_dim()) {
        throw InputError("intersect of frames in different ambient spaces");
    }
    const Matrix ab = a.basis_matrix();
    const Matrix bb = b.basis_matrix();
    const Matrix residual = ab - bb * (bb.transpose() * ab);
    const Eigen::JacobiSVD<Matrix> svd(residual, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    std::vector<Vector> basis;
    for (Eigen::Index j = 0; j < ab.cols(); ++j) {
        const double s = j < sigma.size() ? sigma(j) : 0.0;
        if (s <= kIntersectionSineCutoff) {
            Vector v = ab * svd.matrixV().col(j);
            basis.push_back(v / v.norm());
        }
    }
    return SubspaceFrame(Vector::Zero(n), std::move(basis), a.tolerance(), false);
}

int joint_rank(const SubspaceFrame& a, const SubspaceFrame& b)
{
    VectorList all = a.basis();
    all.insert(all.end(), b.basis().begin(), b.basis().end());
    return span_of(all, std::max(a.ambient_dim(), b.ambient_dim()), a.tolerance()).rank();
}

SubspaceFrame orthogonal_complement(const SubspaceFrame& frame)
{
    const int n = frame.ambient_dim();
    std::vector<Vector> basis = frame.basis();
    const auto start = basis.size();
    for (int i = 0; i < n && static_cast<int>(basis.size()) < n; ++i) {
        Vector r = Vector::Unit(n, i);
        subtract_projections(r, basis);
        subtract_projections(r, basis);
        const double norm = r.norm();
        if (norm > 1e-6) {
            basis.push_back(r / norm);
        }
    }
    std::vector<Vector> complement(basis.begin() + static_cast<std::ptrdiff_t>(start),
                                   basis.end());
    return SubspaceFrame(Vector::Zero(n), std::move(complement), frame.tolerance(), false);
}

double affine_det_identity_check(std::span<const Vector> vs, const Vector& u)
{
    const int n = common_dimension(vs);
    if (n < 1 || static_cast<int>(vs.size()) != n || u.size() != n) {
        throw InputError("affine determinant identity needs n vectors in R^n");
    }
    double scale = u.norm();
    for (const auto& v : vs) {
        scale = std::max(scale, v.norm());
    }
    const auto hull = orthonormal_frame(vs.subspan(1), vs.front());
    if (hull.distance_to(u) > 1e-9 * std::max(1.0, scale)) {
        throw PreconditionError("u is not an affine combination of the vectors");
    }
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum += determinant(replaced(vs, i, u));
    }
    return std::abs(determinant(vs) - sum);
}

VectorList replaced(std::span<const Vector> vs, int i, const Vector& u)
{
    VectorList out(vs.begin(), vs.end());
    out.at(static_cast<std::size_t>(i)) = u;
    return out;
}

VectorList removed(std::span<const Vector> vs, int i)
{
    VectorList out;
    out.reserve(vs.size());
    for (std::size_t j = 0; j < vs.size(); ++j) {
        if (static_cast<int>(j) != i) {
            out.push_back(vs[j]);
        }
    }
    return out;
}

}  // namespace hdsine
