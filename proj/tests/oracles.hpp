#pragma once

// Independent reference computations used only by the tests.

#include "hdsine/linalg.hpp"

#include <cmath>
#include <limits>

namespace oracle {

using hdsine::Matrix;
using hdsine::Vector;

/// Laplace expansion along the first row.
inline double cofactor_det(const Matrix& a)
{
    const auto n = a.rows();
    if (n == 0) {
        return 1.0;
    }
    if (n == 1) {
        return a(0, 0);
    }
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        Matrix minor(n - 1, n - 1);
        for (Eigen::Index r = 1; r < n; ++r) {
            for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
                if (c != j) {
                    minor(r - 1, cc++) = a(r, c);
                }
            }
        }
        sum += ((j % 2 == 0) ? 1.0 : -1.0) * a(0, j) * cofactor_det(minor);
    }
    return sum;
}

inline double dot_by_summation(const Vector& a, const Vector& b)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        s += a(i) * b(i);
    }
    return s;
}

inline Vector cross(const Vector& a, const Vector& b)
{
    Vector c(3);
    c << a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0);
    return c;
}

/// min over t of |u - (origin + sum_i t_i b_i)| for up to two directions, by
/// repeated grid refinement around the best cell.
inline double grid_distance(const Vector& u, const Vector& origin, const std::vector<Vector>& dirs)
{
    const int rank = static_cast<int>(dirs.size());
    double c0 = 0.0, c1 = 0.0, width = 100.0;
    double best = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 60; ++round) {
        const int steps = 40;
        double b0 = c0, b1 = c1;
        for (int i = 0; i <= steps; ++i) {
            const double t0 = c0 - width + 2 * width * i / steps;
            for (int j = 0; j <= (rank > 1 ? steps : 0); ++j) {
                const double t1 = rank > 1 ? c1 - width + 2 * width * j / steps : 0.0;
                Vector p = origin;
                if (rank > 0) p += t0 * dirs[0];
                if (rank > 1) p += t1 * dirs[1];
                const double dist = (u - p).norm();
                if (dist < best) {
                    best = dist;
                    b0 = t0;
                    b1 = t1;
                }
            }
        }
        c0 = b0;
        c1 = b1;
        width *= 0.2;
        if (rank == 0) break;
    }
    return best;
}

}  // namespace oracle
