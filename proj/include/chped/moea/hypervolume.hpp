#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Core>

#include "chped/error.hpp"
#include "chped/moea/dominance.hpp"

namespace chped::moea {

/// Area dominated by the rows of `points` (n x 2) and bounded by `ref`.
/// Rows not strictly below `ref` in both coordinates contribute nothing.
/// Sweep in ascending first coordinate: O(n log n).
template <typename Derived, typename RefDerived>
typename Derived::Scalar hypervolume_2d(const Eigen::MatrixBase<Derived>& points,
                                        const Eigen::MatrixBase<RefDerived>& ref) {
    using Scalar = typename Derived::Scalar;
    if (points.rows() > 0 && points.cols() != 2) throw StructuralError("hypervolume_2d expects n x 2 points");
    std::vector<Eigen::Index> idx;
    idx.reserve(points.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        if (points(i, 0) < ref[0] && points(i, 1) < ref[1]) idx.push_back(i);
    }
    std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (points(a, 0) != points(b, 0)) return points(a, 0) < points(b, 0);
        return points(a, 1) < points(b, 1);
    });
    Scalar area = 0;
    Scalar floor_y = ref[1];
    for (Eigen::Index i : idx) {
        if (points(i, 1) < floor_y) {
            area += (ref[0] - points(i, 0)) * (floor_y - points(i, 1));
            floor_y = points(i, 1);
        }
    }
    return area;
}

/// Hypervolume for one or two objectives (rows are points).
template <typename Derived, typename RefDerived>
typename Derived::Scalar hypervolume(const Eigen::MatrixBase<Derived>& points, const Eigen::MatrixBase<RefDerived>& ref) {
    using Scalar = typename Derived::Scalar;
    if (points.rows() == 0) return Scalar(0);
    if (points.cols() == 2) return hypervolume_2d(points, ref);
    if (points.cols() == 1) {
        const Scalar best = points.col(0).minCoeff();
        return best < ref[0] ? ref[0] - best : Scalar(0);
    }
    throw StructuralError("hypervolume supports 1 or 2 objectives, got " + std::to_string(points.cols()));
}

/// Hypervolume-difference indicator between objective sets A and B (rows
/// are points): I_H(B) - I_H(A) when every point of B is dominated by a
/// point of A, otherwise the volume dominated by B but not by A.
template <typename DA, typename DB, typename DR>
typename DA::Scalar indicator_ihd(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                                  const Eigen::MatrixBase<DR>& ref) {
    using Scalar = typename DA::Scalar;
    bool all_dominated = b.rows() > 0;
    for (Eigen::Index j = 0; j < b.rows() && all_dominated; ++j) {
        bool covered = false;
        for (Eigen::Index i = 0; i < a.rows() && !covered; ++i) covered = dominates(a.row(i), b.row(j));
        all_dominated = covered;
    }
    const Scalar hv_a = hypervolume(a, ref);
    if (all_dominated) return hypervolume(b, ref) - hv_a;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> both(a.rows() + b.rows(), std::max(a.cols(), b.cols()));
    if (a.rows() > 0) both.topRows(a.rows()) = a;
    if (b.rows() > 0) both.bottomRows(b.rows()) = b;
    return hypervolume(both, ref) - hv_a;
}

}  // namespace chped::moea
