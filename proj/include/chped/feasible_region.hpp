#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "chped/error.hpp"

namespace chped {

/// Boundary tolerance for membership tests, in MW / MWth.
inline constexpr double kBoundaryTol = 1e-9;

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

/// Closed interval [lo, hi]; lo == hi is a degenerate (single point) interval.
template <typename Scalar>
struct Interval {
    Scalar lo;
    Scalar hi;

    Scalar width() const { return hi - lo; }
    bool contains(Scalar v, Scalar tol = Scalar(kBoundaryTol)) const {
        return v >= lo - tol && v <= hi + tol;
    }
    Scalar clamp(Scalar v) const { return std::clamp(v, lo, hi); }
};

/// Convex heat-power feasible operating region of a cogeneration unit.
///
/// Vertices are (power MW, heat MWth) pairs in counter-clockwise order. The
/// constructor rejects anything that is not a simple, strictly convex,
/// counter-clockwise polygon.
template <typename Scalar = double>
class ForPolygon {
public:
    using Point = Point2<Scalar>;

    explicit ForPolygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) { validate(); }

    const std::vector<Point>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }

    /// Inside or on the boundary, with signed edge distance >= -tol.
    bool contains(const Point& q, Scalar tol = Scalar(kBoundaryTol)) const {
        const std::size_t n = vertices_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point& a = vertices_[i];
            const Point& b = vertices_[(i + 1) % n];
            const Point e = b - a;
            if (cross(e, q - a) / e.norm() < -tol) return false;
        }
        return true;
    }

    /// Feasible power interval at fixed heat.
    std::optional<Interval<Scalar>> power_bounds_at_heat(Scalar h) const { return slice(1, h); }

    /// Feasible heat interval at fixed power.
    std::optional<Interval<Scalar>> heat_bounds_at_power(Scalar p) const { return slice(0, p); }

    /// Euclidean-nearest point of the polygon; identity for points inside.
    Point project(const Point& q) const {
        if (contains(q)) return q;
        const std::size_t n = vertices_.size();
        Point best = vertices_[0];
        Scalar best_d2 = std::numeric_limits<Scalar>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const Point c = closest_on_segment(vertices_[i], vertices_[(i + 1) % n], q);
            const Scalar d2 = (c - q).squaredNorm();
            if (d2 < best_d2) {
                best_d2 = d2;
                best = c;
            }
        }
        return best;
    }

    Scalar distance(const Point& q) const { return (project(q) - q).norm(); }

    Point centroid() const {
        // area-weighted centroid
        Scalar area2 = 0;
        Point c = Point::Zero();
        const std::size_t n = vertices_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point& a = vertices_[i];
            const Point& b = vertices_[(i + 1) % n];
            const Scalar w = cross(a, b);
            area2 += w;
            c += (a + b) * w;
        }
        return c / (Scalar(3) * area2);
    }

    Scalar area() const {
        Scalar area2 = 0;
        const std::size_t n = vertices_.size();
        for (std::size_t i = 0; i < n; ++i) area2 += cross(vertices_[i], vertices_[(i + 1) % n]);
        return area2 / 2;
    }

    /// Axis-aligned bounds: column 0 is the minimum corner, column 1 the maximum.
    Eigen::Matrix<Scalar, 2, 2> bounding_box() const {
        Eigen::Matrix<Scalar, 2, 2> box;
        box.col(0) = vertices_[0];
        box.col(1) = vertices_[0];
        for (const Point& v : vertices_) {
            box.col(0) = box.col(0).cwiseMin(v);
            box.col(1) = box.col(1).cwiseMax(v);
        }
        return box;
    }

    template <typename Other>
    ForPolygon<Other> cast() const {
        std::vector<Point2<Other>> out;
        out.reserve(vertices_.size());
        for (const Point& v : vertices_) out.push_back(v.template cast<Other>());
        return ForPolygon<Other>(std::move(out));
    }

    static Scalar cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

    static Point closest_on_segment(const Point& a, const Point& b, const Point& q) {
        const Point e = b - a;
        const Scalar len2 = e.squaredNorm();
        Scalar t = len2 > 0 ? (q - a).dot(e) / len2 : Scalar(0);
        t = std::clamp(t, Scalar(0), Scalar(1));
        return a + t * e;
    }

private:
    void validate() const {
        const std::size_t n = vertices_.size();
        if (n < 3) throw StructuralError("feasible region needs at least 3 vertices, got " + std::to_string(n));
        for (const Point& v : vertices_) {
            if (!v.allFinite()) throw StructuralError("feasible region has a non-finite vertex");
        }
        Scalar turning = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const Point& a = vertices_[i];
            const Point& b = vertices_[(i + 1) % n];
            const Point& c = vertices_[(i + 2) % n];
            if ((b - a).norm() == 0) {
                throw StructuralError("feasible region repeats vertex " + std::to_string((i + 1) % n));
            }
            const Point e1 = b - a;
            const Point e2 = c - b;
            const Scalar turn = cross(e1, e2);
            if (!(turn > 0)) {
                throw StructuralError("feasible region is not convex and counter-clockwise at vertex " +
                                      std::to_string((i + 1) % n));
            }
            turning += std::atan2(turn, e1.dot(e2));
        }
        // All left turns but winding more than once means a self-intersecting star.
        if (std::abs(turning - Scalar(2 * std::numbers::pi)) > Scalar(1e-6)) {
            throw StructuralError("feasible region is self-intersecting");
        }
    }

    // Intersect the line {coordinate[axis] == value} with the polygon and
    // return the covered range of the other coordinate.
    std::optional<Interval<Scalar>> slice(int axis, Scalar value) const {
        const int other = 1 - axis;
        const auto box = bounding_box();
        const Scalar lo_axis = box(axis, 0);
        const Scalar hi_axis = box(axis, 1);
        const Scalar tol = Scalar(kBoundaryTol);
        if (value < lo_axis - tol || value > hi_axis + tol) return std::nullopt;
        value = std::clamp(value, lo_axis, hi_axis);

        Scalar lo = std::numeric_limits<Scalar>::infinity();
        Scalar hi = -std::numeric_limits<Scalar>::infinity();
        const std::size_t n = vertices_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point& a = vertices_[i];
            const Point& b = vertices_[(i + 1) % n];
            const Scalar ua = a[axis] - value;
            const Scalar ub = b[axis] - value;
            if (ua == 0) {
                lo = std::min(lo, a[other]);
                hi = std::max(hi, a[other]);
            }
            if ((ua < 0 && ub > 0) || (ua > 0 && ub < 0)) {
                const Scalar t = ua / (ua - ub);
                const Scalar w = a[other] + t * (b[other] - a[other]);
                lo = std::min(lo, w);
                hi = std::max(hi, w);
            }
        }
        if (lo > hi) return std::nullopt;
        return Interval<Scalar>{lo, hi};
    }

    std::vector<Point> vertices_;
};

/// Union of convex parts. Most units use a single convex polygon; regions
/// with a notch are supplied pre-split into convex parts that share edges.
class FeasibleRegion {
public:
    using Polygon = ForPolygon<double>;
    using Point = Polygon::Point;

    explicit FeasibleRegion(std::vector<Polygon> parts) : parts_(std::move(parts)) {
        if (parts_.empty()) throw StructuralError("feasible region has no parts");
    }
    explicit FeasibleRegion(Polygon single) : parts_{std::move(single)} {}

    const std::vector<Polygon>& parts() const { return parts_; }

    bool contains(const Point& q, double tol = kBoundaryTol) const {
        return std::any_of(parts_.begin(), parts_.end(), [&](const Polygon& p) { return p.contains(q, tol); });
    }

    Point project(const Point& q) const {
        if (contains(q)) return q;
        Point best = parts_[0].project(q);
        double best_d2 = (best - q).squaredNorm();
        for (std::size_t i = 1; i < parts_.size(); ++i) {
            const Point c = parts_[i].project(q);
            const double d2 = (c - q).squaredNorm();
            if (d2 < best_d2) {
                best_d2 = d2;
                best = c;
            }
        }
        return best;
    }

    double distance(const Point& q) const { return (project(q) - q).norm(); }

    /// Hull of the per-part intervals; exact when the union's slices are connected.
    std::optional<Interval<double>> power_bounds_at_heat(double h) const {
        return merge([h](const Polygon& p) { return p.power_bounds_at_heat(h); });
    }
    std::optional<Interval<double>> heat_bounds_at_power(double p) const {
        return merge([p](const Polygon& poly) { return poly.heat_bounds_at_power(p); });
    }

    Eigen::Matrix2d bounding_box() const {
        Eigen::Matrix2d box = parts_[0].bounding_box();
        for (std::size_t i = 1; i < parts_.size(); ++i) {
            const Eigen::Matrix2d b = parts_[i].bounding_box();
            box.col(0) = box.col(0).cwiseMin(b.col(0));
            box.col(1) = box.col(1).cwiseMax(b.col(1));
        }
        return box;
    }

private:
    template <typename F>
    std::optional<Interval<double>> merge(F&& f) const {
        std::optional<Interval<double>> out;
        for (const Polygon& p : parts_) {
            if (auto iv = f(p)) {
                if (!out) {
                    out = iv;
                } else {
                    out->lo = std::min(out->lo, iv->lo);
                    out->hi = std::max(out->hi, iv->hi);
                }
            }
        }
        return out;
    }

    std::vector<Polygon> parts_;
};

}  // namespace chped
