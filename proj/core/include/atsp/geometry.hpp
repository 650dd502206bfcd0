#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "atsp/meter.hpp"

namespace atsp {

using Point = Eigen::VectorXd;
using Index = std::uint32_t;

/// Infinite line given by a point on it and a unit direction.
struct Line {
    Point anchor;
    Point direction; // |direction| = 1 within 1e-12
};

/// Line through two distinct points.
Line line_through(const Point& a, const Point& b);

/// Frame check used by tests and factories.
bool line_is_valid(const Line& l, double tol = 1e-12);

/// Deduplicated finite point set together with its enclosing scale
/// r0 = 5 * max |v|. All points lie in [-r0, r0]^N.
struct PointCloud {
    std::vector<Point> points;
    int dimension = 0;
    double r0 = 0.0;
    std::size_t duplicates_dropped = 0;

    std::size_t size() const { return points.size(); }
    const Point& operator[](Index i) const { return points[i]; }
};

/// Builds a cloud from raw points: validates finiteness and a consistent
/// dimension, drops exact duplicates (first occurrence wins), computes r0.
PointCloud make_cloud(std::vector<Point> pts);

/// Convenience for 1-D clouds.
PointCloud make_cloud_1d(const std::vector<double>& xs);

/// Euclidean distance, charged to the meter's current phase.
double distance(const Point& a, const Point& b, DistanceMeter& meter);

/// Un-metered convenience wrapper; the pipeline always meters.
double distance(const Point& a, const Point& b);

/// Orthogonal distance from p to the infinite line l.
double dist_point_to_line(const Point& p, const Line& l);

/// Hausdorff distance between two nonempty finite sets (double loop).
double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b);

/// All points of `set` with distance < radius (open) or <= radius (closed)
/// from `center`. Linear scan; optionally metered.
std::vector<Point> ball_query(const std::vector<Point>& set, const Point& center,
                              double radius, bool closed,
                              DistanceMeter* meter = nullptr);

/// Index-based variant over a subset of a cloud.
std::vector<Index> ball_query_indices(const PointCloud& cloud,
                                      const std::vector<Index>& subset,
                                      const Point& center, double radius, bool closed,
                                      DistanceMeter* meter = nullptr);

/// True iff x is an eps-separated subset of v that is maximal: no point of
/// v \ x has distance >= eps to all of x. Exact comparisons throughout.
/// Throws if x is not a subset of v (coordinate equality).
bool is_maximal_net(const std::vector<Point>& x, const std::vector<Point>& v, double eps);

/// Same check on cloud indices.
bool is_maximal_net(const PointCloud& cloud, const std::vector<Index>& x, double eps);

} // namespace atsp
