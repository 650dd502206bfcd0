#include "atsp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "atsp/errors.hpp"

namespace atsp {

namespace {

void require_same_dimension(const Point& a, const Point& b) {
    if (a.size() != b.size())
        throw Error("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
}

bool points_equal(const Point& a, const Point& b) {
    if (a.size() != b.size()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

} // namespace

Line line_through(const Point& a, const Point& b) {
    require_same_dimension(a, b);
    Point d = b - a;
    const double n = d.norm();
    if (n == 0.0) throw Error("line_through: coincident points");
    return Line{a, d / n};
}

bool line_is_valid(const Line& l, double tol) {
    if (l.anchor.size() != l.direction.size() || l.anchor.size() < 1) return false;
    return std::abs(l.direction.norm() - 1.0) <= tol;
}

PointCloud make_cloud(std::vector<Point> pts) {
    if (pts.empty()) throw Error("empty point set");
    const int dim = static_cast<int>(pts[0].size());
    if (dim < 1) throw Error("points must have dimension >= 1");

    PointCloud cloud;
    cloud.dimension = dim;
    for (const Point& p : pts) {
        if (static_cast<int>(p.size()) != dim)
            throw Error("inconsistent point dimensions in input");
        for (Eigen::Index i = 0; i < p.size(); ++i)
            if (!std::isfinite(p[i])) throw Error("non-finite coordinate in input");
        bool dup = false;
        for (const Point& q : cloud.points) {
            if (points_equal(p, q)) {
                dup = true;
                break;
            }
        }
        if (dup) {
            ++cloud.duplicates_dropped;
        } else {
            cloud.points.push_back(p);
        }
    }

    double max_norm = 0.0;
    for (const Point& p : cloud.points) max_norm = std::max(max_norm, p.norm());
    cloud.r0 = 5.0 * max_norm;
    return cloud;
}

PointCloud make_cloud_1d(const std::vector<double>& xs) {
    std::vector<Point> pts;
    pts.reserve(xs.size());
    for (double x : xs) {
        Point p(1);
        p[0] = x;
        pts.push_back(p);
    }
    return make_cloud(std::move(pts));
}

double distance(const Point& a, const Point& b, DistanceMeter& meter) {
    require_same_dimension(a, b);
    meter.tick();
    return (a - b).norm();
}

double distance(const Point& a, const Point& b) {
    require_same_dimension(a, b);
    return (a - b).norm();
}

double dist_point_to_line(const Point& p, const Line& l) {
    require_same_dimension(p, l.anchor);
    Point u = p - l.anchor;
    const double t = u.dot(l.direction);
    return (u - t * l.direction).norm();
}

double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b) {
    if (a.empty() || b.empty()) throw Error("hausdorff_distance: empty set");
    double h = 0.0;
    for (const Point& x : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const Point& y : b) best = std::min(best, distance(x, y));
        h = std::max(h, best);
    }
    for (const Point& y : b) {
        double best = std::numeric_limits<double>::infinity();
        for (const Point& x : a) best = std::min(best, distance(x, y));
        h = std::max(h, best);
    }
    return h;
}

std::vector<Point> ball_query(const std::vector<Point>& set, const Point& center,
                              double radius, bool closed, DistanceMeter* meter) {
    std::vector<Point> out;
    for (const Point& p : set) {
        const double d = meter ? distance(center, p, *meter) : distance(center, p);
        if (closed ? (d <= radius) : (d < radius)) out.push_back(p);
    }
    return out;
}

std::vector<Index> ball_query_indices(const PointCloud& cloud,
                                      const std::vector<Index>& subset,
                                      const Point& center, double radius, bool closed,
                                      DistanceMeter* meter) {
    std::vector<Index> out;
    for (Index i : subset) {
        const double d =
            meter ? distance(center, cloud[i], *meter) : distance(center, cloud[i]);
        if (closed ? (d <= radius) : (d < radius)) out.push_back(i);
    }
    return out;
}

bool is_maximal_net(const std::vector<Point>& x, const std::vector<Point>& v, double eps) {
    if (eps <= 0.0) throw Error("is_maximal_net: eps must be positive");
    for (const Point& p : x) {
        bool found = false;
        for (const Point& q : v) {
            if (points_equal(p, q)) {
                found = true;
                break;
            }
        }
        if (!found) throw Error("is_maximal_net: x is not a subset of v");
    }
    // eps-separation.
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            if (distance(x[i], x[j]) < eps) return false;
    // Maximality: every point of v is within < eps of some net point.
    for (const Point& q : v) {
        double best = std::numeric_limits<double>::infinity();
        for (const Point& p : x) best = std::min(best, distance(p, q));
        if (best >= eps) return false;
    }
    return true;
}

bool is_maximal_net(const PointCloud& cloud, const std::vector<Index>& x, double eps) {
    std::vector<Point> xs;
    xs.reserve(x.size());
    for (Index i : x) xs.push_back(cloud[i]);
    return is_maximal_net(xs, cloud.points, eps);
}

} // namespace atsp
