#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "atsp/geometry.hpp"
#include "atsp/meter.hpp"

namespace atsp {

enum class FlatnessBackend { Width, Grid };

struct FlatnessParams {
    double c0 = 300.0;
    /// Grid half-resolution L; 0 means auto: ceil(40 * c0 * sqrt(N-1)), at least 1.
    int grid_l = 0;
    FlatnessBackend backend = FlatnessBackend::Width;
    /// A vertex is flat iff alpha <= flat_threshold.
    double flat_threshold = 0.0625;
    /// Upper bound on the number of grid point pairs the grid backend may
    /// be asked to minimize over (about 2^40 by default).
    double grid_pair_budget = 1.1e12;
};

int effective_grid_l(const FlatnessParams& params, int dimension);

/// Number of distinct grid point pairs for the given parameters, as a
/// double since it overflows 64 bits long before it becomes computable.
double grid_pair_count(const FlatnessParams& params, int dimension);

/// Set when the grid resolution is below the profile bound
/// L >= 40 * c0 * sqrt(N-1) required for the flatness comparison lemma.
std::optional<std::string> grid_profile_warning(const FlatnessParams& params, int dimension);

/// Flatness of a neighborhood: the smallest normalized max-distance to a
/// line from the backend's candidate family, the minimizing line, and the
/// neighborhood it was measured on.
struct FlatnessResult {
    double alpha = 0.0;
    Line line;
    double scale = 1.0;
    /// Cloud indices of B_{v,X'}; filled by vertex_flatness, empty when a
    /// backend is called on a raw point set.
    std::vector<Index> neighborhood;
    /// Minimizing grid pair (integer grid coordinates); grid backend only.
    std::vector<long long> grid_pair_a, grid_pair_b;
};

/// Isometric affine map Psi(x) = A(x - t) with A orthogonal, taking the
/// designated line direction to the x1-axis. <Psi(t)>_1 = 0 always.
struct OrientedFrame {
    Eigen::MatrixXd rotation;
    Point translation;

    Eigen::VectorXd apply(const Point& x) const { return rotation * (x - translation); }
    double first(const Point& x) const { return rotation.row(0).dot(x - translation); }
};

/// Builds the frame for a line and an origin. The direction sign is fixed
/// by flipping so that its first nonzero coordinate is positive, so equal
/// inputs always produce the same frame.
OrientedFrame orient(const Line& line, const Point& origin);

/// Exact lexicographic comparison of Psi-image coordinate vectors; used
/// to order points along a line with deterministic tie-breaks.
bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// B_{v,X'}: open ball of radius c0 * scale about v, intersected with x_prime.
std::vector<Point> neighborhood(const Point& v, const std::vector<Point>& x_prime,
                                double scale, double c0, DistanceMeter& meter);
std::vector<Index> neighborhood_indices(const PointCloud& cloud,
                                        const std::vector<Index>& x_prime, Index v,
                                        double scale, double c0, DistanceMeter& meter);

/// Grid flatness: minimizes D(x,y) = max_{z in b} dist(z, line(x,y)) / scale
/// over all distinct pairs of grid images phi(z) = c0 * scale * z / L + v,
/// z in {-2L,...,2L}^N. Ties go to the lexicographically smallest grid
/// index pair. Throws GridInfeasibleError when the pair count exceeds the
/// budget; the width backend has no such limit.
FlatnessResult alpha_grid(const Point& v, const std::vector<Point>& b, double scale,
                          const FlatnessParams& params);

/// Width flatness: exact half-width of the thinnest strip containing b for
/// N = 2 (rotating calipers over the convex hull, line = strip midline);
/// zero with the axis line for N = 1; for N >= 3 the minimum over candidate
/// lines (all point pairs of b, then the principal axis through the centroid).
FlatnessResult alpha_width(const Point& v, const std::vector<Point>& b, double scale);

/// Computes B_{v,X'} (metered, flatness phase) and dispatches to the
/// configured backend.
FlatnessResult vertex_flatness(const PointCloud& cloud, Index v,
                               const std::vector<Index>& x_prime, double scale,
                               const FlatnessParams& params, DistanceMeter& meter);

/// Unordered pair of distinct net vertices.
struct FlatPair {
    Index a = 0; // a < b
    Index b = 0;
};
inline bool operator==(const FlatPair& x, const FlatPair& y) {
    return x.a == y.a && x.b == y.b;
}
inline bool operator<(const FlatPair& x, const FlatPair& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
}

/// Flat pairs of v within the net x against the finer net x_prime:
/// empty when B'_{v,X} = X ∩ B(v, c0 * 2^-(gap+1) * eps) is just {v} or when
/// alpha(v, X') exceeds the flat threshold; otherwise the nearest neighbor
/// strictly left and/or strictly right of v along the minimizing line, each
/// also required to satisfy eps <= |v - v'| < c0 * 2^-(gap+1) * eps.
/// Throws if v is not a member of x.
std::vector<FlatPair> flat_pairs(const PointCloud& cloud, Index v,
                                 const std::vector<Index>& x,
                                 const std::vector<Index>& x_prime, double eps,
                                 int scale_gap, const FlatnessParams& params,
                                 DistanceMeter& meter);

} // namespace atsp
