#include "atsp/baselines.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "atsp/errors.hpp"

namespace atsp {

double mst_length(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    if (n == 0) throw Error("mst_length: empty cloud");
    if (n == 1) return 0.0;

    std::vector<bool> in_tree(n, false);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    in_tree[0] = true;
    for (std::size_t i = 1; i < n; ++i)
        best[i] = distance(cloud[0], cloud[static_cast<Index>(i)]);

    double total = 0.0;
    for (std::size_t added = 1; added < n; ++added) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!in_tree[i] && (pick == n || best[i] < best[pick])) pick = i;
        }
        total += best[pick];
        in_tree[pick] = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (in_tree[i]) continue;
            best[i] = std::min(best[i], distance(cloud[static_cast<Index>(pick)],
                                                 cloud[static_cast<Index>(i)]));
        }
    }
    return total;
}

InsertionTour nearest_insertion_tour(const PointCloud& cloud, Index start) {
    const std::size_t n = cloud.size();
    if (n == 0) throw Error("nearest_insertion_tour: empty cloud");
    if (start >= n) throw Error("nearest_insertion_tour: start out of range");

    InsertionTour out;
    if (n == 1) {
        out.cycle = {start};
        return out;
    }

    std::vector<Index> cycle{start, start}; // closed
    std::vector<bool> used(n, false);
    used[start] = true;
    std::vector<double> to_cycle(n);
    for (std::size_t i = 0; i < n; ++i)
        to_cycle[i] = distance(cloud[start], cloud[static_cast<Index>(i)]);

    for (std::size_t added = 1; added < n; ++added) {
        // Nearest non-tour city; ties by index.
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            if (pick == n || to_cycle[i] < to_cycle[pick]) pick = i;
        }
        // Cheapest insertion position; ties by earliest position.
        std::size_t best_pos = 0;
        double best_delta = std::numeric_limits<double>::infinity();
        for (std::size_t pos = 0; pos + 1 < cycle.size(); ++pos) {
            const Point& a = cloud[cycle[pos]];
            const Point& b = cloud[cycle[pos + 1]];
            const Point& c = cloud[static_cast<Index>(pick)];
            const double delta = distance(a, c) + distance(c, b) - distance(a, b);
            if (delta < best_delta) {
                best_delta = delta;
                best_pos = pos;
            }
        }
        cycle.insert(cycle.begin() + static_cast<std::ptrdiff_t>(best_pos) + 1,
                     static_cast<Index>(pick));
        used[pick] = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            to_cycle[i] = std::min(to_cycle[i], distance(cloud[static_cast<Index>(pick)],
                                                         cloud[static_cast<Index>(i)]));
        }
    }

    double len = 0.0;
    for (std::size_t i = 0; i + 1 < cycle.size(); ++i)
        len += distance(cloud[cycle[i]], cloud[cycle[i + 1]]);
    out.cycle = std::move(cycle);
    out.length = len;
    return out;
}

namespace {

double permutation_optimal(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    std::vector<Index> perm(n - 1);
    std::iota(perm.begin(), perm.end(), 1);
    double best = std::numeric_limits<double>::infinity();
    do {
        double len = distance(cloud[0], cloud[perm.front()]);
        for (std::size_t i = 0; i + 1 < perm.size(); ++i)
            len += distance(cloud[perm[i]], cloud[perm[i + 1]]);
        len += distance(cloud[perm.back()], cloud[0]);
        best = std::min(best, len);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

double held_karp_optimal(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    const std::size_t m = n - 1; // cities 1..n-1, city 0 is the anchor
    const std::size_t full = std::size_t{1} << m;
    constexpr double inf = std::numeric_limits<double>::infinity();

    std::vector<double> dist(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            dist[i * n + j] =
                distance(cloud[static_cast<Index>(i)], cloud[static_cast<Index>(j)]);

    // dp[mask][j] = shortest path from 0 visiting exactly mask, ending at j+1.
    std::vector<double> dp(full * m, inf);
    for (std::size_t j = 0; j < m; ++j)
        dp[(std::size_t{1} << j) * m + j] = dist[0 * n + (j + 1)];
    for (std::size_t mask = 1; mask < full; ++mask) {
        for (std::size_t j = 0; j < m; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            const double cur = dp[mask * m + j];
            if (cur == inf) continue;
            for (std::size_t k = 0; k < m; ++k) {
                if (mask & (std::size_t{1} << k)) continue;
                const std::size_t next = mask | (std::size_t{1} << k);
                dp[next * m + k] =
                    std::min(dp[next * m + k], cur + dist[(j + 1) * n + (k + 1)]);
            }
        }
    }
    double best = inf;
    for (std::size_t j = 0; j < m; ++j)
        best = std::min(best, dp[(full - 1) * m + j] + dist[(j + 1) * n + 0]);
    return best;
}

} // namespace

double optimal_cycle_length(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    if (n < 2 || n > 10)
        throw Error("optimal_cycle_length: n must be in [2, 10], got " + std::to_string(n));
    return n < 8 ? permutation_optimal(cloud) : held_karp_optimal(cloud);
}

} // namespace atsp
