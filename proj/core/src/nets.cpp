#include "atsp/nets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "atsp/errors.hpp"

namespace atsp {

double dyadic_scale(double r0, int exponent) { return std::ldexp(r0, -exponent); }

RefineResult refine_net(const PointCloud& cloud, const NetLevel& level, double eps,
                        DistanceMeter& meter) {
    if (eps <= 0.0) throw Error("refine_net: eps must be positive");
    if (level.residual.empty()) throw Error("refine_net: already complete (empty residual)");
    if (!is_maximal_net(cloud, level.net, eps))
        throw Error("refine_net: input net is not a maximal eps-net");

    PhaseScope scope(meter, Phase::NetRefinement);

    // d = max over residual of min distance to the net: |net| * |residual|
    // pair evaluations, the quantity the complexity theorem counts.
    double d = 0.0;
    for (Index u : level.residual) {
        double best = std::numeric_limits<double>::infinity();
        for (Index x : level.net) best = std::min(best, distance(cloud[x], cloud[u], meter));
        d = std::max(d, best);
    }
    if (d <= 0.0) throw Error("refine_net: degenerate residual (duplicate points?)");

    // Smallest k >= 1 with 2^-k * eps <= d. Halving is exact.
    int k = 1;
    double sep = 0.5 * eps;
    while (sep > d) {
        sep *= 0.5;
        ++k;
        if (k > 2200) throw Error("refine_net: scale underflow");
    }

    // Greedy scan in ascending cloud index: admit a residual point iff its
    // min distance to the current net is >= the new separation. No early
    // exit in the inner loop; the linear scan is part of what is measured.
    RefineResult result;
    result.k = k;
    result.level.exponent = level.exponent + k;
    result.level.net = level.net;
    for (Index u : level.residual) {
        double best = std::numeric_limits<double>::infinity();
        for (Index x : result.level.net)
            best = std::min(best, distance(cloud[x], cloud[u], meter));
        if (best >= sep) {
            result.level.net.push_back(u);
        } else {
            result.level.residual.push_back(u);
        }
    }
    return result;
}

NetLadder build_ladder(const PointCloud& cloud, DistanceMeter& meter) {
    if (cloud.size() == 0) throw Error("build_ladder: empty cloud");

    NetLevel first;
    first.exponent = 1;
    first.net = {0};
    first.residual.resize(cloud.size() > 0 ? cloud.size() - 1 : 0);
    for (std::size_t i = 1; i < cloud.size(); ++i)
        first.residual[i - 1] = static_cast<Index>(i);

    NetLadder ladder;
    ladder.levels.push_back(first);
    // r0 = 0 only for the single-point cloud at the origin; the loop below
    // is then skipped and no scale is ever formed from it.
    while (!ladder.levels.back().residual.empty()) {
        const NetLevel& cur = ladder.levels.back();
        const double eps = dyadic_scale(cloud.r0, cur.exponent);
        RefineResult r = refine_net(cloud, cur, eps, meter);
        ladder.levels.push_back(std::move(r.level));
    }
    return ladder;
}

} // namespace atsp
