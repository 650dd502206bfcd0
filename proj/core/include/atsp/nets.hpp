#pragma once

#include <vector>

#include "atsp/geometry.hpp"
#include "atsp/meter.hpp"

namespace atsp {

/// One rung of the refinement ladder: V_k (insertion order) and the
/// residual U_k (ascending cloud index), with the dyadic exponent n_k.
/// The net is a maximal (2^-exponent * r0)-separated subset of the cloud.
struct NetLevel {
    int exponent = 1;
    std::vector<Index> net;
    std::vector<Index> residual;
};

/// The full refinement sequence V_1 ⊊ V_2 ⊊ ... ⊊ V_m = V.
struct NetLadder {
    std::vector<NetLevel> levels;
};

/// Dyadic scale 2^-exponent * r0 for a level exponent. Exact in IEEE.
double dyadic_scale(double r0, int exponent);

struct RefineResult {
    int k = 0; // scale gap: new separation is 2^-k * eps
    NetLevel level;
};

/// One refinement step: given a maximal eps-net with nonempty residual,
/// finds the smallest k >= 1 with 2^-k * eps <= d (d = max over residual
/// of the min distance to the net) and extends the net by a greedy scan
/// of the residual in ascending cloud index. The result is a maximal
/// (2^-k * eps)-net satisfying
///     2^-k * eps <= dist_H(old net, new net) < 2^(1-k) * eps.
/// All pair evaluations are charged to the meter (net-refinement phase).
RefineResult refine_net(const PointCloud& cloud, const NetLevel& level, double eps,
                        DistanceMeter& meter);

/// Builds the whole ladder: level 1 is ({first point}, rest) at exponent 1,
/// then refine_net repeats with eps = 2^-n_k * r0 and n_{k+1} = n_k + k
/// until the residual is empty.
NetLadder build_ladder(const PointCloud& cloud, DistanceMeter& meter);

} // namespace atsp
