#include "atsp/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "atsp/baselines.hpp"
#include "atsp/errors.hpp"

namespace atsp {

namespace {

using Clock = std::chrono::steady_clock;

class WallTimer {
public:
    explicit WallTimer(double& slot) : slot_(slot), start_(Clock::now()) {}
    ~WallTimer() {
        slot_ += std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    }

private:
    double& slot_;
    Clock::time_point start_;
};

double& wall_slot(RunTrace& trace, Phase p) { return trace.wall_ms[static_cast<int>(p)]; }

/// Memoized per-vertex flatness against one net at one scale. References
/// stay valid across inserts (node-based map).
class FlatnessCache {
public:
    FlatnessCache(const PointCloud& cloud, const std::vector<Index>& net, double scale,
                  const FlatnessParams& params)
        : cloud_(cloud), net_(net), scale_(scale), params_(params) {}

    const FlatnessResult& at(Index v, DistanceMeter& meter) {
        auto it = memo_.find(v);
        if (it != memo_.end()) return it->second;
        FlatnessResult r = vertex_flatness(cloud_, v, net_, scale_, params_, meter);
        return memo_.emplace(v, std::move(r)).first->second;
    }

private:
    const PointCloud& cloud_;
    const std::vector<Index>& net_;
    double scale_;
    const FlatnessParams& params_;
    std::unordered_map<Index, FlatnessResult> memo_;
};

/// Frame for `line` about `origin` flipped so that `toward` lands at a
/// nonnegative first coordinate (full lexicographic tie-break).
OrientedFrame orient_toward(const Line& line, const Point& origin, const Point& toward) {
    OrientedFrame frame = orient(line, origin);
    Eigen::VectorXd key = frame.apply(toward);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(key.size());
    if (key[0] < 0.0 || (key[0] == 0.0 && lex_less(key, zero)))
        frame.rotation.row(0) *= -1.0;
    return frame;
}

std::array<std::uint64_t, kPhaseCount> meter_snapshot(const DistanceMeter& m) {
    return m.by_phase;
}

} // namespace

Families classify_vertices(const PointCloud& cloud, const std::vector<Index>& net,
                           const std::vector<Index>& finer_net, double finer_scale,
                           const SolverParams& params, DistanceMeter& meter) {
    if (finer_net.empty()) throw Error("classify_vertices: missing lookahead net");
    Families fam;
    for (Index v : net) {
        FlatnessResult r =
            vertex_flatness(cloud, v, finer_net, finer_scale, params.flatness, meter);
        fam.alpha_max = std::max(fam.alpha_max, r.alpha);
        if (r.alpha <= params.flatness.flat_threshold) {
            fam.flat.push_back(v);
        } else {
            fam.nonflat.push_back(v);
        }
    }
    std::sort(fam.flat.begin(), fam.flat.end());
    std::sort(fam.nonflat.begin(), fam.nonflat.end());
    return fam;
}

EdgeBatch edges_from_old(const PointCloud& cloud, const ScaleGraph& coarse_graph,
                         const std::vector<Index>& fine_net, int fine_exponent,
                         const SolverParams& params, DistanceMeter& meter) {
    EdgeBatch batch;
    const double threshold = params.flatness.flat_threshold;
    const double fine_scale = dyadic_scale(cloud.r0, fine_exponent);
    const double long_edge = params.flatness.c0 * dyadic_scale(cloud.r0, fine_exponent + 1);
    FlatnessCache cache(cloud, fine_net, fine_scale, params.flatness);

    for (const GraphEdge& e : coarse_graph.edges()) {
        double len;
        {
            PhaseScope scope(meter, Phase::EdgeAssembly);
            len = distance(cloud[e.a], cloud[e.b], meter);
        }
        if (len >= long_edge) {
            batch.edges.push_back(GraphEdge{e.a, e.b, EdgeTag::E1});
            continue;
        }
        const FlatnessResult& fa = cache.at(e.a, meter);
        const FlatnessResult& fb = cache.at(e.b, meter);
        if (fa.alpha > threshold && fb.alpha > threshold) {
            batch.edges.push_back(GraphEdge{e.a, e.b, EdgeTag::E1});
            continue;
        }

        // Subdivide along the flat endpoint's line, oriented so the other
        // endpoint projects positively.
        const Index center = fa.alpha <= threshold ? e.a : e.b;
        const Index other = center == e.a ? e.b : e.a;
        const FlatnessResult& fc = center == e.a ? fa : fb;
        const FlatnessResult& fo = center == e.a ? fb : fa;
        const OrientedFrame frame = orient_toward(fc.line, cloud[center], cloud[other]);
        const double top = frame.first(cloud[other]);

        std::vector<Index> candidates = fc.neighborhood;
        candidates.insert(candidates.end(), fo.neighborhood.begin(), fo.neighborhood.end());
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()),
                         candidates.end());

        std::vector<std::pair<Eigen::VectorXd, Index>> between;
        for (Index p : candidates) {
            if (p == center || p == other) continue;
            Eigen::VectorXd key = frame.apply(cloud[p]);
            if (key[0] > 0.0 && key[0] < top) between.emplace_back(std::move(key), p);
        }
        std::sort(between.begin(), between.end(),
                  [](const auto& a, const auto& b) { return lex_less(a.first, b.first); });

        Index prev = center;
        std::vector<Index> consumed;
        for (const auto& [key, p] : between) {
            batch.edges.push_back(
                GraphEdge{std::min(prev, p), std::max(prev, p), EdgeTag::E1});
            consumed.push_back(p);
            prev = p;
        }
        batch.edges.push_back(
            GraphEdge{std::min(prev, other), std::max(prev, other), EdgeTag::E1});
        if (!consumed.empty()) batch.point_sets.push_back(std::move(consumed));
    }
    return batch;
}

EdgeBatch edges_from_flat(const PointCloud& cloud, const std::vector<Index>& flat_family,
                          const std::vector<Index>& coarse_net,
                          const std::vector<Index>& fine_net, int fine_exponent,
                          const SolverParams& params, DistanceMeter& meter) {
    EdgeBatch batch;
    const double fine_scale = dyadic_scale(cloud.r0, fine_exponent);
    const double chain_radius = dyadic_scale(cloud.r0, fine_exponent - 1);
    FlatnessCache cache(cloud, fine_net, fine_scale, params.flatness);
    const std::unordered_set<Index> coarse(coarse_net.begin(), coarse_net.end());

    for (Index u : flat_family) {
        const FlatnessResult& f = cache.at(u, meter);
        const OrientedFrame frame = orient(f.line, cloud[u]);

        bool left_taken = false, right_taken = false;
        for (Index p : f.neighborhood) {
            if (p == u || !coarse.count(p)) continue;
            const double c = frame.first(cloud[p]);
            if (c < 0.0) left_taken = true;
            if (c > 0.0) right_taken = true;
        }
        if (left_taken && right_taken) continue;

        std::vector<Index> ball;
        {
            PhaseScope scope(meter, Phase::EdgeAssembly);
            ball = ball_query_indices(cloud, fine_net, cloud[u], chain_radius,
                                      /*closed=*/true, &meter);
        }

        std::vector<Index> consumed;
        auto chain_side = [&](bool negative) {
            std::vector<std::pair<Eigen::VectorXd, Index>> side;
            for (Index p : ball) {
                if (p == u) continue;
                Eigen::VectorXd key = frame.apply(cloud[p]);
                if (negative ? key[0] < 0.0 : key[0] > 0.0)
                    side.emplace_back(std::move(key), p);
            }
            // Enumerated outermost first, chained toward u.
            std::sort(side.begin(), side.end(), [&](const auto& a, const auto& b) {
                return negative ? lex_less(a.first, b.first) : lex_less(b.first, a.first);
            });
            for (std::size_t i = 0; i + 1 < side.size(); ++i)
                batch.edges.push_back(GraphEdge{std::min(side[i].second, side[i + 1].second),
                                                std::max(side[i].second, side[i + 1].second),
                                                EdgeTag::E2});
            if (!side.empty()) {
                const Index last = side.back().second;
                batch.edges.push_back(
                    GraphEdge{std::min(last, u), std::max(last, u), EdgeTag::E2});
            }
            for (const auto& [key, p] : side) consumed.push_back(p);
        };
        if (!left_taken) chain_side(true);
        if (!right_taken) chain_side(false);
        if (!consumed.empty()) batch.point_sets.push_back(std::move(consumed));
    }
    return batch;
}

EdgeBatch edges_from_nonflat(const PointCloud& cloud,
                             const std::vector<Index>& nonflat_family,
                             const std::vector<Index>& coarse_net,
                             const std::vector<Index>& fine_net, int fine_exponent,
                             const EdgeBatch& e1, const EdgeBatch& e2,
                             const SolverParams& params, DistanceMeter& meter) {
    (void)coarse_net;
    EdgeBatch batch;
    const double eps_fine = dyadic_scale(cloud.r0, fine_exponent);
    const double radius = params.flatness.c0 * eps_fine;

    std::unordered_set<Index> covered;
    for (const GraphEdge& e : e1.edges) {
        covered.insert(e.a);
        covered.insert(e.b);
    }
    for (const GraphEdge& e : e2.edges) {
        covered.insert(e.a);
        covered.insert(e.b);
    }

    for (Index up : nonflat_family) {
        std::vector<Index> vprime;
        {
            PhaseScope scope(meter, Phase::EdgeAssembly);
            vprime = ball_query_indices(cloud, fine_net, cloud[up], radius,
                                        /*closed=*/false, &meter);
        }
        std::vector<Index> vset;
        for (Index p : vprime)
            if (!covered.count(p)) vset.push_back(p);
        if (vset.empty()) continue;

        std::vector<FlatPair> pairs;
        std::set<FlatPair> seen;
        for (Index u : vset) {
            for (const FlatPair& fp : flat_pairs(cloud, u, fine_net, fine_net, eps_fine,
                                                 0, params.flatness, meter)) {
                if (seen.insert(fp).second) pairs.push_back(fp);
            }
        }

        std::vector<Index> aux_vertices = vprime;
        for (const FlatPair& fp : pairs) {
            aux_vertices.push_back(fp.a);
            aux_vertices.push_back(fp.b);
        }
        ScaleGraph aux(std::move(aux_vertices));
        for (const FlatPair& fp : pairs) aux.add_edge(fp.a, fp.b, EdgeTag::E3);

        std::vector<GraphEdge> local;
        for (const FlatPair& fp : pairs) local.push_back(GraphEdge{fp.a, fp.b, EdgeTag::E3});
        const auto parts = components(aux);
        for (std::size_t i = 1; i < parts.size(); ++i) {
            const Index a = parts[0][0];
            const Index b = parts[i][0];
            local.push_back(GraphEdge{std::min(a, b), std::max(a, b), EdgeTag::E3});
        }

        for (const GraphEdge& e : local) {
            batch.edges.push_back(e);
            covered.insert(e.a);
            covered.insert(e.b);
        }
        batch.point_sets.push_back(std::move(vset));
    }
    return batch;
}

StepState assemble_step(const PointCloud& cloud, const StepState& state,
                        Families fine_families, std::optional<NetLevel> fine_lookahead,
                        const EdgeBatch& e1, const EdgeBatch& e2, const EdgeBatch& e3,
                        const SolverParams& params, DistanceMeter& meter, RunTrace& trace) {
    if (!state.lookahead) throw Error("assemble_step: no lookahead net (terminal state)");
    const NetLevel& fine = *state.lookahead;
    const std::string at_level = "level " + std::to_string(state.level + 1) + ": ";

    if (fine.net.size() <= state.current.net.size())
        throw Error(at_level + "refined net did not grow");

    auto violation = [&](const std::string& msg) {
        trace.deviations.push_back(at_level + msg);
        if (params.mode == SolveMode::Strict)
            throw PipelineError(at_level + msg, trace);
    };

    ScaleGraph g(fine.net);
    std::size_t c1 = 0, c2 = 0, c3 = 0;
    for (const GraphEdge& e : e1.edges) {
        if (g.add_edge(e.a, e.b, EdgeTag::E1)) ++c1;
    }
    for (const GraphEdge& e : e2.edges) {
        if (g.add_edge(e.a, e.b, EdgeTag::E2)) {
            ++c2;
        } else {
            violation("edge sources overlap on {" + std::to_string(e.a) + "," +
                      std::to_string(e.b) + "}");
        }
    }
    for (const GraphEdge& e : e3.edges) {
        if (g.add_edge(e.a, e.b, EdgeTag::E3)) {
            ++c3;
        } else {
            violation("edge sources overlap on {" + std::to_string(e.a) + "," +
                      std::to_string(e.b) + "}");
        }
    }

    // The new-point sets consumed by subdivisions, chains and stars must be
    // pairwise disjoint.
    {
        std::unordered_set<Index> seen;
        for (const auto* batch : {&e1, &e2, &e3}) {
            for (const auto& set : batch->point_sets) {
                for (Index p : set) {
                    if (!seen.insert(p).second)
                        violation("new-point sets overlap at vertex " + std::to_string(p));
                }
            }
        }
    }

    const std::size_t grown = fine.net.size() - state.current.net.size();
    const std::size_t total = g.edges().size();
    const bool tight = total <= state.current.net.size() + 2 * grown;
    const bool outer = total <= 2 * fine.net.size();
    if (!tight || !outer)
        violation("edge budget exceeded: " + std::to_string(total) + " edges on " +
                  std::to_string(fine.net.size()) + " vertices");

    std::size_t repairs = 0;
    auto parts = components(g);
    if (parts.size() > 1) {
        if (params.mode == SolveMode::Strict) {
            violation("graph disconnected (" + std::to_string(parts.size()) +
                      " components)");
        }
        PhaseScope scope(meter, Phase::EdgeAssembly);
        while (parts.size() > 1) {
            double best = std::numeric_limits<double>::infinity();
            Index ba = 0, bb = 0;
            for (std::size_t i = 0; i < parts.size(); ++i) {
                for (std::size_t j = i + 1; j < parts.size(); ++j) {
                    for (Index a : parts[i]) {
                        for (Index b : parts[j]) {
                            const double d = distance(cloud[a], cloud[b], meter);
                            const Index lo = std::min(a, b), hi = std::max(a, b);
                            if (d < best ||
                                (d == best && std::tie(lo, hi) < std::tie(ba, bb))) {
                                best = d;
                                ba = lo;
                                bb = hi;
                            }
                        }
                    }
                }
            }
            g.add_edge(ba, bb, EdgeTag::Repair);
            ++repairs;
            trace.deviations.push_back(at_level + "connectivity repair: added {" +
                                       std::to_string(ba) + "," + std::to_string(bb) +
                                       "}");
            parts = components(g);
        }
    }

    StepRecord rec;
    rec.level = state.level + 1;
    rec.exponent = fine.exponent;
    rec.net_size = fine.net.size();
    rec.residual_size = fine.residual.size();
    rec.e1 = c1;
    rec.e2 = c2;
    rec.e3 = c3;
    rec.repair = repairs;
    rec.edges_total = g.edges().size();
    rec.flat_count = fine_families.flat.size();
    rec.nonflat_count = fine_families.nonflat.size();
    rec.alpha_max = fine_families.alpha_max;
    rec.budget_tight_ok = tight;
    rec.meter_cum = meter_snapshot(meter);
    trace.steps.push_back(rec);

    StepState next;
    next.level = state.level + 1;
    next.current = fine;
    next.lookahead = std::move(fine_lookahead);
    next.flat_family = std::move(fine_families.flat);
    next.nonflat_family = std::move(fine_families.nonflat);
    next.graph = std::move(g);
    return next;
}

StepState step_one(const PointCloud& cloud, const SolverParams& params,
                   DistanceMeter& meter, RunTrace& trace) {
    if (cloud.size() == 0) throw Error("step_one: empty cloud");

    StepState st;
    st.level = 1;
    st.current.exponent = 1;
    st.current.net = {0};
    for (std::size_t i = 1; i < cloud.size(); ++i)
        st.current.residual.push_back(static_cast<Index>(i));
    st.graph = ScaleGraph({0});

    Families fam;
    if (!st.current.residual.empty()) {
        {
            WallTimer t(wall_slot(trace, Phase::NetRefinement));
            RefineResult r =
                refine_net(cloud, st.current, dyadic_scale(cloud.r0, 1), meter);
            st.lookahead = std::move(r.level);
        }
        {
            WallTimer t(wall_slot(trace, Phase::Flatness));
            fam = classify_vertices(cloud, st.current.net, st.lookahead->net,
                                    dyadic_scale(cloud.r0, st.lookahead->exponent), params,
                                    meter);
        }
        st.flat_family = fam.flat;
        st.nonflat_family = fam.nonflat;
    }

    StepRecord rec;
    rec.level = 1;
    rec.exponent = 1;
    rec.net_size = 1;
    rec.residual_size = st.current.residual.size();
    rec.flat_count = fam.flat.size();
    rec.nonflat_count = fam.nonflat.size();
    rec.alpha_max = fam.alpha_max;
    rec.meter_cum = meter_snapshot(meter);
    trace.steps.push_back(rec);
    return st;
}

StepState advance_step(const PointCloud& cloud, const StepState& state,
                       const SolverParams& params, DistanceMeter& meter, RunTrace& trace) {
    if (!state.lookahead) throw Error("advance_step: terminal state");
    const NetLevel& fine = *state.lookahead;

    std::optional<NetLevel> look2;
    Families fam;
    if (!fine.residual.empty()) {
        {
            WallTimer t(wall_slot(trace, Phase::NetRefinement));
            RefineResult r =
                refine_net(cloud, fine, dyadic_scale(cloud.r0, fine.exponent), meter);
            look2 = std::move(r.level);
        }
        {
            WallTimer t(wall_slot(trace, Phase::Flatness));
            fam = classify_vertices(cloud, fine.net, look2->net,
                                    dyadic_scale(cloud.r0, look2->exponent), params, meter);
        }
    }

    WallTimer t(wall_slot(trace, Phase::EdgeAssembly));
    EdgeBatch e1 =
        edges_from_old(cloud, state.graph, fine.net, fine.exponent, params, meter);
    EdgeBatch e2 = edges_from_flat(cloud, state.flat_family, state.current.net, fine.net,
                                   fine.exponent, params, meter);
    EdgeBatch e3 = edges_from_nonflat(cloud, state.nonflat_family, state.current.net,
                                      fine.net, fine.exponent, e1, e2, params, meter);
    return assemble_step(cloud, state, std::move(fam), std::move(look2), e1, e2, e3,
                         params, meter, trace);
}

Solution solve(const PointCloud& cloud, const SolverParams& params) {
    DistanceMeter meter;
    RunTrace trace;
    trace.metadata.push_back("flat_pair_family finer_net_annulus_gap0");
    trace.metadata.push_back("e2_chain_source finer_net");
    if (params.flatness.backend == FlatnessBackend::Grid) {
        if (auto warn = grid_profile_warning(params.flatness, cloud.dimension))
            trace.metadata.push_back("warning " + *warn);
    }

    StepState st = step_one(cloud, params, meter, trace);
    while (st.lookahead) st = advance_step(cloud, st, params, meter, trace);

    Solution sol;
    {
        WallTimer t(wall_slot(trace, Phase::Tour));
        sol.tour = two_to_one_tour(st.graph, 0);
        PhaseScope scope(meter, Phase::Tour);
        sol.tour_length = tour_length(sol.tour, cloud, &meter);
    }
    sol.mst_length = mst_length(cloud);
    if (sol.mst_length > 0.0) sol.ratio_tour_mst = sol.tour_length / sol.mst_length;
    sol.graph = std::move(st.graph);
    sol.trace = std::move(trace);
    sol.meter = meter;
    return sol;
}

} // namespace atsp
