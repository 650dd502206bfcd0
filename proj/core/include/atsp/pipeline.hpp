#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atsp/flatness.hpp"
#include "atsp/graph.hpp"
#include "atsp/meter.hpp"
#include "atsp/nets.hpp"

namespace atsp {

enum class SolveMode { Strict, Lenient };

struct SolverParams {
    FlatnessParams flatness;
    SolveMode mode = SolveMode::Strict;
};

/// One line of the per-level trace. Families and alpha_max describe the
/// classification performed while producing this level (zero when skipped).
struct StepRecord {
    int level = 0;
    int exponent = 0;
    std::size_t net_size = 0;
    std::size_t residual_size = 0;
    std::size_t e1 = 0, e2 = 0, e3 = 0, repair = 0;
    std::size_t edges_total = 0;
    std::size_t flat_count = 0, nonflat_count = 0;
    double alpha_max = 0.0;
    /// |E_{k+1}| <= |V_k| + 2 |V_{k+1} \ V_k| (the tight step budget).
    bool budget_tight_ok = true;
    std::array<std::uint64_t, kPhaseCount> meter_cum{};
};

struct RunTrace {
    std::vector<StepRecord> steps;
    /// Lenient-mode repairs and any invariant violations; empty on a clean run.
    std::vector<std::string> deviations;
    /// Resolved construction choices that are not obvious from parameters.
    std::vector<std::string> metadata;
    std::array<double, kPhaseCount> wall_ms{};
};

/// Strict-mode invariant violation; carries the trace gathered so far.
class PipelineError : public Error {
public:
    PipelineError(const std::string& what, RunTrace trace)
        : Error(what), trace_(std::move(trace)) {}
    const RunTrace& trace() const { return trace_; }

private:
    RunTrace trace_;
};

/// State after step k: the level-k net, the already-refined lookahead net
/// (absent exactly when the level-k residual is empty and the run is
/// terminal), the families of flat and non-flat vertices of V_k, and G_k.
struct StepState {
    int level = 1;
    NetLevel current;
    std::optional<NetLevel> lookahead;
    std::vector<Index> flat_family;
    std::vector<Index> nonflat_family;
    ScaleGraph graph;
};

struct Families {
    std::vector<Index> flat;
    std::vector<Index> nonflat;
    double alpha_max = 0.0;
};

/// Edges produced by one source plus the new-point sets V_{k+1}(.) they
/// consumed (used for coverage exclusion and disjointness checks).
struct EdgeBatch {
    std::vector<GraphEdge> edges;
    std::vector<std::vector<Index>> point_sets;
};

/// Splits `net` by flatness against the finer net at the finer scale:
/// alpha <= threshold goes to flat, otherwise non-flat.
Families classify_vertices(const PointCloud& cloud, const std::vector<Index>& net,
                           const std::vector<Index>& finer_net, double finer_scale,
                           const SolverParams& params, DistanceMeter& meter);

/// Edges inherited from E_k: long or doubly-non-flat edges pass through;
/// the rest are subdivided along the flat endpoint's line by the new net
/// points projecting strictly between the endpoints.
EdgeBatch edges_from_old(const PointCloud& cloud, const ScaleGraph& coarse_graph,
                         const std::vector<Index>& fine_net, int fine_exponent,
                         const SolverParams& params, DistanceMeter& meter);

/// Chains of new net points grown from flat vertices whose coarse
/// neighborhood is one-sided along the flatness line.
EdgeBatch edges_from_flat(const PointCloud& cloud, const std::vector<Index>& flat_family,
                          const std::vector<Index>& coarse_net,
                          const std::vector<Index>& fine_net, int fine_exponent,
                          const SolverParams& params, DistanceMeter& meter);

/// Around each non-flat vertex in order: flat pairs of the not-yet-covered
/// new points, plus a star joining the components of the auxiliary graph.
EdgeBatch edges_from_nonflat(const PointCloud& cloud,
                             const std::vector<Index>& nonflat_family,
                             const std::vector<Index>& coarse_net,
                             const std::vector<Index>& fine_net, int fine_exponent,
                             const EdgeBatch& e1, const EdgeBatch& e2,
                             const SolverParams& params, DistanceMeter& meter);

/// Unions the three sources into G_{k+1}, enforcing source disjointness,
/// the edge budget and connectivity (strict: throw; lenient: bridge the
/// components by shortest inter-component pairs and log every repair).
StepState assemble_step(const PointCloud& cloud, const StepState& state,
                        Families fine_families, std::optional<NetLevel> fine_lookahead,
                        const EdgeBatch& e1, const EdgeBatch& e2, const EdgeBatch& e3,
                        const SolverParams& params, DistanceMeter& meter, RunTrace& trace);

/// Level 1: V_1 = {first point}, E_1 empty; refines the lookahead net and
/// classifies the single vertex unless the cloud is a single point.
StepState step_one(const PointCloud& cloud, const SolverParams& params,
                   DistanceMeter& meter, RunTrace& trace);

/// One full inductive step from level k to level k+1.
StepState advance_step(const PointCloud& cloud, const StepState& state,
                       const SolverParams& params, DistanceMeter& meter, RunTrace& trace);

struct Solution {
    ScaleGraph graph;
    TwoToOneTour tour;
    double tour_length = 0.0;
    double mst_length = 0.0;
    /// tour_length / mst_length; absent for single-point inputs.
    std::optional<double> ratio_tour_mst;
    RunTrace trace;
    DistanceMeter meter;
};

/// Runs the whole construction and parameterizes the final graph as a
/// two-to-one tour from the first input point.
Solution solve(const PointCloud& cloud, const SolverParams& params);

} // namespace atsp
