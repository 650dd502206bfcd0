#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "atsp/geometry.hpp"
#include "atsp/meter.hpp"

namespace atsp {

/// Which construction produced an edge. Repair edges only appear in
/// lenient mode and are always logged as deviations.
enum class EdgeTag : std::uint8_t { E1, E2, E3, Repair };

struct GraphEdge {
    Index a = 0; // a < b
    Index b = 0;
    EdgeTag tag = EdgeTag::E1;
};

inline bool operator==(const GraphEdge& x, const GraphEdge& y) {
    return x.a == y.a && x.b == y.b;
}

/// Combinatorial graph over cloud indices. Edges keep insertion order;
/// the tour construction scans them in that order. No self-loops, no
/// duplicates (the tag of the first insertion wins).
class ScaleGraph {
public:
    ScaleGraph() = default;
    explicit ScaleGraph(std::vector<Index> vertices);

    const std::vector<Index>& vertices() const { return vertices_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }

    bool has_vertex(Index v) const;
    bool has_edge(Index a, Index b) const;

    /// Returns false (and adds nothing) for a duplicate edge.
    /// Throws for self-loops or endpoints outside the vertex set.
    bool add_edge(Index a, Index b, EdgeTag tag);

private:
    static std::uint64_t key(Index a, Index b);

    std::vector<Index> vertices_; // sorted ascending
    std::vector<GraphEdge> edges_;
    std::unordered_set<std::uint64_t> edge_keys_;
};

/// Partition into connected components, breadth-first. Components are
/// ordered by smallest vertex; vertices inside a component are sorted.
std::vector<std::vector<Index>> components(const ScaleGraph& g);

/// Closed walk a_1 ... a_{2M+1} traversing every edge exactly twice,
/// once per direction, with a_1 = a_{2M+1} = v0 and all vertices visited.
struct TwoToOneTour {
    std::vector<Index> sequence;
};

/// Splice construction: start from [v0]; repeatedly take the first unused
/// edge (insertion order) with an endpoint already on the walk and splice
/// "w, a_j" right after the first occurrence of that endpoint.
/// Throws if g is disconnected or v0 is not a vertex.
TwoToOneTour two_to_one_tour(const ScaleGraph& g, Index v0);

/// Length of the walk; equals twice the sum of edge lengths.
double tour_length(const TwoToOneTour& tour, const PointCloud& cloud,
                   DistanceMeter* meter = nullptr);

} // namespace atsp
