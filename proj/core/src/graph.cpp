#include "atsp/graph.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "atsp/errors.hpp"

namespace atsp {

ScaleGraph::ScaleGraph(std::vector<Index> vertices) : vertices_(std::move(vertices)) {
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
}

std::uint64_t ScaleGraph::key(Index a, Index b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

bool ScaleGraph::has_vertex(Index v) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

bool ScaleGraph::has_edge(Index a, Index b) const {
    return edge_keys_.count(key(a, b)) != 0;
}

bool ScaleGraph::add_edge(Index a, Index b, EdgeTag tag) {
    if (a == b) throw Error("ScaleGraph: self-loop rejected");
    if (!has_vertex(a) || !has_vertex(b)) throw Error("ScaleGraph: edge endpoint not a vertex");
    if (a > b) std::swap(a, b);
    if (!edge_keys_.insert(key(a, b)).second) return false;
    edges_.push_back(GraphEdge{a, b, tag});
    return true;
}

std::vector<std::vector<Index>> components(const ScaleGraph& g) {
    std::unordered_map<Index, std::vector<Index>> adj;
    for (Index v : g.vertices()) adj[v];
    for (const GraphEdge& e : g.edges()) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }

    std::unordered_set<Index> seen;
    std::vector<std::vector<Index>> parts;
    for (Index start : g.vertices()) {
        if (seen.count(start)) continue;
        std::vector<Index> part;
        std::deque<Index> queue{start};
        seen.insert(start);
        while (!queue.empty()) {
            Index v = queue.front();
            queue.pop_front();
            part.push_back(v);
            for (Index w : adj[v]) {
                if (seen.insert(w).second) queue.push_back(w);
            }
        }
        std::sort(part.begin(), part.end());
        parts.push_back(std::move(part));
    }
    return parts;
}

TwoToOneTour two_to_one_tour(const ScaleGraph& g, Index v0) {
    if (!g.has_vertex(v0)) throw Error("two_to_one_tour: start vertex not in graph");

    const auto& edges = g.edges();
    std::vector<bool> used(edges.size(), false);
    std::vector<Index> walk{v0};
    std::unordered_set<Index> on_walk{v0};

    for (std::size_t step = 0; step < edges.size(); ++step) {
        std::size_t pick = edges.size();
        Index attach = 0, incoming = 0;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (used[i]) continue;
            if (on_walk.count(edges[i].a)) {
                pick = i;
                attach = edges[i].a;
                incoming = edges[i].b;
                break;
            }
            if (on_walk.count(edges[i].b)) {
                pick = i;
                attach = edges[i].b;
                incoming = edges[i].a;
                break;
            }
        }
        if (pick == edges.size())
            throw Error("two_to_one_tour: graph is disconnected");
        used[pick] = true;

        auto pos = std::find(walk.begin(), walk.end(), attach);
        // Splice "incoming, attach" right after the first occurrence.
        pos = walk.insert(pos + 1, attach);
        walk.insert(pos, incoming);
        on_walk.insert(incoming);
    }

    // Every vertex must appear; with all edges traversed this only fails
    // for isolated vertices, which make the graph disconnected.
    for (Index v : g.vertices()) {
        if (!on_walk.count(v)) throw Error("two_to_one_tour: graph is disconnected");
    }
    return TwoToOneTour{std::move(walk)};
}

double tour_length(const TwoToOneTour& tour, const PointCloud& cloud, DistanceMeter* meter) {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < tour.sequence.size(); ++i) {
        const Point& a = cloud[tour.sequence[i]];
        const Point& b = cloud[tour.sequence[i + 1]];
        len += meter ? distance(a, b, *meter) : distance(a, b);
    }
    return len;
}

} // namespace atsp
