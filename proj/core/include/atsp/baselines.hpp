#pragma once

#include <optional>
#include <vector>

#include "atsp/geometry.hpp"

namespace atsp {

/// Total length of a Euclidean minimum spanning tree (dense Prim).
double mst_length(const PointCloud& cloud);

struct InsertionTour {
    std::vector<Index> cycle; // closed: first == last for n >= 2
    double length = 0.0;
};

/// Classic nearest-insertion cycle; ties broken by smallest index, then
/// earliest insertion position.
InsertionTour nearest_insertion_tour(const PointCloud& cloud, Index start = 0);

/// Exact shortest closed tour. Permutation search below 8 points,
/// Held-Karp for 8..10. Throws for n outside [2, 10].
double optimal_cycle_length(const PointCloud& cloud);

struct BaselineReport {
    double mst = 0.0;
    double nearest_insertion = 0.0;
    std::optional<double> optimal; // present iff n <= 10
    double atsp_tour = 0.0;
};

} // namespace atsp
