#pragma once

#include <iosfwd>
#include <string>

#include "atsp/geometry.hpp"
#include "atsp/graph.hpp"
#include "atsp/pipeline.hpp"

namespace atsp {

/// Shortest round-trip decimal representation of a double.
std::string format_double(double value);

/// Reads a point cloud: one point per line, whitespace-separated decimal
/// coordinates, dimension inferred from the first data line, '#' lines and
/// blank lines ignored. Errors carry 1-based line numbers. Exact duplicate
/// points are dropped and counted on the returned cloud.
PointCloud read_cloud(std::istream& in, const std::string& name);
PointCloud read_cloud_file(const std::string& path);

/// Metrics document: stable key order, one "key value" pair or one level
/// record per line. Wall-clock never appears here, so equal runs produce
/// equal bytes.
std::string render_metrics(const PointCloud& cloud, const Solution& solution,
                           const SolverParams& params);

/// Tour as an ordered index list, one index per line.
std::string render_tour(const TwoToOneTour& tour);

/// SVG polyline of a 2-D tour over its points. A pure view of the solution.
std::string render_svg(const PointCloud& cloud, const TwoToOneTour& tour);

void write_file(const std::string& path, const std::string& content);

} // namespace atsp
