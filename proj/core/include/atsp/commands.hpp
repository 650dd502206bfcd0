#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "atsp/pipeline.hpp"

namespace atsp {

/// Everything a CLI invocation needs. The seed fixes all generator
/// randomness; identical configs give identical output files.
struct RunConfig {
    std::string input_path;
    std::string output_prefix; // empty: metrics go to stdout, no files
    bool svg = false;
    SolverParams params;
    std::uint64_t seed = 0;
    int sharpness_n = 0;
    std::vector<std::size_t> bench_sizes;
    std::string bench_family = "sharpness"; // or "uniform-random"
};

/// Solve an instance from a file; write tour/metrics (and SVG for 2-D).
int solve_command(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Generate and solve the cubic-cost family; verify the n^3/32 meter bound.
int sharpness_command(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Sweep sizes, fit the log-log complexity exponent; asserts the exponent
/// lies in [2.8, 3.2] for the sharpness family.
int bench_command(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Table of tour lengths and ratios against nearest insertion, the MST and
/// (for n <= 10) the exact optimum.
int compare_command(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace atsp
