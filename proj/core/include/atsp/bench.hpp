#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "atsp/meter.hpp"
#include "atsp/pipeline.hpp"

namespace atsp {

enum class BenchFamily { Sharpness, UniformRandom };

struct BenchRecord {
    std::size_t n = 0;
    std::array<std::uint64_t, kPhaseCount> meter{};
    std::uint64_t meter_total = 0;
    double wall_ms = 0.0;
    double tour_length = 0.0;
};

struct BenchSweep {
    BenchFamily family = BenchFamily::Sharpness;
    std::vector<BenchRecord> records; // strictly increasing n
    /// Least-squares slope of log(net-refinement meter) against log(n).
    double slope = 0.0;
};

double fit_loglog_slope(const std::vector<double>& ns, const std::vector<double>& meters);

/// Solves each size and fits the complexity exponent. Sizes are sorted and
/// deduplicated; fewer than 3 is an error. Sharpness sizes must be
/// multiples of 4, at least 8. Uniform-random instances are 2-D and seeded.
BenchSweep run_bench(std::vector<std::size_t> sizes, BenchFamily family,
                     std::uint64_t seed, const SolverParams& params);

} // namespace atsp
