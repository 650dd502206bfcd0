#pragma once

#include <cstdint>

#include "atsp/geometry.hpp"

namespace atsp {

/// The 1-D family {0, 1, 2^-1, ..., 2^(2-n)} with 0 first, which forces one
/// net insertion per refinement and cubic pair-evaluation cost.
/// Requires n >= 2.
PointCloud sharpness_family(int n);

/// n points uniform in [0,1]^dim from a fixed bit-level-deterministic
/// generator: identical seeds give identical clouds on every platform.
PointCloud uniform_random_cloud(std::size_t n, int dim, std::uint64_t seed);

} // namespace atsp
