#include "atsp/generators.hpp"

#include <cmath>
#include <random>

#include "atsp/errors.hpp"

namespace atsp {

PointCloud sharpness_family(int n) {
    if (n < 2) throw Error("sharpness_family: n must be at least 2");
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    Point zero(1);
    zero[0] = 0.0;
    pts.push_back(zero);
    for (int j = 0; j <= n - 2; ++j) {
        Point p(1);
        p[0] = std::ldexp(1.0, -j); // 1, 1/2, ..., 2^(2-n)
        pts.push_back(p);
    }
    return make_cloud(std::move(pts));
}

PointCloud uniform_random_cloud(std::size_t n, int dim, std::uint64_t seed) {
    if (n == 0) throw Error("uniform_random_cloud: n must be positive");
    if (dim < 1) throw Error("uniform_random_cloud: dimension must be >= 1");
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<Point> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Point p(dim);
        for (int d = 0; d < dim; ++d) p[d] = unit();
        pts.push_back(p);
    }
    return make_cloud(std::move(pts));
}

} // namespace atsp
