#include "atsp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "atsp/errors.hpp"
#include "atsp/generators.hpp"

namespace atsp {

double fit_loglog_slope(const std::vector<double>& ns, const std::vector<double>& meters) {
    if (ns.size() != meters.size() || ns.size() < 2)
        throw Error("fit_loglog_slope: need at least 2 samples");
    std::vector<double> xs(ns.size()), ys(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (ns[i] <= 0.0 || meters[i] <= 0.0)
            throw Error("fit_loglog_slope: samples must be positive");
        xs[i] = std::log(ns[i]);
        ys[i] = std::log(meters[i]);
    }
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xbar += xs[i];
        ybar += ys[i];
    }
    xbar /= static_cast<double>(xs.size());
    ybar /= static_cast<double>(xs.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - xbar) * (ys[i] - ybar);
        den += (xs[i] - xbar) * (xs[i] - xbar);
    }
    if (den == 0.0) throw Error("fit_loglog_slope: degenerate sample sizes");
    return num / den;
}

BenchSweep run_bench(std::vector<std::size_t> sizes, BenchFamily family,
                     std::uint64_t seed, const SolverParams& params) {
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    if (sizes.size() < 3) throw Error("run_bench: need at least 3 distinct sizes");

    BenchSweep sweep;
    sweep.family = family;
    for (std::size_t n : sizes) {
        PointCloud cloud;
        if (family == BenchFamily::Sharpness) {
            if (n < 8 || n % 4 != 0)
                throw Error("run_bench: sharpness sizes must be multiples of 4, n >= 8");
            cloud = sharpness_family(static_cast<int>(n));
        } else {
            cloud = uniform_random_cloud(n, 2, seed + n);
        }
        const auto start = std::chrono::steady_clock::now();
        Solution sol = solve(cloud, params);
        const auto stop = std::chrono::steady_clock::now();

        BenchRecord rec;
        rec.n = n;
        rec.meter = sol.meter.by_phase;
        rec.meter_total = sol.meter.total();
        rec.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        rec.tour_length = sol.tour_length;
        sweep.records.push_back(rec);
    }

    std::vector<double> ns, meters;
    for (const BenchRecord& r : sweep.records) {
        ns.push_back(static_cast<double>(r.n));
        meters.push_back(
            static_cast<double>(r.meter[static_cast<int>(Phase::NetRefinement)]));
    }
    sweep.slope = fit_loglog_slope(ns, meters);
    return sweep;
}

} // namespace atsp
