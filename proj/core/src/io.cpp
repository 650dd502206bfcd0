#include "atsp/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "atsp/errors.hpp"
#include "atsp/flatness.hpp"

namespace atsp {

std::string format_double(double value) {
    std::array<char, 64> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) throw Error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

PointCloud read_cloud(std::istream& in, const std::string& name) {
    std::vector<Point> pts;
    std::string line;
    int dim = 0;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;

        std::vector<double> coords;
        const char* p = line.data() + start;
        const char* end = line.data() + line.size();
        while (p < end) {
            while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
            if (p >= end) break;
            double v = 0.0;
            auto [next, ec] = std::from_chars(p, end, v);
            if (ec != std::errc() || (next < end && *next != ' ' && *next != '\t' &&
                                      *next != '\r')) {
                throw Error(name + ": line " + std::to_string(lineno) +
                            ": malformed coordinate");
            }
            coords.push_back(v);
            p = next;
        }
        if (coords.empty()) continue;
        if (dim == 0) {
            dim = static_cast<int>(coords.size());
        } else if (static_cast<int>(coords.size()) != dim) {
            throw Error(name + ": line " + std::to_string(lineno) + ": expected " +
                        std::to_string(dim) + " coordinates, got " +
                        std::to_string(coords.size()));
        }
        Point pt(dim);
        for (int i = 0; i < dim; ++i) pt[i] = coords[static_cast<std::size_t>(i)];
        pts.push_back(std::move(pt));
    }
    if (pts.empty()) throw Error(name + ": no points found");
    return make_cloud(std::move(pts));
}

PointCloud read_cloud_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open input file: " + path);
    return read_cloud(in, path);
}

std::string render_metrics(const PointCloud& cloud, const Solution& solution,
                           const SolverParams& params) {
    std::ostringstream out;
    out << "atsp_metrics_version 1\n";
    out << "dimension " << cloud.dimension << "\n";
    out << "points " << cloud.size() << "\n";
    out << "duplicates_dropped " << cloud.duplicates_dropped << "\n";
    out << "r0 " << format_double(cloud.r0) << "\n";
    out << "c0 " << format_double(params.flatness.c0) << "\n";
    out << "backend "
        << (params.flatness.backend == FlatnessBackend::Grid ? "grid" : "width") << "\n";
    if (params.flatness.grid_l > 0) {
        out << "grid_l " << params.flatness.grid_l << "\n";
    } else {
        out << "grid_l auto\n";
    }
    out << "threshold " << format_double(params.flatness.flat_threshold) << "\n";
    out << "mode " << (params.mode == SolveMode::Strict ? "strict" : "lenient") << "\n";
    out << "levels " << solution.trace.steps.size() << "\n";
    for (const StepRecord& s : solution.trace.steps) {
        out << "level k=" << s.level << " n=" << s.exponent << " net=" << s.net_size
            << " residual=" << s.residual_size << " e1=" << s.e1 << " e2=" << s.e2
            << " e3=" << s.e3 << " repair=" << s.repair << " edges=" << s.edges_total
            << " flat=" << s.flat_count << " nonflat=" << s.nonflat_count
            << " alpha_max=" << format_double(s.alpha_max)
            << " budget_tight=" << (s.budget_tight_ok ? 1 : 0) << "\n";
    }
    out << "tour_vertices " << solution.tour.sequence.size() << "\n";
    out << "tour_length " << format_double(solution.tour_length) << "\n";
    out << "mst_length " << format_double(solution.mst_length) << "\n";
    if (solution.ratio_tour_mst) {
        out << "ratio_tour_mst " << format_double(*solution.ratio_tour_mst) << "\n";
    } else {
        out << "ratio_tour_mst na\n";
    }
    out << "meter_net_refinement " << solution.meter.count(Phase::NetRefinement) << "\n";
    out << "meter_flatness " << solution.meter.count(Phase::Flatness) << "\n";
    out << "meter_edge_assembly " << solution.meter.count(Phase::EdgeAssembly) << "\n";
    out << "meter_tour " << solution.meter.count(Phase::Tour) << "\n";
    out << "meter_total " << solution.meter.total() << "\n";
    out << "deviations " << solution.trace.deviations.size() << "\n";
    for (const std::string& d : solution.trace.deviations) out << "deviation " << d << "\n";
    for (const std::string& m : solution.trace.metadata) out << "note " << m << "\n";
    return out.str();
}

std::string render_tour(const TwoToOneTour& tour) {
    std::ostringstream out;
    for (Index i : tour.sequence) out << i << "\n";
    return out.str();
}

std::string render_svg(const PointCloud& cloud, const TwoToOneTour& tour) {
    if (cloud.dimension != 2) throw Error("render_svg: only 2-D clouds");
    double xmin = cloud[0][0], xmax = xmin, ymin = cloud[0][1], ymax = ymin;
    for (const Point& p : cloud.points) {
        xmin = std::min(xmin, p[0]);
        xmax = std::max(xmax, p[0]);
        ymin = std::min(ymin, p[1]);
        ymax = std::max(ymax, p[1]);
    }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
    const double pad = 0.05 * span;
    const double scale = 800.0 / (span + 2.0 * pad);
    auto sx = [&](double x) { return (x - xmin + pad) * scale; };
    auto sy = [&](double y) { return 800.0 - (y - ymin + pad) * scale; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
           "viewBox=\"0 0 800 800\">\n";
    out << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
    if (tour.sequence.size() > 1) {
        out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < tour.sequence.size(); ++i) {
            const Point& p = cloud[tour.sequence[i]];
            if (i) out << " ";
            out << format_double(sx(p[0])) << "," << format_double(sy(p[1]));
        }
        out << "\"/>\n";
    }
    for (const Point& p : cloud.points) {
        out << "<circle cx=\"" << format_double(sx(p[0])) << "\" cy=\""
            << format_double(sy(p[1])) << "\" r=\"3\" fill=\"#d62728\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << content;
    if (!out) throw Error("failed writing output file: " + path);
}

} // namespace atsp
