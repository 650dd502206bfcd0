#include "atsp/flatness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "atsp/errors.hpp"

namespace atsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Point unit_axis(int dim) {
    Point e = Point::Zero(dim);
    e[0] = 1.0;
    return e;
}

/// Flip so the first nonzero coordinate is positive.
Point canonical_direction(Point d) {
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (d[i] > 0.0) return d;
        if (d[i] < 0.0) return -d;
    }
    throw Error("canonical_direction: zero vector");
}

// ---------------------------------------------------------------------------
// Grid backend, N = 2: exact sweep over primitive directions.
//
// A grid line is a primitive integer direction (dx, dy) plus an integer
// offset o; the line is {z : dx*z_y - dy*z_x = o}. For a fixed direction the
// objective is V-shaped in the offset, so only the achievable offsets
// nearest the optimum (one per side) can win. This visits every line
// through two grid points exactly once and is exact, unlike subsampling.
// ---------------------------------------------------------------------------

struct GridPairZ {
    std::array<long long, 2> z1{};
    std::array<long long, 2> z2{};

    bool operator<(const GridPairZ& o) const {
        return std::tie(z1[0], z1[1], z2[0], z2[1]) <
               std::tie(o.z1[0], o.z1[1], o.z2[0], o.z2[1]);
    }
};

long long floor_div(long long a, long long b) { // b > 0
    long long q = a / b, r = a % b;
    return (r != 0 && r < 0) ? q - 1 : q;
}

long long ceil_div(long long a, long long b) { // b > 0
    long long q = a / b, r = a % b;
    return (r != 0 && r > 0) ? q + 1 : q;
}

struct Egcd {
    long long g, s, t; // p*s + q*t = g
};

Egcd egcd(long long p, long long q) {
    if (q == 0) return {p, 1, 0};
    Egcd r = egcd(q, p % q);
    return {r.g, r.t, r.s - (p / q) * r.t};
}

/// Lexicographically smallest pair of grid points on the line
/// dx*y - dy*x = o inside {-2L..2L}^2. The line is known to contain at
/// least two grid points.
GridPairZ canonical_pair(long long dx, long long dy, long long o, long long twoL) {
    long long x0, y0;
    if (dx == 0) { // direction (0,1): -dy*x = o with dy = 1
        x0 = -o;
        y0 = 0;
    } else {
        Egcd e = egcd(dx, std::llabs(dy));
        // dx*y - dy*x = o solved by scaling Bezout coefficients.
        y0 = e.s * o;
        x0 = (dy >= 0 ? -e.t : e.t) * o;
    }
    // General solution: (x0 + m*dx, y0 + m*dy). Intersect with the box.
    long long mlo = std::numeric_limits<long long>::min();
    long long mhi = std::numeric_limits<long long>::max();
    if (dx > 0) {
        mlo = std::max(mlo, ceil_div(-twoL - x0, dx));
        mhi = std::min(mhi, floor_div(twoL - x0, dx));
    }
    if (dy > 0) {
        mlo = std::max(mlo, ceil_div(-twoL - y0, dy));
        mhi = std::min(mhi, floor_div(twoL - y0, dy));
    } else if (dy < 0) {
        const long long dyp = -dy; // y = y0 - m*dyp
        mlo = std::max(mlo, ceil_div(y0 - twoL, dyp));
        mhi = std::min(mhi, floor_div(y0 + twoL, dyp));
    }
    if (mlo + 1 > mhi) throw Error("alpha_grid: internal offset solve failed");
    GridPairZ p;
    p.z1 = {x0 + mlo * dx, y0 + mlo * dy};
    p.z2 = {x0 + (mlo + 1) * dx, y0 + (mlo + 1) * dy};
    return p;
}

struct GridBest {
    double alpha = kInf;
    bool have = false;
    GridPairZ pair;
};

void consider_line(GridBest& best, double alpha, long long dx, long long dy, long long o,
                   long long twoL) {
    if (alpha > best.alpha) return;
    if (alpha < best.alpha) {
        best.alpha = alpha;
        best.pair = canonical_pair(dx, dy, o, twoL);
        best.have = true;
        return;
    }
    GridPairZ cand = canonical_pair(dx, dy, o, twoL);
    if (!best.have || cand < best.pair) {
        best.pair = cand;
        best.have = true;
    }
}

GridBest grid_sweep_2d(const Point& v, const std::vector<Point>& b, double h,
                       long long L) {
    const long long twoL = 2 * L;
    const long long maxd = 4 * L;

    // b in grid coordinates.
    std::vector<double> bx(b.size()), by(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
        bx[j] = (b[j][0] - v[0]) / h;
        by[j] = (b[j][1] - v[1]) / h;
    }

    GridBest best;
    std::vector<double> proj(b.size());
    for (long long dx = 0; dx <= maxd; ++dx) {
        const long long dy_lo = (dx == 0) ? 1 : -maxd;
        const long long dy_hi = (dx == 0) ? 1 : maxd;
        for (long long dy = dy_lo; dy <= dy_hi; ++dy) {
            if (std::gcd(dx, std::llabs(dy)) != 1) continue;

            const double r = std::sqrt(static_cast<double>(dx * dx + dy * dy));
            double pmin = kInf, pmax = -kInf;
            for (std::size_t j = 0; j < b.size(); ++j) {
                proj[j] = static_cast<double>(dx) * by[j] - static_cast<double>(dy) * bx[j];
                pmin = std::min(pmin, proj[j]);
                pmax = std::max(pmax, proj[j]);
            }
            const double t = 0.5 * (pmin + pmax);

            // Achievable offsets nearest t from below and above. z0 must
            // satisfy z0 and z0 + d both inside the box.
            const long long xlo = -twoL, xhi = twoL - dx;
            const long long ylo = -twoL + std::max<long long>(0, -dy);
            const long long yhi = twoL - std::max<long long>(0, dy);
            bool have_lo = false, have_hi = false;
            long long o_lo = 0, o_hi = 0;
            auto offer = [&](long long o) {
                if (static_cast<double>(o) <= t) {
                    if (!have_lo || o > o_lo) {
                        o_lo = o;
                        have_lo = true;
                    }
                } else {
                    if (!have_hi || o < o_hi) {
                        o_hi = o;
                        have_hi = true;
                    }
                }
            };
            for (long long x = xlo; x <= xhi; ++x) {
                if (dx == 0) {
                    offer(-dy * x);
                    continue;
                }
                const double yc = (t + static_cast<double>(dy) * static_cast<double>(x)) /
                                  static_cast<double>(dx);
                const long long yf = static_cast<long long>(std::floor(yc));
                for (long long y = yf - 1; y <= yf + 1; ++y) {
                    const long long yq = std::clamp(y, ylo, yhi);
                    offer(dx * yq - dy * x);
                }
            }

            const double norm = h / r; // grid offset units -> real distance
            auto eval = [&](long long o) {
                double m = 0.0;
                for (std::size_t j = 0; j < b.size(); ++j)
                    m = std::max(m, std::abs(proj[j] - static_cast<double>(o)));
                consider_line(best, m * norm, dx, dy, o, twoL);
            };
            if (have_lo) eval(o_lo);
            if (have_hi) eval(o_hi);
        }
    }
    return best;
}

// Odometer enumeration of {-2L..2L}^N in lexicographic order.
bool next_grid_point(std::vector<long long>& z, long long twoL) {
    for (int i = static_cast<int>(z.size()) - 1; i >= 0; --i) {
        if (z[i] < twoL) {
            ++z[i];
            for (std::size_t j = i + 1; j < z.size(); ++j) z[j] = -twoL;
            return true;
        }
    }
    return false;
}

} // namespace

int effective_grid_l(const FlatnessParams& params, int dimension) {
    if (params.grid_l > 0) return params.grid_l;
    if (dimension < 2) return 1;
    const double bound = 40.0 * params.c0 * std::sqrt(static_cast<double>(dimension - 1));
    return std::max(1, static_cast<int>(std::ceil(bound)));
}

double grid_pair_count(const FlatnessParams& params, int dimension) {
    const double side = 4.0 * effective_grid_l(params, dimension) + 1.0;
    const double g = std::pow(side, dimension);
    return 0.5 * g * (g - 1.0);
}

std::optional<std::string> grid_profile_warning(const FlatnessParams& params, int dimension) {
    if (dimension < 2) return std::nullopt;
    const double bound = 40.0 * params.c0 * std::sqrt(static_cast<double>(dimension - 1));
    const int l = effective_grid_l(params, dimension);
    if (static_cast<double>(l) >= bound) return std::nullopt;
    return "grid_l=" + std::to_string(l) + " is below the profile bound " +
           std::to_string(bound) + " (40*c0*sqrt(N-1)); the flatness comparison " +
           "guarantee does not apply";
}

OrientedFrame orient(const Line& line, const Point& origin) {
    if (!line_is_valid(line)) throw Error("orient: invalid line");
    const int dim = static_cast<int>(line.direction.size());
    Point d = canonical_direction(line.direction);
    Point w = d - unit_axis(dim);
    OrientedFrame frame;
    frame.translation = origin;
    const double wn = w.squaredNorm();
    if (wn == 0.0) {
        frame.rotation = Eigen::MatrixXd::Identity(dim, dim);
    } else {
        frame.rotation =
            Eigen::MatrixXd::Identity(dim, dim) - (2.0 / wn) * (w * w.transpose());
    }
    return frame;
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return a.size() < b.size();
}

std::vector<Point> neighborhood(const Point& v, const std::vector<Point>& x_prime,
                                double scale, double c0, DistanceMeter& meter) {
    if (scale <= 0.0) throw Error("neighborhood: scale must be positive");
    return ball_query(x_prime, v, c0 * scale, /*closed=*/false, &meter);
}

std::vector<Index> neighborhood_indices(const PointCloud& cloud,
                                        const std::vector<Index>& x_prime, Index v,
                                        double scale, double c0, DistanceMeter& meter) {
    if (scale <= 0.0) throw Error("neighborhood: scale must be positive");
    return ball_query_indices(cloud, x_prime, cloud[v], c0 * scale, /*closed=*/false,
                              &meter);
}

FlatnessResult alpha_grid(const Point& v, const std::vector<Point>& b, double scale,
                          const FlatnessParams& params) {
    if (b.empty()) throw Error("alpha_grid: empty neighborhood");
    const int dim = static_cast<int>(v.size());
    const long long L = effective_grid_l(params, dim);
    const double pairs = grid_pair_count(params, dim);
    if (pairs > params.grid_pair_budget) {
        throw GridInfeasibleError(
            "alpha_grid: " + std::to_string(pairs) + " grid pairs exceed the budget of " +
            std::to_string(params.grid_pair_budget) +
            "; use the width backend (--backend width) for these parameters");
    }

    const double h = params.c0 * scale / static_cast<double>(L);
    const long long twoL = 2 * L;
    FlatnessResult result;
    result.scale = scale;

    if (dim == 1) {
        // Every 1-D point lies on the only line there is; the minimizing
        // pair is the lexicographically smallest one.
        result.alpha = 0.0;
        result.grid_pair_a = {-twoL};
        result.grid_pair_b = {-twoL + 1};
        Point a(1), c(1);
        a[0] = h * static_cast<double>(-twoL) + v[0];
        c[0] = h * static_cast<double>(-twoL + 1) + v[0];
        result.line = line_through(a, c);
        return result;
    }

    if (dim == 2) {
        GridBest best = grid_sweep_2d(v, b, h, L);
        if (!best.have) throw Error("alpha_grid: sweep found no line");
        result.alpha = best.alpha / scale;
        result.grid_pair_a = {best.pair.z1[0], best.pair.z1[1]};
        result.grid_pair_b = {best.pair.z2[0], best.pair.z2[1]};
        Point a(2), c(2);
        for (int i = 0; i < 2; ++i) {
            a[i] = h * static_cast<double>(best.pair.z1[i]) + v[i];
            c[i] = h * static_cast<double>(best.pair.z2[i]) + v[i];
        }
        result.line = line_through(a, c);
        return result;
    }

    // N >= 3: enumerate grid point pairs in lexicographic order with an
    // early abort once a pair cannot beat the incumbent. Strict-improvement
    // updates keep the lexicographically smallest minimizer.
    std::vector<std::vector<long long>> zs;
    std::vector<long long> z(dim, -twoL);
    zs.push_back(z);
    while (next_grid_point(z, twoL)) zs.push_back(z);

    auto to_point = [&](const std::vector<long long>& g) {
        Point p(dim);
        for (int i = 0; i < dim; ++i) p[i] = h * static_cast<double>(g[i]) + v[i];
        return p;
    };

    double bestD = kInf;
    std::size_t bi = 0, bj = 0;
    bool have = false;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const Point pi = to_point(zs[i]);
        for (std::size_t j = i + 1; j < zs.size(); ++j) {
            const Point pj = to_point(zs[j]);
            const Line l = line_through(pi, pj);
            double maxD = 0.0;
            bool dead = false;
            for (const Point& p : b) {
                maxD = std::max(maxD, dist_point_to_line(p, l) / scale);
                if (maxD > bestD) {
                    dead = true;
                    break;
                }
            }
            if (!dead && (maxD < bestD || !have)) {
                bestD = maxD;
                bi = i;
                bj = j;
                have = true;
            }
        }
    }
    result.alpha = bestD;
    result.grid_pair_a = zs[bi];
    result.grid_pair_b = zs[bj];
    result.line = line_through(to_point(zs[bi]), to_point(zs[bj]));
    return result;
}

namespace {

// Monotone-chain convex hull; returns counterclockwise vertices without
// collinear interior points.
std::vector<Eigen::Vector2d> convex_hull(std::vector<Eigen::Vector2d> pts) {
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const auto& a, const auto& b) {
                              return a.x() == b.x() && a.y() == b.y();
                          }),
              pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;
    auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a,
                    const Eigen::Vector2d& b) {
        return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
    };
    std::vector<Eigen::Vector2d> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

} // namespace

FlatnessResult alpha_width(const Point& v, const std::vector<Point>& b, double scale) {
    if (b.empty()) throw Error("alpha_width: empty neighborhood");
    const int dim = static_cast<int>(v.size());
    FlatnessResult result;
    result.scale = scale;

    if (dim == 1) {
        result.alpha = 0.0;
        result.line = Line{v, unit_axis(1)};
        return result;
    }

    if (dim == 2) {
        std::vector<Eigen::Vector2d> pts;
        pts.reserve(b.size());
        for (const Point& p : b) pts.emplace_back(p[0], p[1]);
        std::vector<Eigen::Vector2d> hull = convex_hull(pts);

        if (hull.size() <= 2) {
            result.alpha = 0.0;
            if (hull.size() == 2) {
                Point a(2), c(2);
                a << hull[0].x(), hull[0].y();
                c << hull[1].x(), hull[1].y();
                result.line = line_through(a, c);
            } else {
                Point a(2);
                a << hull[0].x(), hull[0].y();
                result.line = Line{a, unit_axis(2)};
            }
            return result;
        }

        // Minimal strip: one side is flush with a hull edge.
        double best_width = kInf;
        std::size_t best_edge = 0;
        double best_mid = 0.0;
        for (std::size_t i = 0; i < hull.size(); ++i) {
            const Eigen::Vector2d p = hull[i];
            const Eigen::Vector2d q = hull[(i + 1) % hull.size()];
            Eigen::Vector2d dir = (q - p).normalized();
            const Eigen::Vector2d nrm(-dir.y(), dir.x());
            double smin = 0.0, smax = 0.0;
            for (const Eigen::Vector2d& hpt : hull) {
                const double s = nrm.dot(hpt - p);
                smin = std::min(smin, s);
                smax = std::max(smax, s);
            }
            const double width = smax - smin;
            if (width < best_width) {
                best_width = width;
                best_edge = i;
                best_mid = 0.5 * (smin + smax);
            }
        }
        const Eigen::Vector2d p = hull[best_edge];
        const Eigen::Vector2d q = hull[(best_edge + 1) % hull.size()];
        const Eigen::Vector2d dir = (q - p).normalized();
        const Eigen::Vector2d nrm(-dir.y(), dir.x());
        const Eigen::Vector2d anchor = p + best_mid * nrm;
        Point a(2), d(2);
        a << anchor.x(), anchor.y();
        d << dir.x(), dir.y();
        result.alpha = 0.5 * best_width / scale;
        result.line = Line{a, d};
        return result;
    }

    // N >= 3: candidate lines through every pair of neighborhood points,
    // then the principal axis through the centroid. Exact cylinder fitting
    // is deliberately out of scope; this surrogate only ever overestimates.
    double bestD = kInf;
    std::optional<Line> best_line;
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = i + 1; j < b.size(); ++j) {
            if ((b[i] - b[j]).norm() == 0.0) continue;
            const Line l = line_through(b[i], b[j]);
            double maxD = 0.0;
            for (const Point& p : b) {
                maxD = std::max(maxD, dist_point_to_line(p, l) / scale);
                if (maxD > bestD) break;
            }
            if (maxD < bestD) {
                bestD = maxD;
                best_line = l;
            }
        }
    }
    {
        Point mean = Point::Zero(dim);
        for (const Point& p : b) mean += p;
        mean /= static_cast<double>(b.size());
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
        for (const Point& p : b) {
            const Point u = p - mean;
            cov += u * u.transpose();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        Point axis = es.eigenvectors().col(dim - 1);
        if (axis.norm() > 0.0) {
            const Line l{mean, canonical_direction(axis).normalized()};
            double maxD = 0.0;
            for (const Point& p : b) maxD = std::max(maxD, dist_point_to_line(p, l) / scale);
            if (maxD < bestD) {
                bestD = maxD;
                best_line = l;
            }
        }
    }
    if (!best_line) { // single point (or coincident points)
        bestD = 0.0;
        best_line = Line{b[0], unit_axis(dim)};
    }
    result.alpha = bestD;
    result.line = *best_line;
    return result;
}

FlatnessResult vertex_flatness(const PointCloud& cloud, Index v,
                               const std::vector<Index>& x_prime, double scale,
                               const FlatnessParams& params, DistanceMeter& meter) {
    PhaseScope scope(meter, Phase::Flatness);
    std::vector<Index> nb =
        neighborhood_indices(cloud, x_prime, v, scale, params.c0, meter);
    std::vector<Point> pts;
    pts.reserve(nb.size());
    for (Index i : nb) pts.push_back(cloud[i]);
    FlatnessResult result = params.backend == FlatnessBackend::Grid
                                ? alpha_grid(cloud[v], pts, scale, params)
                                : alpha_width(cloud[v], pts, scale);
    result.neighborhood = std::move(nb);
    result.scale = scale;
    return result;
}

std::vector<FlatPair> flat_pairs(const PointCloud& cloud, Index v,
                                 const std::vector<Index>& x,
                                 const std::vector<Index>& x_prime, double eps,
                                 int scale_gap, const FlatnessParams& params,
                                 DistanceMeter& meter) {
    if (std::find(x.begin(), x.end(), v) == x.end())
        throw Error("flat_pairs: v is not a member of the net");

    const double scale = std::ldexp(eps, -scale_gap);
    const double annulus_hi = params.c0 * std::ldexp(eps, -scale_gap - 1);

    std::vector<Index> b_prime;
    {
        PhaseScope scope(meter, Phase::EdgeAssembly);
        b_prime = ball_query_indices(cloud, x, cloud[v], annulus_hi, /*closed=*/false,
                                     &meter);
    }
    if (b_prime.size() <= 1) return {};

    FlatnessResult flat = vertex_flatness(cloud, v, x_prime, scale, params, meter);
    if (flat.alpha > params.flat_threshold) return {};

    const OrientedFrame frame = orient(flat.line, cloud[v]);

    PhaseScope scope(meter, Phase::EdgeAssembly);
    bool have_neg = false, have_pos = false;
    Index best_neg = 0, best_pos = 0;
    Eigen::VectorXd key_neg, key_pos;
    for (Index u : b_prime) {
        if (u == v) continue;
        Eigen::VectorXd key = frame.apply(cloud[u]);
        if (key[0] < 0.0) {
            if (!have_neg || lex_less(key_neg, key)) { // nearest from below: max key
                have_neg = true;
                best_neg = u;
                key_neg = key;
            }
        } else if (key[0] > 0.0) {
            if (!have_pos || lex_less(key, key_pos)) { // nearest from above: min key
                have_pos = true;
                best_pos = u;
                key_pos = key;
            }
        }
    }

    std::vector<FlatPair> pairs;
    auto admit = [&](Index u) {
        const double d = distance(cloud[v], cloud[u], meter);
        if (d >= eps && d < annulus_hi)
            pairs.push_back(FlatPair{std::min(v, u), std::max(v, u)});
    };
    if (have_neg) admit(best_neg);
    if (have_pos) admit(best_pos);
    return pairs;
}

} // namespace atsp
