#include "lat/lds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "lat/boxcount.hpp"
#include "lat/sweep.hpp"

namespace lat {

PointSet generate_pointset(const Lattice& g, std::span<const double> x, long long n) {
    const int s = g.dim();
    if (n < 1) throw BadInput("n must be >= 1");
    if (static_cast<int>(x.size()) != s) throw BadInput("shift dimension mismatch");

    // Admissibility gate on a small coefficient ball: one zero-norm point
    // disqualifies the construction.
    NmFloorResult floor = nm_floor(g, 4);
    if (!floor.admissible)
        throw NonAdmissible("zero-norm lattice point at coefficient radius 4");

    const double h = static_cast<double>(n) * g.det();
    std::vector<double> origin(static_cast<size_t>(s));
    std::vector<double> lengths(static_cast<size_t>(s), 1.0);
    for (int j = 0; j < s; ++j) origin[static_cast<size_t>(j)] = -x[j];
    lengths[static_cast<size_t>(s - 1)] = h;

    Box window{origin, lengths};
    if (window.volume() / g.det() > kVolumeGuard)
        throw VolumeLimitExceeded("point-set window too large");

    auto pts = enumerate_points(g, origin, lengths, /*closed_hi=*/false);
    if (pts.empty()) throw EmptyWindow("no lattice points in the window");

    // z = gamma + x, sorted by last coordinate (ties: remaining lex).
    std::vector<std::vector<double>> zs;
    zs.reserve(pts.size());
    for (const auto& p : pts) {
        std::vector<double> z(static_cast<size_t>(s));
        for (int j = 0; j < s; ++j) z[static_cast<size_t>(j)] = p.coords(j) + x[j];
        zs.push_back(std::move(z));
    }
    std::sort(zs.begin(), zs.end(), [s](const std::vector<double>& a, const std::vector<double>& b) {
        if (a[static_cast<size_t>(s - 1)] != b[static_cast<size_t>(s - 1)])
            return a[static_cast<size_t>(s - 1)] < b[static_cast<size_t>(s - 1)];
        return std::lexicographical_compare(a.begin(), a.end() - 1, b.begin(), b.end() - 1);
    });

    PointSet ps;
    ps.s = s;
    ps.n = n;
    ps.count = static_cast<long long>(zs.size());
    ps.window_height = h;
    ps.shift.assign(x.begin(), x.end());
    ps.provenance = g.label();
    ps.pts.reserve(zs.size());
    const double below_one = std::nextafter(1.0, 0.0);
    for (auto& z : zs) {
        z[static_cast<size_t>(s - 1)] /= h;
        for (auto& v : z) v = std::clamp(v, 0.0, below_one);
        ps.pts.push_back(std::move(z));
    }
    return ps;
}

static void check_prefix(const PointSet& ps, long long prefix_len) {
    if (prefix_len < 1 || prefix_len > ps.count)
        throw BadPrefix("prefix length " + std::to_string(prefix_len) +
                        " outside [1, " + std::to_string(ps.count) + "]");
}

double delta(std::span<const double> y, const PointSet& ps, long long prefix_len) {
    check_prefix(ps, prefix_len);
    if (static_cast<int>(y.size()) != ps.s) throw BadInput("box dimension mismatch");
    for (double v : y)
        if (!(v > 0.0 && v <= 1.0)) throw BadInput("anchored box needs 0 < y_i <= 1");
    long long cnt = 0;
    for (long long k = 0; k < prefix_len; ++k) {
        bool in = true;
        for (int j = 0; j < ps.s && in; ++j)
            in = ps.pts[static_cast<size_t>(k)][static_cast<size_t>(j)] < y[static_cast<size_t>(j)];
        if (in) ++cnt;
    }
    double vol = static_cast<double>(prefix_len);
    for (int j = 0; j < ps.s; ++j) vol *= y[static_cast<size_t>(j)];
    return static_cast<double>(cnt) - vol;
}

double delta_limit(std::span<const double> y, const PointSet& ps, long long prefix_len) {
    check_prefix(ps, prefix_len);
    long long cnt = 0;
    for (long long k = 0; k < prefix_len; ++k) {
        bool in = true;
        for (int j = 0; j < ps.s && in; ++j)
            in = ps.pts[static_cast<size_t>(k)][static_cast<size_t>(j)] <= y[static_cast<size_t>(j)];
        if (in) ++cnt;
    }
    double vol = static_cast<double>(prefix_len);
    for (int j = 0; j < ps.s; ++j) vol *= y[static_cast<size_t>(j)];
    return static_cast<double>(cnt) - vol;
}

namespace {

struct AxisRanks {
    std::vector<double> grid;
    std::vector<int> rank;
};

AxisRanks axis_ranks(const PointSet& ps, long long prefix_len, int axis) {
    AxisRanks ar;
    ar.grid.reserve(static_cast<size_t>(prefix_len) + 2);
    ar.grid.push_back(0.0);
    for (long long k = 0; k < prefix_len; ++k)
        ar.grid.push_back(ps.pts[static_cast<size_t>(k)][static_cast<size_t>(axis)]);
    ar.grid.push_back(1.0);
    std::sort(ar.grid.begin(), ar.grid.end());
    ar.grid.erase(std::unique(ar.grid.begin(), ar.grid.end()), ar.grid.end());
    ar.rank.resize(static_cast<size_t>(prefix_len));
    for (long long k = 0; k < prefix_len; ++k) {
        double v = ps.pts[static_cast<size_t>(k)][static_cast<size_t>(axis)];
        ar.rank[static_cast<size_t>(k)] = static_cast<int>(
            std::lower_bound(ar.grid.begin(), ar.grid.end(), v) - ar.grid.begin());
    }
    return ar;
}

} // namespace

DiscrepancyReport star_discrepancy(const PointSet& ps, long long prefix_len, DStarMode mode,
                                   std::uint64_t seed) {
    check_prefix(ps, prefix_len);
    const int s = ps.s;
    DiscrepancyReport rep;

    if (mode == DStarMode::exact) {
        if (s == 2) {
            if (prefix_len > kDstarExactCap2)
                throw TooLargeForExact("exact D* capped at " +
                                       std::to_string(kDstarExactCap2) + " points for s=2");
            AxisRanks au = axis_ranks(ps, prefix_len, 0);
            AxisRanks av = axis_ranks(ps, prefix_len, 1);
            SweepResult sw = dominance_sweep_2d(au.rank, av.rank, au.grid, av.grid,
                                                static_cast<double>(prefix_len));
            rep.n_dstar = sw.value;
            rep.d_star = sw.value / static_cast<double>(prefix_len);
            rep.witness_box = {au.grid[static_cast<size_t>(sw.i)],
                               av.grid[static_cast<size_t>(sw.j)]};
            rep.attained = sw.attained;
            return rep;
        }
        if (s == 3) {
            if (prefix_len > kDstarExactCap3)
                throw TooLargeForExact("exact D* capped at " +
                                       std::to_string(kDstarExactCap3) + " points for s=3");
            AxisRanks au = axis_ranks(ps, prefix_len, 0);
            AxisRanks av = axis_ranks(ps, prefix_len, 1);
            AxisRanks aw = axis_ranks(ps, prefix_len, 2);
            SweepResult3 sw = dominance_sweep_3d(au.rank, av.rank, aw.rank, au.grid, av.grid,
                                                 aw.grid, static_cast<double>(prefix_len));
            rep.n_dstar = sw.value;
            rep.d_star = sw.value / static_cast<double>(prefix_len);
            rep.witness_box = {au.grid[static_cast<size_t>(sw.i)],
                               av.grid[static_cast<size_t>(sw.j)],
                               aw.grid[static_cast<size_t>(sw.k)]};
            rep.attained = sw.attained;
            return rep;
        }
        throw TooLargeForExact("exact D* supports s in {2, 3}");
    }

    // lower_bound: seeded anchored-box sampling over the critical values
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long long> pick(0, prefix_len - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double best = 0.0;
    std::vector<double> besty(static_cast<size_t>(s), 1.0);
    bool best_att = true;
    std::vector<double> y(static_cast<size_t>(s));
    const int samples = static_cast<int>(std::min<long long>(2048, 8 * prefix_len));
    auto offer = [&](std::span<const double> yy) {
        // attained value (strict faces)
        long long cs = 0, cl = 0;
        for (long long k = 0; k < prefix_len; ++k) {
            bool ins = true, inl = true;
            for (int j = 0; j < s; ++j) {
                double p = ps.pts[static_cast<size_t>(k)][static_cast<size_t>(j)];
                ins = ins && p < yy[static_cast<size_t>(j)];
                inl = inl && p <= yy[static_cast<size_t>(j)];
            }
            cs += ins;
            cl += inl;
        }
        double vol = static_cast<double>(prefix_len);
        for (int j = 0; j < s; ++j) vol *= yy[static_cast<size_t>(j)];
        double va = std::fabs(static_cast<double>(cs) - vol);
        double vl = std::fabs(static_cast<double>(cl) - vol);
        if (va > best) {
            best = va;
            besty.assign(yy.begin(), yy.end());
            best_att = true;
        }
        if (vl > best) {
            best = vl;
            besty.assign(yy.begin(), yy.end());
            best_att = false;
        }
    };
    for (int it = 0; it < samples; ++it) {
        for (int j = 0; j < s; ++j) {
            // bias candidates toward point coordinates, where the jumps live
            if (unif(rng) < 0.75) {
                y[static_cast<size_t>(j)] =
                    ps.pts[static_cast<size_t>(pick(rng))][static_cast<size_t>(j)];
                if (y[static_cast<size_t>(j)] <= 0.0) y[static_cast<size_t>(j)] = 1.0;
            } else {
                y[static_cast<size_t>(j)] = unif(rng);
            }
        }
        offer(y);
    }
    rep.n_dstar = best;
    rep.d_star = best / static_cast<double>(prefix_len);
    rep.witness_box = besty;
    rep.attained = best_att;
    return rep;
}

std::vector<PrefixRow> prefix_sup_experiment(const PointSet& ps, std::uint64_t seed) {
    std::vector<long long> schedule;
    const long long n = ps.count;
    for (long long m = 1; m <= std::min<long long>(n, 256); ++m) schedule.push_back(m);
    if (n > 256) {
        double m = 256.0;
        while (true) {
            m = std::max(m * 1.1, m + 1.0);
            long long mi = static_cast<long long>(std::floor(m));
            if (mi >= n) break;
            schedule.push_back(mi);
        }
        schedule.push_back(n);
    }

    const long long cap = (ps.s == 2) ? kDstarExactCap2 : (ps.s == 3 ? kDstarExactCap3 : 0);
    std::vector<PrefixRow> rows;
    double runsup = 0.0;
    for (long long m : schedule) {
        bool exact = m <= cap;
        DiscrepancyReport rep =
            star_discrepancy(ps, m, exact ? DStarMode::exact : DStarMode::lower_bound,
                             seed + static_cast<std::uint64_t>(m));
        PrefixRow row;
        row.m = m;
        row.d_star_m = rep.d_star;
        row.m_times_d_star_m = rep.n_dstar;
        runsup = std::max(runsup, rep.n_dstar);
        row.running_sup = runsup;
        row.mode = exact ? "exact" : "lower_bound";
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string pointset_to_text(const PointSet& ps) {
    std::ostringstream out;
    out << ps.s << " " << ps.count << "\n";
    char buf[64];
    for (const auto& p : ps.pts) {
        for (int j = 0; j < ps.s; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", p[static_cast<size_t>(j)]);
            out << (j ? " " : "") << buf;
        }
        out << "\n";
    }
    return out.str();
}

PointSet pointset_from_text(const std::string& text) {
    std::istringstream in(text);
    PointSet ps;
    long long count = 0;
    if (!(in >> ps.s >> count)) throw BadInput("point-set file: bad header");
    if (ps.s < 1 || count < 0) throw BadInput("point-set file: bad header values");
    ps.count = count;
    ps.n = count;
    ps.window_height = 0.0;
    ps.pts.reserve(static_cast<size_t>(count));
    for (long long k = 0; k < count; ++k) {
        std::vector<double> p(static_cast<size_t>(ps.s));
        for (int j = 0; j < ps.s; ++j)
            if (!(in >> p[static_cast<size_t>(j)]))
                throw BadInput("point-set file: truncated point list");
        ps.pts.push_back(std::move(p));
    }
    return ps;
}

} // namespace lat
