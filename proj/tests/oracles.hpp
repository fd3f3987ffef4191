#pragma once

// Test-side oracles, independent of the library's counting path: coefficient
// brute force for box counts, naive membership for delta, and the full
// critical-grid scan for star discrepancy.

#include <cmath>
#include <vector>

#include "lat/boxcount.hpp"
#include "lat/lds.hpp"

namespace lattest {

// Brute-force count over all coefficient vectors with ||c||_inf <= radius,
// membership by certified comparison (falls back to exact at faces).
inline long long brute_count(const lat::Lattice& g, const lat::Box& b, long long radius) {
    const int s = g.dim();
    std::vector<lat::Rat> lo, hi;
    for (int j = 0; j < s; ++j) {
        lo.push_back(lat::rat_of_double(b.origin[j]));
        hi.push_back(lo.back() + lat::rat_of_double(b.lengths[j]));
    }
    std::vector<long long> c(s, -radius);
    long long count = 0;
    while (true) {
        bool zero_skip = false;
        (void)zero_skip;
        bool inside = true;
        for (int j = 0; j < s && inside; ++j) {
            int cl = g.coord_cmp(c, j, lo[j]);
            if (cl < 0) {
                inside = false;
                break;
            }
            int ch = g.coord_cmp(c, j, hi[j]);
            if (ch >= 0) inside = false;
        }
        if (inside) ++count;
        int i = s - 1;
        while (i >= 0) {
            if (++c[i] <= radius) break;
            c[i] = -radius;
            --i;
        }
        if (i < 0) break;
    }
    return count;
}

// Safe coefficient radius so the brute-force ball covers the box.
inline long long safe_radius(const lat::Lattice& g, const lat::Box& b) {
    const auto& inv = g.basis_inverse();
    const int s = g.dim();
    double worst = 0.0;
    for (int i = 0; i < s; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j)
            acc += std::fabs(inv(j, i)) *
                   std::max(std::fabs(b.origin[j]), std::fabs(b.origin[j] + b.lengths[j]));
        worst = std::max(worst, acc);
    }
    return static_cast<long long>(std::ceil(worst)) + 2;
}

// Naive membership delta for a point-set prefix.
inline double naive_delta(const std::vector<double>& y, const lat::PointSet& ps,
                          long long prefix) {
    long long cnt = 0;
    for (long long k = 0; k < prefix; ++k) {
        bool in = true;
        for (int j = 0; j < ps.s && in; ++j) in = ps.pts[k][j] < y[j];
        if (in) ++cnt;
    }
    double vol = static_cast<double>(prefix);
    for (int j = 0; j < ps.s; ++j) vol *= y[j];
    return static_cast<double>(cnt) - vol;
}

// Full critical-grid star discrepancy: every corner built from point
// coordinates plus the endpoints, both one-sided limits. O(n^s * n).
inline double brute_dstar(const lat::PointSet& ps, long long prefix) {
    const int s = ps.s;
    std::vector<std::vector<double>> grids(s);
    for (int j = 0; j < s; ++j) {
        grids[j].push_back(0.0);
        grids[j].push_back(1.0);
        for (long long k = 0; k < prefix; ++k) grids[j].push_back(ps.pts[k][j]);
        std::sort(grids[j].begin(), grids[j].end());
        grids[j].erase(std::unique(grids[j].begin(), grids[j].end()), grids[j].end());
    }
    double best = 0.0;
    std::vector<size_t> idx(s, 0);
    while (true) {
        double vol = static_cast<double>(prefix);
        for (int j = 0; j < s; ++j) vol *= grids[j][idx[j]];
        long long cs = 0, cl = 0;
        for (long long k = 0; k < prefix; ++k) {
            bool ins = true, inl = true;
            for (int j = 0; j < s; ++j) {
                double p = ps.pts[k][j], yy = grids[j][idx[j]];
                ins = ins && p < yy;
                inl = inl && p <= yy;
            }
            cs += ins;
            cl += inl;
        }
        best = std::max(best, std::fabs(static_cast<double>(cs) - vol));
        best = std::max(best, std::fabs(static_cast<double>(cl) - vol));
        int j = s - 1;
        while (j >= 0) {
            if (++idx[j] < grids[j].size()) break;
            idx[j] = 0;
            --j;
        }
        if (j < 0) break;
    }
    return best / static_cast<double>(prefix);
}

} // namespace lattest
