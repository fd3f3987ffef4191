#include "lat/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace lat {

namespace {
std::atomic<int> g_threads{1};
}

void set_max_threads(int n) { g_threads.store(n < 1 ? 1 : n); }
int max_threads() { return g_threads.load(); }

namespace {

struct Best {
    double value = -1.0;
    int i = 0, j = 0;
    bool attained = true;

    void offer(double v, int ii, int jj, bool att) {
        if (v > value) {
            value = v;
            i = ii;
            j = jj;
            attained = att;
        }
    }
    // Merge preserving first-wins ties (callers merge in ascending i order).
    void merge(const Best& o) {
        if (o.value > value) *this = o;
    }
};

// Serial sweep over a contiguous range of i-cells.  hist/prefix state is
// rebuilt per range so column blocks can run on worker threads and merge
// bit-identically in block order.
Best sweep_range_2d(int i_begin, int i_end, const std::vector<std::vector<int>>& by_u,
                    const std::vector<double>& U, const std::vector<double>& V,
                    double K, long long* cells) {
    const int nv = static_cast<int>(V.size());
    std::vector<long long> hist(static_cast<size_t>(nv), 0);
    Best best;
    // points with u-rank <= i_begin are "already inserted"
    for (int t = 0; t <= i_begin && t < static_cast<int>(by_u.size()); ++t)
        for (int vr : by_u[static_cast<size_t>(t)]) ++hist[static_cast<size_t>(vr)];
    long long local_cells = 0;
    for (int i = i_begin; i < i_end; ++i) {
        if (i > i_begin)
            for (int vr : by_u[static_cast<size_t>(i)]) ++hist[static_cast<size_t>(vr)];
        long long c = 0;
        const double ku_lo = K * U[static_cast<size_t>(i)];
        const double ku_hi = K * U[static_cast<size_t>(i) + 1];
        for (int j = 0; j + 1 < nv; ++j) {
            c += hist[static_cast<size_t>(j)];
            const double cd = static_cast<double>(c);
            best.offer(std::fabs(cd - ku_lo * V[static_cast<size_t>(j)]), i, j, false);
            best.offer(std::fabs(cd - ku_hi * V[static_cast<size_t>(j) + 1]), i + 1, j + 1,
                       true);
            ++local_cells;
        }
    }
    *cells += local_cells;
    return best;
}

} // namespace

SweepResult dominance_sweep_2d(const std::vector<int>& urank,
                               const std::vector<int>& vrank,
                               const std::vector<double>& U,
                               const std::vector<double>& V, double K) {
    const int nu = static_cast<int>(U.size());
    std::vector<std::vector<int>> by_u(static_cast<size_t>(nu));
    for (size_t p = 0; p < urank.size(); ++p)
        by_u[static_cast<size_t>(urank[p])].push_back(vrank[p]);

    SweepResult res;
    const int ncells_i = nu - 1;
    const int nthreads = std::min(max_threads(), std::max(1, ncells_i / 64));
    if (nthreads <= 1) {
        Best b = sweep_range_2d(0, ncells_i, by_u, U, V, K, &res.cells);
        res.value = std::max(0.0, b.value);
        res.i = b.i;
        res.j = b.j;
        res.attained = b.attained;
        return res;
    }
    std::vector<Best> bests(static_cast<size_t>(nthreads));
    std::vector<long long> cell_counts(static_cast<size_t>(nthreads), 0);
    std::vector<std::thread> workers;
    for (int t = 0; t < nthreads; ++t) {
        int lo = ncells_i * t / nthreads;
        int hi = ncells_i * (t + 1) / nthreads;
        workers.emplace_back([&, t, lo, hi] {
            bests[static_cast<size_t>(t)] =
                sweep_range_2d(lo, hi, by_u, U, V, K, &cell_counts[static_cast<size_t>(t)]);
        });
    }
    for (auto& w : workers) w.join();
    Best total;
    for (int t = 0; t < nthreads; ++t) {
        total.merge(bests[static_cast<size_t>(t)]);
        res.cells += cell_counts[static_cast<size_t>(t)];
    }
    res.value = std::max(0.0, total.value);
    res.i = total.i;
    res.j = total.j;
    res.attained = total.attained;
    return res;
}

SweepResult3 dominance_sweep_3d(const std::vector<int>& urank,
                                const std::vector<int>& vrank,
                                const std::vector<int>& wrank,
                                const std::vector<double>& U,
                                const std::vector<double>& V,
                                const std::vector<double>& W, double K) {
    const int nu = static_cast<int>(U.size());
    const int nv = static_cast<int>(V.size());
    const int nw = static_cast<int>(W.size());
    std::vector<std::vector<size_t>> by_u(static_cast<size_t>(nu));
    for (size_t p = 0; p < urank.size(); ++p)
        by_u[static_cast<size_t>(urank[p])].push_back(p);

    SweepResult3 res;
    double best = -1.0;
    std::vector<long long> plane(static_cast<size_t>(nv) * static_cast<size_t>(nw), 0);
    for (int i = 0; i + 1 < nu; ++i) {
        for (size_t p : by_u[static_cast<size_t>(i)])
            ++plane[static_cast<size_t>(vrank[p]) * static_cast<size_t>(nw) +
                    static_cast<size_t>(wrank[p])];
        // 2-D dominance prefix over (v, w)
        std::vector<long long> row(static_cast<size_t>(nw), 0);
        std::vector<long long> dom(static_cast<size_t>(nw), 0);
        const double ku_lo = K * U[static_cast<size_t>(i)];
        const double ku_hi = K * U[static_cast<size_t>(i) + 1];
        std::fill(dom.begin(), dom.end(), 0);
        for (int j = 0; j + 1 < nv; ++j) {
            const long long* pl = &plane[static_cast<size_t>(j) * static_cast<size_t>(nw)];
            long long acc = 0;
            for (int k = 0; k + 1 < nw; ++k) {
                acc += pl[k];
                dom[static_cast<size_t>(k)] += acc;
                const double cd = static_cast<double>(dom[static_cast<size_t>(k)]);
                double lo = std::fabs(cd - (ku_lo * V[static_cast<size_t>(j)]) *
                                               W[static_cast<size_t>(k)]);
                double hi = std::fabs(cd - (ku_hi * V[static_cast<size_t>(j) + 1]) *
                                               W[static_cast<size_t>(k) + 1]);
                ++res.cells;
                if (lo > best) {
                    best = lo;
                    res.i = i;
                    res.j = j;
                    res.k = k;
                    res.attained = false;
                }
                if (hi > best) {
                    best = hi;
                    res.i = i + 1;
                    res.j = j + 1;
                    res.k = k + 1;
                    res.attained = true;
                }
            }
        }
    }
    res.value = std::max(0.0, best);
    return res;
}

} // namespace lat
