#include "lat/boxcount.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lat/sweep.hpp"

namespace lat {

namespace {

struct ExactBox {
    std::vector<Rat> lo, hi;
    std::vector<double> lo_d, hi_d;

    ExactBox(std::span<const double> origin, std::span<const double> lengths) {
        const size_t s = origin.size();
        lo.reserve(s);
        hi.reserve(s);
        for (size_t j = 0; j < s; ++j) {
            if (!(lengths[j] >= 0.0)) throw BadInput("box lengths must be >= 0");
            lo.push_back(rat_of_double(origin[j]));
            hi.push_back(lo.back() + rat_of_double(lengths[j]));
            lo_d.push_back(origin[j]);
            hi_d.push_back(rat_to_double(hi.back()));
        }
    }
};

/**
 * Branch-and-bound over integer coefficient vectors.  Candidate ranges per
 * level come from the inverse basis (corner bounds) tightened by
 * Fourier-Motzkin projection at the two innermost levels; they only need
 * to be supersets.  Leaf membership uses a float filter with a certified
 * margin and falls back to exact comparisons at the faces.
 */
class Walker {
public:
    Walker(const Lattice& g, const ExactBox& box, bool closed_hi)
        : g_(g), box_(box), closed_hi_(closed_hi), s_(g.dim()) {
        const auto& inv = g_.basis_inverse();
        glo_.resize(s_);
        ghi_.resize(s_);
        for (int i = 0; i < s_; ++i) {
            double lo = 0.0, hi = 0.0;
            for (int j = 0; j < s_; ++j) {
                double m = inv(j, i);
                if (m >= 0) {
                    lo += m * box_.lo_d[static_cast<size_t>(j)];
                    hi += m * box_.hi_d[static_cast<size_t>(j)];
                } else {
                    lo += m * box_.hi_d[static_cast<size_t>(j)];
                    hi += m * box_.lo_d[static_cast<size_t>(j)];
                }
            }
            double pad = 1e-6 * (1.0 + std::fabs(lo) + std::fabs(hi));
            glo_[static_cast<size_t>(i)] = lo - pad;
            ghi_[static_cast<size_t>(i)] = hi + pad;
        }
        double cand = 1.0;
        for (int i = 0; i < s_; ++i)
            cand *= std::max(0.0, ghi_[static_cast<size_t>(i)] - glo_[static_cast<size_t>(i)] + 1.0);
        if (cand > 4e9) throw VolumeLimitExceeded("coefficient candidate box too large");
        c_.assign(static_cast<size_t>(s_), 0);
        prefix_.assign(static_cast<size_t>(s_), 0.0);
        abs_sum_ = 0.0;
    }

    template <class Fn>
    void run(Fn&& fn) {
        descend(0, std::forward<Fn>(fn));
    }

private:
    static long long floor_ll(double x) { return static_cast<long long>(std::floor(x)); }
    static long long ceil_ll(double x) { return static_cast<long long>(std::ceil(x)); }

    // Range of the last free coefficient with all others fixed.
    bool last_level_range(int k, double* out_lo, double* out_hi) const {
        double lo = glo_[static_cast<size_t>(k)], hi = ghi_[static_cast<size_t>(k)];
        for (int j = 0; j < s_; ++j) {
            double b = g_.basis()(k, j);
            double rlo = box_.lo_d[static_cast<size_t>(j)] - prefix_[static_cast<size_t>(j)];
            double rhi = box_.hi_d[static_cast<size_t>(j)] - prefix_[static_cast<size_t>(j)];
            double pad = 1e-9 * (1.0 + std::fabs(rlo) + std::fabs(rhi));
            if (std::fabs(b) < 1e-14 * (1.0 + std::fabs(rhi))) {
                if (rhi < -pad || rlo > pad) return false; // face misses entirely
                continue;
            }
            double a = (rlo - pad) / b, c = (rhi + pad) / b;
            if (b < 0) std::swap(a, c);
            lo = std::max(lo, a);
            hi = std::min(hi, c);
        }
        *out_lo = lo;
        *out_hi = hi;
        return lo <= hi;
    }

    // Fourier-Motzkin bound for coefficient k when exactly two coefficients
    // (k and k+1) remain free.
    bool fm_level_range(int k, double* out_lo, double* out_hi) const {
        struct OneSided {
            double a, b, c; // a*x + b*y <= c
        };
        std::vector<OneSided> cons;
        cons.reserve(static_cast<size_t>(2 * s_));
        for (int j = 0; j < s_; ++j) {
            double a = g_.basis()(k, j);
            double b = g_.basis()(k + 1, j);
            double rlo = box_.lo_d[static_cast<size_t>(j)] - prefix_[static_cast<size_t>(j)];
            double rhi = box_.hi_d[static_cast<size_t>(j)] - prefix_[static_cast<size_t>(j)];
            double pad = 1e-9 * (1.0 + std::fabs(rlo) + std::fabs(rhi));
            cons.push_back({a, b, rhi + pad});
            cons.push_back({-a, -b, -(rlo - pad)});
        }
        double lo = glo_[static_cast<size_t>(k)], hi = ghi_[static_cast<size_t>(k)];
        const double tiny = 1e-13;
        auto apply = [&](double A, double C) -> bool {
            if (A > tiny) {
                hi = std::min(hi, C / A);
            } else if (A < -tiny) {
                lo = std::max(lo, C / A);
            } else if (C < -1e-9) {
                return false;
            }
            return true;
        };
        for (const auto& u : cons) {
            if (std::fabs(u.b) <= tiny) {
                if (!apply(u.a, u.c)) return false;
            }
        }
        for (const auto& up : cons) {
            if (up.b <= tiny) continue;
            for (const auto& lw : cons) {
                if (lw.b >= -tiny) continue;
                double A = up.b * lw.a - lw.b * up.a;
                double C = up.b * lw.c - lw.b * up.c;
                if (!apply(A, C)) return false;
            }
        }
        double pad = 1e-7 * (1.0 + std::fabs(lo) + std::fabs(hi));
        *out_lo = lo - pad;
        *out_hi = hi + pad;
        return lo <= hi + 2 * pad;
    }

    template <class Fn>
    void descend(int k, Fn&& fn) {
        double lo_r, hi_r;
        bool feasible;
        if (k == s_ - 1)
            feasible = last_level_range(k, &lo_r, &hi_r);
        else if (k == s_ - 2)
            feasible = fm_level_range(k, &lo_r, &hi_r);
        else {
            lo_r = glo_[static_cast<size_t>(k)];
            hi_r = ghi_[static_cast<size_t>(k)];
            feasible = true;
        }
        if (!feasible) return;
        long long clo = ceil_ll(lo_r), chi = floor_ll(hi_r);
        for (long long v = clo; v <= chi; ++v) {
            c_[static_cast<size_t>(k)] = v;
            const double dv = static_cast<double>(v);
            for (int j = 0; j < s_; ++j)
                prefix_[static_cast<size_t>(j)] += dv * g_.basis()(k, j);
            abs_sum_ += std::fabs(dv);
            if (k + 1 == s_) {
                if (member()) fn(std::span<const long long>(c_));
            } else {
                descend(k + 1, fn);
            }
            for (int j = 0; j < s_; ++j)
                prefix_[static_cast<size_t>(j)] -= dv * g_.basis()(k, j);
            abs_sum_ -= std::fabs(dv);
        }
    }

    bool member() const {
        for (int j = 0; j < s_; ++j) {
            double mid = prefix_[static_cast<size_t>(j)];
            double m = g_.coord_margin(abs_sum_, mid) +
                       4e-16 * (std::fabs(box_.hi_d[static_cast<size_t>(j)]) + 1.0);
            double lo = box_.lo_d[static_cast<size_t>(j)];
            double hi = box_.hi_d[static_cast<size_t>(j)];
            if (mid < lo - m || mid > hi + m) return false;
            if (mid <= lo + m) {
                if (g_.coord_cmp(c_, j, box_.lo[static_cast<size_t>(j)]) < 0) return false;
            }
            if (mid >= hi - m) {
                int cmp = g_.coord_cmp(c_, j, box_.hi[static_cast<size_t>(j)]);
                if (closed_hi_ ? cmp > 0 : cmp >= 0) return false;
            }
        }
        return true;
    }

    const Lattice& g_;
    const ExactBox& box_;
    bool closed_hi_;
    int s_;
    std::vector<double> glo_, ghi_;
    std::vector<long long> c_;
    std::vector<double> prefix_;
    double abs_sum_;
};

void check_volume_guard(const Lattice& g, const Box& b) {
    double expected = b.volume() / g.det();
    if (!(expected <= kVolumeGuard))
        throw VolumeLimitExceeded("expected point count " + std::to_string(expected) +
                                  " exceeds guard");
}

} // namespace

long long count_points(const Lattice& g, const Box& b) {
    if (static_cast<int>(b.origin.size()) != g.dim() ||
        static_cast<int>(b.lengths.size()) != g.dim())
        throw BadInput("box dimension mismatch");
    for (double l : b.lengths)
        if (!(l > 0.0)) throw BadInput("box lengths must be positive");
    check_volume_guard(g, b);
    ExactBox eb(b.origin, b.lengths);
    Walker w(g, eb, /*closed_hi=*/false);
    long long n = 0;
    w.run([&](std::span<const long long>) { ++n; });
    return n;
}

RemainderReport remainder(const Lattice& g, const Box& b) {
    RemainderReport rep;
    rep.count = count_points(g, b);
    rep.volume = b.volume();
    rep.det = g.det();
    rep.remainder = static_cast<double>(rep.count) - rep.volume / rep.det;
    return rep;
}

std::vector<LatticePoint> enumerate_points(const Lattice& g,
                                           std::span<const double> origin,
                                           std::span<const double> lengths,
                                           bool closed_hi) {
    ExactBox eb(origin, lengths);
    Walker w(g, eb, closed_hi);
    std::vector<LatticePoint> pts;
    w.run([&](std::span<const long long> c) {
        LatticePoint p;
        p.coeffs.assign(c.begin(), c.end());
        p.coords = g.coords_of(c);
        pts.push_back(std::move(p));
    });
    return pts;
}

namespace {

// Per-axis jump grid: one class per distinct coordinate value, exact at
// the faces, plus the 0 and 1 endpoints.
struct AxisGrid {
    std::vector<double> values;
    std::vector<int> rank; // per point
};

AxisGrid build_axis_grid(const Lattice& g, const std::vector<LatticePoint>& pts, int axis,
                         const ExactBox& box, double x_d, double n_d) {
    const size_t n = pts.size();
    std::vector<int> face(n, -1);
    std::vector<double> umid(n, 0.0);
    std::vector<double> utol(n, 0.0);
    for (size_t p = 0; p < n; ++p) {
        double sum_abs = 0.0;
        for (long long cc : pts[p].coeffs) sum_abs += std::fabs(static_cast<double>(cc));
        double mid = pts[p].coords(axis);
        double m = g.coord_margin(sum_abs, mid) + 4e-16 * (std::fabs(mid) + 1.0);
        if (std::fabs(mid - box.lo_d[static_cast<size_t>(axis)]) <= m &&
            g.coord_cmp(pts[p].coeffs, axis, box.lo[static_cast<size_t>(axis)]) == 0) {
            face[p] = 0;
            umid[p] = 0.0;
        } else if (std::fabs(mid - box.hi_d[static_cast<size_t>(axis)]) <= m &&
                   g.coord_cmp(pts[p].coeffs, axis, box.hi[static_cast<size_t>(axis)]) == 0) {
            face[p] = 1;
            umid[p] = 1.0;
        } else {
            umid[p] = std::clamp((mid - x_d) / n_d, 0.0, 1.0);
        }
        utol[p] = m / n_d + 4e-13;
    }

    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    auto exact_cmp = [&](size_t a, size_t b) -> int {
        if (face[a] >= 0 && face[a] == face[b]) return 0;
        return g.coord_cmp_points(pts[a].coeffs, pts[b].coeffs, axis);
    };
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        double d = umid[a] - umid[b];
        if (std::fabs(d) > utol[a] + utol[b]) return d < 0;
        return exact_cmp(a, b) < 0;
    });

    AxisGrid grid;
    grid.rank.assign(n, 0);
    grid.values.push_back(0.0);
    size_t prev = static_cast<size_t>(-1);
    for (size_t oi = 0; oi < n; ++oi) {
        size_t p = order[oi];
        bool new_class;
        if (prev == static_cast<size_t>(-1)) {
            new_class = !(face[p] == 0); // the 0 endpoint is the first class
        } else {
            double d = umid[p] - umid[prev];
            new_class = (std::fabs(d) > utol[p] + utol[prev]) ? true : exact_cmp(prev, p) != 0;
        }
        if (new_class) grid.values.push_back(umid[p]);
        grid.rank[p] = static_cast<int>(grid.values.size()) - 1;
        prev = p;
    }
    if (grid.values.back() != 1.0) grid.values.push_back(1.0);
    return grid;
}

double theta_clamp(double v) { return std::clamp(v, 0.0, 1.0); }

// Rank-based |R| evaluation used by sampled mode and the re-evaluation
// hook: u-values compare against theta with a snap band so grid values
// round-trip.
double eval_from_uvecs(const std::vector<std::vector<double>>& uvecs,
                       std::span<const double> theta, double K, bool attained) {
    const size_t n = uvecs.empty() ? 0 : uvecs[0].size();
    const size_t s = uvecs.size();
    long long count = 0;
    for (size_t p = 0; p < n; ++p) {
        bool in = true;
        for (size_t j = 0; j < s && in; ++j) {
            double u = uvecs[j][p], t = theta[j];
            bool eq = std::fabs(u - t) <= 1e-9;
            in = eq ? !attained : (u < t);
        }
        if (in) ++count;
    }
    double vol = K;
    for (size_t j = 0; j < s; ++j) vol *= theta[j];
    return std::fabs(static_cast<double>(count) - vol);
}

} // namespace

SupSearchResult sup_remainder(const Lattice& g, std::span<const double> nvec,
                              std::span<const double> x, SupMode mode,
                              std::uint64_t seed, int samples) {
    const int s = g.dim();
    if (static_cast<int>(nvec.size()) != s || static_cast<int>(x.size()) != s)
        throw BadInput("dimension mismatch");
    for (double l : nvec)
        if (!(l > 0.0)) throw BadInput("box lengths must be positive");
    Box full{std::vector<double>(x.begin(), x.end()),
             std::vector<double>(nvec.begin(), nvec.end())};
    check_volume_guard(g, full);

    double K = full.volume() / g.det();
    ExactBox eb(x, nvec);
    auto pts = enumerate_points(g, x, nvec, /*closed_hi=*/true);

    if (mode == SupMode::exact_sweep) {
        if (s != 2) throw TooLargeForExact("exact_sweep supports s = 2 only");
        AxisGrid gu = build_axis_grid(g, pts, 0, eb, x[0], nvec[0]);
        AxisGrid gv = build_axis_grid(g, pts, 1, eb, x[1], nvec[1]);
        SweepResult sw = dominance_sweep_2d(gu.rank, gv.rank, gu.values, gv.values, K);
        SupSearchResult res;
        res.theta_star = {gu.values[static_cast<size_t>(sw.i)],
                          gv.values[static_cast<size_t>(sw.j)]};
        res.sup_abs_remainder = sw.value;
        res.cells_visited = sw.cells;
        res.attained = sw.attained;
        return res;
    }

    // sampled: seeded quasi-search refined coordinatewise along jump values.
    std::vector<std::vector<double>> uvecs(static_cast<size_t>(s));
    for (int j = 0; j < s; ++j) {
        uvecs[static_cast<size_t>(j)].reserve(pts.size());
        for (const auto& p : pts)
            uvecs[static_cast<size_t>(j)].push_back(
                theta_clamp((p.coords(j) - x[j]) / nvec[j]));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SupSearchResult best;
    best.theta_star.assign(static_cast<size_t>(s), 1.0);
    best.sup_abs_remainder = -1.0;
    long long evals = 0;
    auto offer = [&](std::span<const double> th, bool attained) {
        double v = eval_from_uvecs(uvecs, th, K, attained);
        ++evals;
        if (v > best.sup_abs_remainder) {
            best.sup_abs_remainder = v;
            best.theta_star.assign(th.begin(), th.end());
            best.attained = attained;
        }
    };
    std::vector<double> th(static_cast<size_t>(s));
    for (int it = 0; it < samples; ++it) {
        for (int j = 0; j < s; ++j) th[static_cast<size_t>(j)] = unif(rng);
        offer(th, true);
        offer(th, false);
    }
    // Coordinatewise refinement: scan jump values of the best theta's axis.
    for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < s; ++j) {
            th = best.theta_star;
            std::vector<double> cand = uvecs[static_cast<size_t>(j)];
            cand.push_back(0.0);
            cand.push_back(1.0);
            std::sort(cand.begin(), cand.end());
            cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
            for (double t : cand) {
                th[static_cast<size_t>(j)] = t;
                offer(th, true);
                offer(th, false);
            }
        }
    }
    best.cells_visited = evals;
    return best;
}

double eval_sup_candidate(const Lattice& g, std::span<const double> nvec,
                          std::span<const double> x, std::span<const double> theta,
                          bool attained) {
    const int s = g.dim();
    auto pts = enumerate_points(g, x, nvec, /*closed_hi=*/true);
    std::vector<std::vector<double>> uvecs(static_cast<size_t>(s));
    ExactBox eb(x, nvec);
    for (int j = 0; j < s; ++j) {
        AxisGrid grid = build_axis_grid(g, pts, j, eb, x[j], nvec[j]);
        uvecs[static_cast<size_t>(j)].resize(pts.size());
        for (size_t p = 0; p < pts.size(); ++p)
            uvecs[static_cast<size_t>(j)][p] =
                grid.values[static_cast<size_t>(grid.rank[p])];
    }
    double K = 1.0;
    for (int j = 0; j < s; ++j) K *= nvec[j];
    K /= g.det();
    return eval_from_uvecs(uvecs, theta, K, attained);
}

std::vector<GrowthRow> growth_experiment(const Lattice& g, std::span<const double> x,
                                         std::span<const double> n_list,
                                         std::span<const double> aspect, SupMode mode,
                                         std::uint64_t seed) {
    const int s = g.dim();
    if (static_cast<int>(aspect.size()) != s) throw BadInput("aspect dimension mismatch");
    double prod = 1.0;
    for (double a : aspect) {
        if (!(a > 0.0)) throw BadInput("aspect entries must be positive");
        prod *= a;
    }
    std::vector<double> asp(aspect.begin(), aspect.end());
    double scale = std::pow(prod, -1.0 / s);
    for (auto& a : asp) a *= scale;

    std::vector<GrowthRow> rows;
    for (double n_total : n_list) {
        if (!(n_total > 0.0)) throw BadInput("N values must be positive");
        std::vector<double> nvec(static_cast<size_t>(s));
        double root = std::pow(n_total, 1.0 / s);
        for (int j = 0; j < s; ++j) nvec[static_cast<size_t>(j)] = asp[static_cast<size_t>(j)] * root;
        SupSearchResult sr = sup_remainder(g, nvec, x, mode, seed);
        GrowthRow row;
        row.n_total = n_total;
        row.ln_n = std::log(n_total);
        row.sup_abs_r = sr.sup_abs_remainder;
        row.theta = sr.theta_star;
        row.mode = (mode == SupMode::exact_sweep) ? "exact_sweep" : "sampled";
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace lat
