#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lat/lattice.hpp"

namespace lat {

/**
 * Skriganov point set: (Gamma + x) intersected with the window
 * [0,1)^{s-1} x [0, n det Gamma), sorted by ascending last coordinate
 * (ties by the remaining coordinates), last coordinate normalized by the
 * window height.
 */
struct PointSet {
    int s = 0;
    long long n = 0;       // requested window count
    long long count = 0;   // actual points emitted
    double window_height = 0.0;
    std::vector<double> shift;
    std::string provenance;
    std::vector<std::vector<double>> pts; // pts[k][j] in [0,1)
};

PointSet generate_pointset(const Lattice& g, std::span<const double> x, long long n);

// Anchored-box counting error of the first prefix_len points:
// #(prefix in [0,y)) - prefix_len * y_1...y_s.
double delta(std::span<const double> y, const PointSet& ps, long long prefix_len);
// One-sided limit variant (closed faces), used for limit witnesses.
double delta_limit(std::span<const double> y, const PointSet& ps, long long prefix_len);

struct DiscrepancyReport {
    double d_star = 0.0;
    std::vector<double> witness_box;
    double n_dstar = 0.0;
    bool attained = true; // false: one-sided limit at witness_box
};

enum class DStarMode { exact, lower_bound };

inline constexpr long long kDstarExactCap2 = 32768; // s = 2
inline constexpr long long kDstarExactCap3 = 1024;  // s = 3

DiscrepancyReport star_discrepancy(const PointSet& ps, long long prefix_len, DStarMode mode,
                                   std::uint64_t seed = 1);

struct PrefixRow {
    long long m = 0;
    double d_star_m = 0.0;
    double m_times_d_star_m = 0.0;
    double running_sup = 0.0;
    std::string mode;
};

/**
 * D* of each prefix on the schedule (all m <= 256, then log-spaced with
 * growth factor 1.1, always including n); the running sup of m D*_m is the
 * prefix-growth observable.
 */
std::vector<PrefixRow> prefix_sup_experiment(const PointSet& ps, std::uint64_t seed = 1);

// Point-set file: header "s n", one point per line, 17 significant digits.
std::string pointset_to_text(const PointSet& ps);
PointSet pointset_from_text(const std::string& text);

} // namespace lat
