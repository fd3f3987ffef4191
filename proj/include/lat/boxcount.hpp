#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lat/lattice.hpp"

namespace lat {

/** Half-open axis-parallel box [origin_i, origin_i + length_i). */
struct Box {
    std::vector<double> origin;
    std::vector<double> lengths;

    double volume() const {
        double v = 1.0;
        for (double l : lengths) v *= l;
        return v;
    }
};

struct RemainderReport {
    long long count = 0;
    double volume = 0.0;
    double det = 0.0;
    double remainder = 0.0; // count - volume/det, single rounding chain
};

struct SupSearchResult {
    std::vector<double> theta_star;
    double sup_abs_remainder = 0.0;
    long long cells_visited = 0;
    // true: the value is attained at theta_star; false: it is the one-sided
    // limit approaching theta_star from above in every coordinate.
    bool attained = true;
};

enum class SupMode { exact_sweep, sampled };

inline constexpr double kVolumeGuard = 1e9; // expected-point cap

/** Exact number of lattice points in the half-open box. */
long long count_points(const Lattice& g, const Box& b);

RemainderReport remainder(const Lattice& g, const Box& b);

/**
 * Enumerate lattice points with coordinates in [origin, origin+lengths],
 * closed or half-open at the upper faces; boundary membership certified
 * exactly.  Used by the sup sweep and the point-set generator.
 */
std::vector<LatticePoint> enumerate_points(const Lattice& g,
                                           std::span<const double> origin,
                                           std::span<const double> lengths,
                                           bool closed_hi);

/**
 * sup over theta in [0,1]^s of |R(B_{theta.N} + x, Gamma)|.  exact_sweep
 * (s = 2 only) walks every cell of the jump grid and evaluates both
 * one-sided limits; sampled mode is a seeded lower bound with
 * coordinatewise refinement.
 */
SupSearchResult sup_remainder(const Lattice& g, std::span<const double> nvec,
                              std::span<const double> x, SupMode mode,
                              std::uint64_t seed = 1, int samples = 256);

// Re-evaluate |R| at theta with the approach convention of a sweep result
// (attained: strict faces; limit: closed faces).  Test hook for the
// witness-reproducibility invariant.
double eval_sup_candidate(const Lattice& g, std::span<const double> nvec,
                          std::span<const double> x, std::span<const double> theta,
                          bool attained);

struct GrowthRow {
    double n_total = 0.0;
    double ln_n = 0.0;
    double sup_abs_r = 0.0;
    std::vector<double> theta;
    std::string mode;
};

/**
 * One row per N in n_list: box lengths N_i = aspect_i * N^{1/s} (aspect
 * normalized to product 1), sup |R| over theta.
 */
std::vector<GrowthRow> growth_experiment(const Lattice& g, std::span<const double> x,
                                         std::span<const double> n_list,
                                         std::span<const double> aspect, SupMode mode,
                                         std::uint64_t seed = 1);

} // namespace lat
