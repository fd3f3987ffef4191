#pragma once

#include <cstdint>
#include <vector>

namespace lat {

// Global worker-thread hint (CLI --threads / LAT_THREADS).  1 = serial.
void set_max_threads(int n);
int max_threads();

/**
 * Shared 2-D cell sweep.  Given points with grid ranks (ui, vi) against
 * ascending grids U, V (U.front() = 0, U.back() = 1, likewise V), finds
 *
 *     max over cells (U[i],U[i+1]] x (V[j],V[j+1]] of
 *         max( |C(i,j) - (K*U[i])*V[j]|,  |C(i,j) - (K*U[i+1])*V[j+1]| )
 *
 * where C(i,j) = #{points : u <= U[i], v <= V[j]} is the cell's constant
 * count.  The lower-corner candidate is the one-sided limit from above;
 * the upper-corner candidate is attained.  Both the lattice remainder
 * sweep and exact star discrepancy reduce to this.
 *
 * Tie-break: strictly greater value wins; iteration is i asc, j asc,
 * limit candidate before attained, so the witness is deterministic.
 */
struct SweepResult {
    double value = 0.0;
    int i = 0, j = 0;     // winning cell corner indices into U, V
    bool attained = true; // false: one-sided limit at (U[i], V[j])
    long long cells = 0;
};

SweepResult dominance_sweep_2d(const std::vector<int>& urank,
                               const std::vector<int>& vrank,
                               const std::vector<double>& U,
                               const std::vector<double>& V, double K);

/** 3-D analogue for s = 3 exact star discrepancy (value formula
 *  |C - ((K*U)*V)*W|). */
struct SweepResult3 {
    double value = 0.0;
    int i = 0, j = 0, k = 0;
    bool attained = true;
    long long cells = 0;
};

SweepResult3 dominance_sweep_3d(const std::vector<int>& urank,
                                const std::vector<int>& vrank,
                                const std::vector<int>& wrank,
                                const std::vector<double>& U,
                                const std::vector<double>& V,
                                const std::vector<double>& W, double K);

} // namespace lat
