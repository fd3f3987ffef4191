#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "lat/boxcount.hpp"

namespace lat {

/**
 * The fixed smoothing bump omega(t) = c * exp(-1/(1-4t^2)) on |t| < 1/2,
 * normalized to unit mass, with its Fourier transform by tanh-sinh
 * quadrature at a fixed node count.  omega_hat(0) = 1 by construction.
 * A grow-only value table backs the dual-sum inner loop.
 */
class SmoothingKernel {
public:
    explicit SmoothingKernel(int quadrature_nodes = 2048);

    int nodes() const { return nodes_; }
    double normalization() const { return norm_; }

    double omega(double t) const; // normalized bump
    double omega_hat(double u) const; // quadrature evaluation (even, real)

    // Table-backed evaluation; grows the table under a mutex as needed.
    double omega_hat_cached(double u) const;

private:
    void ensure_table(double umax) const;

    int nodes_;
    double norm_ = 1.0;
    std::vector<double> qt_, qw_; // abscissae and weights on (-1/2, 1/2)

    mutable std::mutex mu_;
    mutable std::shared_ptr<const std::vector<double>> table_;
    double step_ = 1.0 / 4096.0;
};

struct PoissonParams {
    double tau = 0.0;           // smoothing scale (the paper's N^-2 choice)
    double cutoff_radius = 768; // dual-point truncation ||gamma||_inf bound
    int quadrature_nodes = 2048;
};

/**
 * Fourier transform of the indicator of [0,N_1) x ... x [0,N_s) in the
 * e(+i) convention: product of sin(pi N_i g_i)/(pi g_i) factors (limit N_i
 * at g_i = 0) times e(sum N_i g_i / 2).
 */
std::complex<double> box_ft(std::span<const double> lengths, std::span<const double> gamma);

struct PoissonResult {
    double r_dotdot = 0.0;
    double truncation_budget = 0.0;
    double imag_residue = 0.0; // zero by +/-gamma pairing
    long long terms = 0;       // dual points summed (both of each pair)
};

/**
 * Truncated dual-sum estimate of the remainder:
 *   (det G)^-1 sum_{0 < ||g||_inf <= r, g in dual} boxft(g) OmegaHat(tau g) e(<g,x>).
 * Terms pair g with -g, so the sum is exactly real.  The truncation budget
 * is the measured partial-sum oscillation over the outer half-shell scaled
 * by the remaining-shell factor (pilot-calibrated), plus a small floor.
 */
PoissonResult poisson_remainder(const Lattice& g, const Box& box, std::span<const double> x,
                                const PoissonParams& params, const SmoothingKernel& kernel);

} // namespace lat
