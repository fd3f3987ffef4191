#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

#include "lat/lattice.hpp"

namespace lat {

struct LogDecomposition {
    double xi = 0.0;         // coefficient of the all-ones vector
    std::vector<double> xis; // unit-log coefficients xi_1..xi_{s-1}
    int sign_first = 0;      // sign of y_1
};

struct ReduceResult {
    std::vector<long long> k;
    bool sign_flip = false;
    std::vector<double> y_reduced;
};

struct ElementReduceResult {
    std::vector<long long> k;
    bool sign_flip = false;
    FieldElement element;
};

struct NormalizeResult {
    std::vector<long long> k;
    std::vector<double> nvec_prime;
    double c3_achieved = 1.0;
};

enum class PowerCountMode { max_le, min_ge };

/**
 * Dirichlet unit-group geometry for a validated system of s-1 fundamental
 * units: log-embedding matrix, regulator, decomposition along
 * {1, l(eps_1), ..., l(eps_{s-1})}, fundamental-domain membership and
 * reduction, unit-power counting and box normalization.
 *
 * Membership boundaries use a snap tolerance: a xi_i within snap_tol of an
 * integer is treated as that integer before flooring, keeping reduction
 * idempotent under float drift.
 */
class UnitSystem {
public:
    static UnitSystem build(std::vector<FieldElement> units, double snap_tol = 1e-9);

    int dim() const { return s_; }
    double regulator() const { return regulator_; }
    const std::vector<FieldElement>& units() const { return units_; }
    const Eigen::MatrixXd& log_rows() const { return log_rows_; } // (s-1) x s
    double snap_tol() const { return snap_; }

    LogDecomposition decompose(std::span<const double> y) const;
    bool in_fundamental_domain(std::span<const double> y) const;
    ReduceResult reduce_to_F(std::span<const double> y) const;
    ElementReduceResult reduce_element(const FieldElement& e) const;

    long long count_unit_powers(double t, PowerCountMode mode) const;

    NormalizeResult normalize_box(std::span<const double> nvec, long long search_radius) const;

    FieldElement unit_power(std::span<const long long> k) const;

private:
    UnitSystem() = default;

    double snapped(double xi) const;

    std::vector<FieldElement> units_;
    Eigen::MatrixXd log_rows_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    double regulator_ = 0.0;
    double snap_ = 1e-9;
    int s_ = 0;
};

struct FDomainPoint {
    std::vector<long long> coeffs; // module coordinates of the representative
    Rat abs_norm;
    std::vector<double> coords;
};

/**
 * Fundamental-domain representatives with 0 < |Nm| <= max_abs_norm found by
 * enumerating module coefficients up to coeff_radius and reducing;
 * deduplicated, sorted by exact |norm| then lexicographic coefficients.
 * Sets *incomplete when the coefficient ball provably may miss points.
 */
std::vector<FDomainPoint> enumerate_F_norm_bounded(const Lattice& g, const UnitSystem& u,
                                                   const Rat& max_abs_norm,
                                                   long long coeff_radius,
                                                   bool* incomplete = nullptr);

} // namespace lat
