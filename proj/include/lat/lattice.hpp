#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lat/numfield.hpp"

namespace lat {

/** A full-rank module basis: s field elements spanning a rank-s Z-module. */
struct ModuleBasis {
    std::vector<FieldElement> elements;
    std::string label;
};

struct LatticePoint {
    std::vector<long long> coeffs;
    Eigen::VectorXd coords;
};

/**
 * Embedding lattice: row i of basis() is the certified midpoint vector of
 * embed(b_i).  Module-backed lattices keep their field elements so that
 * norms and face comparisons stay exact; matrix-injected lattices keep
 * exact rational rows (doubles are dyadic).  Duals of module lattices are
 * float-only.
 */
class Lattice {
public:
    static Lattice from_module(const ModuleBasis& m, int prec_bits);
    // Test/CLI path: inject an explicit basis matrix (rows = vectors).
    static Lattice from_matrix(const Eigen::MatrixXd& rows, std::string label);

    Lattice dual() const;

    int dim() const { return static_cast<int>(basis_.rows()); }
    const Eigen::MatrixXd& basis() const { return basis_; }
    const Eigen::MatrixXd& basis_inverse() const { return inv_; }
    double det() const { return det_; }
    double error_bound() const { return error_bound_; }
    const std::string& label() const { return label_; }

    bool has_module() const { return source_.has_value(); }
    const ModuleBasis& module() const;
    bool has_exact_rows() const { return exact_rows_.has_value(); }

    // Field element of an integer combination of the module basis.
    FieldElement element_at(std::span<const long long> coeffs) const;

    // Exact |disc| of the module basis (module-backed only): det = sqrt(|disc|).
    const Rat& module_disc() const { return disc_; }

    Eigen::VectorXd coords_of(std::span<const long long> coeffs) const;

    // Worst-case |float coordinate - true coordinate| for a coefficient
    // vector with sum of absolute values coeff_abs_sum and float coordinate
    // magnitude mag.
    double coord_margin(double coeff_abs_sum, double mag) const;

    bool exact_available() const { return has_module() || has_exact_rows(); }

    // Certified sign of (coordinate j of the point) - t.  Requires an exact
    // backend; throws PrecisionExhausted otherwise.
    int coord_cmp(std::span<const long long> coeffs, int j, const Rat& t) const;

    // Certified three-way comparison of coordinate j of two lattice points.
    int coord_cmp_points(std::span<const long long> a, std::span<const long long> b,
                         int j) const;

    std::string to_json() const;

private:
    Lattice() = default;

    Eigen::MatrixXd basis_, inv_;
    double det_ = 0.0;
    double error_bound_ = 0.0;
    double entry_halfwidth_ = 0.0;
    std::string label_;
    std::optional<ModuleBasis> source_;
    std::optional<std::vector<std::vector<Rat>>> exact_rows_;
    Rat disc_;
};

struct NmFloorResult {
    Rat min_abs_norm;
    LatticePoint witness;
    Rat algebraic_floor; // c_M^s lower bound from denominator data (0 if n/a)
    bool admissible;     // min_abs_norm > 0 on the searched ball
};

/**
 * Exact minimum of |Nm(gamma)| over nonzero coefficient vectors with
 * ||coeffs||_inf <= coeff_radius.  Upper-bounds Nm(Gamma); the algebraic
 * floor (1/d)^s with d the lcm of basis coordinate denominators bounds it
 * from below for module lattices.
 */
NmFloorResult nm_floor(const Lattice& g, long long coeff_radius);

} // namespace lat
