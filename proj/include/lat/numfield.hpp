#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "lat/poly.hpp"

namespace lat {

/**
 * Defining data for a totally real number field K = Q[x]/(f): a monic
 * integer polynomial (constant term first) plus the certified precision
 * target for the real embeddings.
 */
struct FieldSpec {
    std::vector<Int> coeffs;
    int precision_bits = 60;
    std::string label;
};

class FieldElement;

/**
 * A totally real field of degree s >= 2 with its s real roots isolated in
 * certified rational intervals, sorted ascending.  Root enclosures refine
 * on demand; refinement is cached under a mutex so all operations stay
 * safe to call concurrently.
 */
class Field : public std::enable_shared_from_this<Field> {
public:
    static std::shared_ptr<const Field> parse(const FieldSpec& spec);

    int degree() const { return degree_; }
    const QPoly& minpoly() const { return minpoly_; }
    const std::string& label() const { return label_; }
    int precision_bits() const { return precision_bits_; }
    const Rat& discriminant() const { return disc_; }

    // Certified enclosures of the s real roots, each of width <= 2^-bits.
    std::vector<QIv> root_enclosures(int bits) const;

    FieldElement element(std::vector<Rat> coords) const;
    FieldElement from_rational(const Rat& c) const;
    FieldElement zero() const;
    FieldElement one() const;
    FieldElement generator() const; // the class of x

private:
    Field() = default;

    QPoly minpoly_;
    int degree_ = 0;
    int precision_bits_ = 60;
    std::string label_;
    Rat disc_;

    mutable std::mutex mu_;
    mutable std::vector<QIv> roots_;
    mutable int root_bits_ = 0;
};

using FieldPtr = std::shared_ptr<const Field>;

/**
 * Element of a field in the power basis 1, alpha, ..., alpha^{s-1} with
 * exact rational coordinates, always reduced mod the minimal polynomial.
 */
class FieldElement {
public:
    FieldElement() = default;
    FieldElement(FieldPtr field, std::vector<Rat> coords);

    const FieldPtr& field() const { return field_; }
    const std::vector<Rat>& coords() const { return coords_; }

    bool is_zero() const;
    bool is_rational() const; // lies in Q
    bool is_integral() const; // algebraic integer (integer char poly)

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement operator+(const Rat& c) const;
    FieldElement operator-(const Rat& c) const;
    FieldElement operator*(const Rat& c) const;
    bool operator==(const FieldElement& o) const;

    FieldElement inverse() const; // nonzero elements only
    FieldElement pow(long e) const;

    Rat norm() const;  // det of the multiplication matrix (exact)
    Rat trace() const; // trace of the multiplication matrix (exact)

    // Characteristic polynomial of the multiplication matrix, monic,
    // constant first.
    QPoly char_poly() const;

    // Certified enclosures of sigma_j(a), j = 1..s (root order), each of
    // width <= 2^-bits.
    std::vector<QIv> embed(int bits) const;

    // Midpoints of embed() at the field's default precision.
    std::vector<double> embed_mid() const;

private:
    void check_same_field(const FieldElement& o) const;

    FieldPtr field_;
    std::vector<Rat> coords_;
};

/**
 * Certified embedding matrix: entry (j,i) encloses sigma_j(b_i) for a
 * basis b_1..b_s.
 */
struct EmbeddingMatrix {
    std::vector<std::vector<QIv>> entries; // [j][i]
    double max_halfwidth = 0.0;
};

EmbeddingMatrix embedding_matrix(const std::vector<FieldElement>& basis, int bits);

// Exact s x s rational determinant (Gaussian elimination).
Rat rat_det(std::vector<std::vector<Rat>> m);

} // namespace lat
