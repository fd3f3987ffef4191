#pragma once

#include <vector>

#include "lat/rational.hpp"

namespace lat {

/**
 * Dense univariate polynomial over Q, coefficients ascending (constant
 * first).  The zero polynomial is the empty vector.
 */
using QPoly = std::vector<Rat>;

QPoly poly_trim(QPoly p);
int poly_deg(const QPoly& p); // -1 for the zero polynomial

QPoly poly_add(const QPoly& a, const QPoly& b);
QPoly poly_sub(const QPoly& a, const QPoly& b);
QPoly poly_mul(const QPoly& a, const QPoly& b);
QPoly poly_scale(const QPoly& a, const Rat& c);
QPoly poly_derivative(const QPoly& p);

// Euclidean division; b must be nonzero.  Returns {quotient, remainder}.
std::pair<QPoly, QPoly> poly_divmod(const QPoly& a, const QPoly& b);

// Remainder of a modulo a monic polynomial f (degree-reduction for field
// element arithmetic).
QPoly poly_mod_monic(QPoly a, const QPoly& f);

Rat poly_eval(const QPoly& p, const Rat& x);
QIv poly_eval_iv(const QPoly& p, const QIv& x); // interval Horner, exact endpoints

// Resultant Res(a, b) via the polynomial remainder sequence.
Rat poly_resultant(const QPoly& a, const QPoly& b);

// Discriminant of a monic polynomial: (-1)^{d(d-1)/2} Res(f, f').
Rat poly_discriminant_monic(const QPoly& f);

/**
 * Sturm sequence root machinery.  count_real_roots counts distinct real
 * roots in (lo, hi]; isolate_real_roots returns disjoint closed rational
 * intervals, each containing exactly one distinct real root, sorted
 * ascending, refined until width <= 2^-bits.
 */
struct SturmChain {
    std::vector<QPoly> seq;
    explicit SturmChain(const QPoly& f);
    int sign_changes_at(const Rat& x) const;
    int count_roots(const Rat& lo, const Rat& hi) const; // roots in (lo, hi]
    int count_real_roots() const;                        // all of R
};

std::vector<QIv> isolate_real_roots(const QPoly& f, int bits);

// Halve a root-isolating interval once; the polynomial must have exactly
// one root in iv and nonzero values at the endpoints unless the root is an
// endpoint (then the interval is already a point).
QIv bisect_root_once(const QPoly& f, const QIv& iv);

} // namespace lat
