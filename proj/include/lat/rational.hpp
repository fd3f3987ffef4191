#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>

#include "lat/errors.hpp"

namespace lat {

using Rat = mpq_class;
using Int = mpz_class;

// Doubles convert to rationals exactly (every finite double is dyadic).
inline Rat rat_of_double(double x) {
    if (!std::isfinite(x)) throw BadInput("non-finite value has no rational image");
    return Rat(x);
}

// Parse "p", "-p" or "p/q" into an exact rational.
Rat rat_parse(const std::string& text);

inline double rat_to_double(const Rat& q) { return q.get_d(); }

/**
 * Closed rational interval [lo, hi].  All endpoint arithmetic is exact, so
 * enclosures computed through these never silently lose containment.
 */
struct QIv {
    Rat lo, hi;

    QIv() : lo(0), hi(0) {}
    QIv(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {}
    static QIv point(const Rat& v) { return QIv(v, v); }

    Rat width() const { return hi - lo; }
    Rat mid() const { return (lo + hi) / 2; }
    double mid_double() const { return rat_to_double(mid()); }
    double halfwidth_double() const { return rat_to_double(width() / 2); }

    bool contains(const Rat& v) const { return lo <= v && v <= hi; }
    bool contains_zero() const { return sgn(lo) <= 0 && sgn(hi) >= 0; }

    QIv operator+(const QIv& o) const { return QIv(lo + o.lo, hi + o.hi); }
    QIv operator-(const QIv& o) const { return QIv(lo - o.hi, hi - o.lo); }
    QIv operator-() const { return QIv(-hi, -lo); }
    QIv operator*(const QIv& o) const;
    QIv operator*(const Rat& c) const {
        return sgn(c) >= 0 ? QIv(lo * c, hi * c) : QIv(hi * c, lo * c);
    }
    QIv operator+(const Rat& c) const { return QIv(lo + c, hi + c); }
};

} // namespace lat
