#include "lat/poly.hpp"

#include <algorithm>

namespace lat {

QPoly poly_trim(QPoly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

int poly_deg(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

QPoly poly_add(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), Rat(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return poly_trim(std::move(r));
}

QPoly poly_sub(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), Rat(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return poly_trim(std::move(r));
}

QPoly poly_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return poly_trim(std::move(r));
}

QPoly poly_scale(const QPoly& a, const Rat& c) {
    if (c == 0) return {};
    QPoly r = a;
    for (auto& x : r) x *= c;
    return r;
}

QPoly poly_derivative(const QPoly& p) {
    if (p.size() <= 1) return {};
    QPoly r(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * Rat(static_cast<long>(i));
    return poly_trim(std::move(r));
}

std::pair<QPoly, QPoly> poly_divmod(const QPoly& a, const QPoly& b) {
    if (b.empty()) throw BadInput("polynomial division by zero");
    QPoly rem = a, quo;
    int db = poly_deg(b);
    if (poly_deg(rem) >= db) quo.assign(rem.size() - b.size() + 1, Rat(0));
    while (poly_deg(rem) >= db) {
        int dr = poly_deg(rem);
        Rat c = rem[dr] / b[db];
        quo[dr - db] = c;
        for (int i = 0; i <= db; ++i) rem[dr - db + i] -= c * b[i];
        rem = poly_trim(std::move(rem));
    }
    return {poly_trim(std::move(quo)), std::move(rem)};
}

QPoly poly_mod_monic(QPoly a, const QPoly& f) {
    int df = poly_deg(f);
    a = poly_trim(std::move(a));
    while (poly_deg(a) >= df) {
        int da = poly_deg(a);
        Rat c = a[da]; // f is monic
        for (int i = 0; i <= df; ++i) a[da - df + i] -= c * f[i];
        a = poly_trim(std::move(a));
    }
    return a;
}

Rat poly_eval(const QPoly& p, const Rat& x) {
    Rat acc(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

QIv poly_eval_iv(const QPoly& p, const QIv& x) {
    QIv acc = QIv::point(Rat(0));
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Rat poly_resultant(const QPoly& a0, const QPoly& b0) {
    QPoly a = poly_trim(a0), b = poly_trim(b0);
    if (a.empty() || b.empty()) return Rat(0);
    Rat res(1);
    while (true) {
        int da = poly_deg(a), db = poly_deg(b);
        if (db == 0) {
            Rat lb = b[0], p(1);
            for (int i = 0; i < da; ++i) p *= lb;
            return res * p;
        }
        QPoly r = poly_divmod(a, b).second;
        if (r.empty()) return Rat(0);
        int dr = poly_deg(r);
        // Res(a,b) = (-1)^{da*db} lc(b)^{da-dr} Res(b,r)
        Rat lb = b[db], p(1);
        for (int i = 0; i < da - dr; ++i) p *= lb;
        if ((da & 1) && (db & 1)) res = -res;
        res *= p;
        a = std::move(b);
        b = std::move(r);
    }
}

Rat poly_discriminant_monic(const QPoly& f) {
    int d = poly_deg(f);
    if (d < 1) return Rat(0);
    Rat r = poly_resultant(f, poly_derivative(f));
    if (((d * (d - 1)) / 2) & 1) r = -r;
    return r;
}

SturmChain::SturmChain(const QPoly& f) {
    seq.push_back(poly_trim(f));
    seq.push_back(poly_derivative(seq[0]));
    while (!seq.back().empty() && poly_deg(seq.back()) > 0) {
        QPoly r = poly_divmod(seq[seq.size() - 2], seq.back()).second;
        if (r.empty()) break;
        for (auto& c : r) c = -c;
        seq.push_back(std::move(r));
    }
}

int SturmChain::sign_changes_at(const Rat& x) const {
    int changes = 0, prev = 0;
    for (const auto& p : seq) {
        if (p.empty()) continue;
        int s = sgn(poly_eval(p, x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

int SturmChain::count_roots(const Rat& lo, const Rat& hi) const {
    return sign_changes_at(lo) - sign_changes_at(hi);
}

int SturmChain::count_real_roots() const {
    // Cauchy bound on root magnitudes from the defining polynomial.
    const QPoly& f = seq[0];
    if (f.empty() || poly_deg(f) == 0) return 0;
    Rat lead = f.back();
    Rat m(0);
    for (size_t i = 0; i + 1 < f.size(); ++i) {
        Rat a = abs(f[i] / lead);
        if (a > m) m = a;
    }
    Rat bound = m + 1;
    return count_roots(-bound, bound);
}

QIv bisect_root_once(const QPoly& f, const QIv& iv) {
    if (iv.lo == iv.hi) return iv;
    Rat mid = iv.mid();
    Rat fm = poly_eval(f, mid);
    if (fm == 0) return QIv::point(mid);
    Rat flo = poly_eval(f, iv.lo);
    if (flo == 0) return QIv::point(iv.lo);
    if (sgn(flo) != sgn(fm)) return QIv(iv.lo, mid);
    return QIv(mid, iv.hi);
}

std::vector<QIv> isolate_real_roots(const QPoly& f0, int bits) {
    QPoly f = poly_trim(f0);
    if (poly_deg(f) < 1) return {};
    SturmChain chain(f);

    Rat lead = f.back();
    Rat m(0);
    for (size_t i = 0; i + 1 < f.size(); ++i) {
        Rat a = abs(f[i] / lead);
        if (a > m) m = a;
    }
    Rat bound = m + 1;

    std::vector<QIv> isolated;
    // Worklist bisection until every interval (lo, hi] holds one root.
    std::vector<QIv> work{QIv(-bound, bound)};
    while (!work.empty()) {
        QIv iv = work.back();
        work.pop_back();
        int n = chain.count_roots(iv.lo, iv.hi);
        if (n == 0) continue;
        if (n == 1) {
            isolated.push_back(iv);
            continue;
        }
        Rat mid = iv.mid();
        work.emplace_back(iv.lo, mid);
        work.emplace_back(mid, iv.hi);
    }
    std::sort(isolated.begin(), isolated.end(),
              [](const QIv& a, const QIv& b) { return a.lo < b.lo; });

    // Refine each isolating interval.  Intervals are half-open (lo, hi] from
    // the Sturm count, so f(hi) = 0 is possible; endpoints hitting the root
    // collapse to a point via bisect_root_once.
    Rat target = Rat(1) / (Int(1) << bits);
    for (auto& iv : isolated) {
        // Convert to an interval with a sign change (or exact endpoint).
        while (iv.width() > target) iv = bisect_root_once(f, iv);
    }
    return isolated;
}

} // namespace lat
