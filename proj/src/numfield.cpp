#include "lat/numfield.hpp"

#include <algorithm>

namespace lat {

std::shared_ptr<const Field> Field::parse(const FieldSpec& spec) {
    if (spec.coeffs.size() < 3)
        throw DegreeTooSmall("field degree must be >= 2, got degree " +
                             std::to_string(static_cast<int>(spec.coeffs.size()) - 1));
    if (spec.coeffs.back() != 1)
        throw NotMonic("leading coefficient must be 1");
    if (spec.precision_bits <= 0) throw BadInput("precision_bits must be positive");

    auto f = std::shared_ptr<Field>(new Field());
    f->degree_ = static_cast<int>(spec.coeffs.size()) - 1;
    f->precision_bits_ = spec.precision_bits;
    f->label_ = spec.label;
    f->minpoly_.reserve(spec.coeffs.size());
    for (const auto& c : spec.coeffs) f->minpoly_.push_back(Rat(c));

    SturmChain chain(f->minpoly_);
    int nreal = chain.count_real_roots();
    if (nreal != f->degree_)
        throw NotTotallyReal("polynomial has " + std::to_string(nreal) +
                             " distinct real roots, need " + std::to_string(f->degree_));

    f->roots_ = isolate_real_roots(f->minpoly_, spec.precision_bits);
    f->root_bits_ = spec.precision_bits;
    f->disc_ = poly_discriminant_monic(f->minpoly_);
    return f;
}

std::vector<QIv> Field::root_enclosures(int bits) const {
    // Sanity cap: rational bisection gains one bit per step, so hitting the
    // cap means a bug upstream, not a precision limit of the data.
    if (bits > 16384)
        throw PrecisionExhausted("requested " + std::to_string(bits) + " bits");
    std::lock_guard<std::mutex> lock(mu_);
    while (root_bits_ < bits) {
        Rat target = Rat(1) / (Int(1) << (root_bits_ + 1));
        for (auto& iv : roots_)
            while (iv.width() > target) iv = bisect_root_once(minpoly_, iv);
        ++root_bits_;
    }
    return roots_;
}

FieldElement Field::element(std::vector<Rat> coords) const {
    return FieldElement(shared_from_this(), std::move(coords));
}

FieldElement Field::from_rational(const Rat& c) const {
    std::vector<Rat> v(static_cast<size_t>(degree_), Rat(0));
    v[0] = c;
    return element(std::move(v));
}

FieldElement Field::zero() const { return from_rational(Rat(0)); }
FieldElement Field::one() const { return from_rational(Rat(1)); }

FieldElement Field::generator() const {
    std::vector<Rat> v(static_cast<size_t>(degree_), Rat(0));
    v[1] = 1;
    return element(std::move(v));
}

FieldElement::FieldElement(FieldPtr field, std::vector<Rat> coords)
    : field_(std::move(field)), coords_(std::move(coords)) {
    if (!field_) throw BadInput("element without a field");
    coords_.resize(static_cast<size_t>(field_->degree()), Rat(0));
}

void FieldElement::check_same_field(const FieldElement& o) const {
    if (field_ != o.field_)
        throw FieldMismatch("operands belong to different fields");
}

bool FieldElement::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(),
                       [](const Rat& c) { return c == 0; });
}

bool FieldElement::is_rational() const {
    for (size_t i = 1; i < coords_.size(); ++i)
        if (coords_[i] != 0) return false;
    return true;
}

bool FieldElement::is_integral() const {
    for (const Rat& c : char_poly())
        if (c.get_den() != 1) return false;
    return true;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same_field(o);
    std::vector<Rat> r = coords_;
    for (size_t i = 0; i < r.size(); ++i) r[i] += o.coords_[i];
    return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    check_same_field(o);
    std::vector<Rat> r = coords_;
    for (size_t i = 0; i < r.size(); ++i) r[i] -= o.coords_[i];
    return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator-() const {
    std::vector<Rat> r = coords_;
    for (auto& c : r) c = -c;
    return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same_field(o);
    QPoly prod = poly_mod_monic(poly_mul(coords_, o.coords_), field_->minpoly());
    return FieldElement(field_, std::move(prod));
}

FieldElement FieldElement::operator+(const Rat& c) const {
    std::vector<Rat> r = coords_;
    r[0] += c;
    return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator-(const Rat& c) const { return *this + (-c); }

FieldElement FieldElement::operator*(const Rat& c) const {
    std::vector<Rat> r = coords_;
    for (auto& x : r) x *= c;
    return FieldElement(field_, std::move(r));
}

bool FieldElement::operator==(const FieldElement& o) const {
    return field_ == o.field_ && coords_ == o.coords_;
}

// Multiplication-by-a matrix in the power basis: column i holds the
// coordinates of a * alpha^i reduced mod f.
static std::vector<std::vector<Rat>> mult_matrix(const FieldElement& a) {
    const int s = a.field()->degree();
    const QPoly& f = a.field()->minpoly();
    std::vector<std::vector<Rat>> m(static_cast<size_t>(s),
                                    std::vector<Rat>(static_cast<size_t>(s), Rat(0)));
    QPoly cur(a.coords().begin(), a.coords().end());
    cur = poly_trim(std::move(cur));
    for (int i = 0; i < s; ++i) {
        for (size_t j = 0; j < cur.size(); ++j) m[j][static_cast<size_t>(i)] = cur[j];
        if (i + 1 < s) {
            cur.insert(cur.begin(), Rat(0)); // multiply by alpha
            cur = poly_mod_monic(std::move(cur), f);
        }
    }
    return m;
}

Rat rat_det(std::vector<std::vector<Rat>> m) {
    const size_t n = m.size();
    Rat det(1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        Rat inv_p = 1 / m[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            Rat factor = m[r][col] * inv_p;
            for (size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
        }
    }
    return det;
}

Rat FieldElement::norm() const { return rat_det(mult_matrix(*this)); }

Rat FieldElement::trace() const {
    auto m = mult_matrix(*this);
    Rat t(0);
    for (size_t i = 0; i < m.size(); ++i) t += m[i][i];
    return t;
}

QPoly FieldElement::char_poly() const {
    // char poly of the multiplication matrix equals the minimal polynomial
    // of the element raised to s/deg; computed via Faddeev-LeVerrier (s is
    // tiny, exact rationals keep it honest).
    auto m = mult_matrix(*this);
    const size_t n = m.size();
    std::vector<std::vector<Rat>> mk(n, std::vector<Rat>(n, Rat(0)));
    for (size_t i = 0; i < n; ++i) mk[i][i] = 1;
    QPoly cp(n + 1, Rat(0));
    cp[n] = 1;
    std::vector<std::vector<Rat>> tmp(n, std::vector<Rat>(n, Rat(0)));
    Rat c(1);
    for (size_t k = 1; k <= n; ++k) {
        // tmp = m * mk
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                Rat acc(0);
                for (size_t l = 0; l < n; ++l) acc += m[i][l] * mk[l][j];
                tmp[i][j] = acc;
            }
        Rat tr(0);
        for (size_t i = 0; i < n; ++i) tr += tmp[i][i];
        c = -tr / Rat(static_cast<long>(k));
        cp[n - k] = c;
        mk = tmp;
        for (size_t i = 0; i < n; ++i) mk[i][i] += c;
    }
    return cp;
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw BadInput("inverse of zero field element");
    // a * (-1/cp[0]) * (cp[1] + cp[2] a + ... + cp[n] a^{n-1}) = 1
    QPoly cp = char_poly();
    Rat c0 = cp[0]; // = (-1)^s norm, nonzero for nonzero a
    QPoly g(cp.begin() + 1, cp.end());
    QPoly acoords(coords_.begin(), coords_.end());
    // evaluate g at the element: compose via Horner in the quotient ring
    QPoly acc;
    for (auto it = g.rbegin(); it != g.rend(); ++it) {
        acc = poly_mod_monic(poly_mul(acc, acoords), field_->minpoly());
        QPoly term{*it};
        acc = poly_add(acc, term);
    }
    QPoly result = poly_scale(acc, Rat(-1) / c0);
    return FieldElement(field_, std::move(result));
}

FieldElement FieldElement::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    FieldElement base = *this, acc = field_->one();
    unsigned long u = static_cast<unsigned long>(e);
    while (u) {
        if (u & 1) acc = acc * base;
        base = base * base;
        u >>= 1;
    }
    return acc;
}

std::vector<QIv> FieldElement::embed(int bits) const {
    const int s = field_->degree();
    QPoly p(coords_.begin(), coords_.end());
    p = poly_trim(std::move(p));
    Rat target = Rat(1) / (Int(1) << bits);
    // Interval Horner amplifies enclosure width roughly linearly in the
    // coefficient magnitudes; refine the root enclosures until the output
    // meets the target everywhere.
    int rb = std::max(bits, field_->precision_bits());
    for (;;) {
        auto roots = field_->root_enclosures(rb);
        std::vector<QIv> out;
        out.reserve(static_cast<size_t>(s));
        bool ok = true;
        for (int j = 0; j < s; ++j) {
            QIv v = poly_eval_iv(p, roots[static_cast<size_t>(j)]);
            if (v.width() > target) {
                ok = false;
                break;
            }
            out.push_back(std::move(v));
        }
        if (ok) return out;
        rb += 32;
    }
}

std::vector<double> FieldElement::embed_mid() const {
    auto ivs = embed(field_->precision_bits());
    std::vector<double> out;
    out.reserve(ivs.size());
    for (const auto& iv : ivs) out.push_back(iv.mid_double());
    return out;
}

EmbeddingMatrix embedding_matrix(const std::vector<FieldElement>& basis, int bits) {
    EmbeddingMatrix em;
    if (basis.empty()) return em;
    const int s = basis[0].field()->degree();
    em.entries.assign(static_cast<size_t>(s), {});
    std::vector<std::vector<QIv>> cols;
    cols.reserve(basis.size());
    for (const auto& b : basis) cols.push_back(b.embed(bits));
    for (int j = 0; j < s; ++j) {
        for (size_t i = 0; i < basis.size(); ++i) {
            const QIv& e = cols[i][static_cast<size_t>(j)];
            em.max_halfwidth = std::max(em.max_halfwidth, e.halfwidth_double());
            em.entries[static_cast<size_t>(j)].push_back(e);
        }
    }
    return em;
}

} // namespace lat
