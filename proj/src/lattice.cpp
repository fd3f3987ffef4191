#include "lat/lattice.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace lat {

Lattice Lattice::from_module(const ModuleBasis& m, int prec_bits) {
    if (m.elements.empty()) throw BadInput("empty module basis");
    const int s = m.elements[0].field()->degree();
    if (static_cast<int>(m.elements.size()) != s)
        throw BadInput("module basis must have s elements");

    Lattice g;
    g.source_ = m;
    g.label_ = m.label;

    // Exact rank check first: disc(basis) = det(Tr(b_i b_j)) vanishes iff
    // the embedded rows are dependent.
    std::vector<std::vector<Rat>> gram(static_cast<size_t>(s),
                                       std::vector<Rat>(static_cast<size_t>(s)));
    for (int i = 0; i < s; ++i)
        for (int k = 0; k < s; ++k)
            gram[static_cast<size_t>(i)][static_cast<size_t>(k)] =
                (m.elements[static_cast<size_t>(i)] * m.elements[static_cast<size_t>(k)])
                    .trace();
    g.disc_ = rat_det(gram);
    if (g.disc_ == 0) throw RankDeficient("module basis is not full rank");

    g.basis_.resize(s, s);
    EmbeddingMatrix em = embedding_matrix(m.elements, prec_bits);
    for (int j = 0; j < s; ++j)
        for (int i = 0; i < s; ++i)
            g.basis_(i, j) = em.entries[static_cast<size_t>(j)][static_cast<size_t>(i)]
                                 .mid_double();
    g.entry_halfwidth_ = em.max_halfwidth;

    g.det_ = std::abs(g.basis_.determinant());
    double det_exact = std::sqrt(std::abs(rat_to_double(g.disc_)));
    g.error_bound_ =
        std::max(1e-12 * (1.0 + det_exact),
                 em.max_halfwidth * 4.0 * s * s * (1.0 + g.basis_.cwiseAbs().maxCoeff()));
    if (std::abs(g.det_ - det_exact) > g.error_bound_)
        throw PrecisionExhausted("float determinant drifted from sqrt(|disc|)");
    g.inv_ = g.basis_.inverse();
    return g;
}

Lattice Lattice::from_matrix(const Eigen::MatrixXd& rows, std::string label) {
    if (rows.rows() != rows.cols() || rows.rows() < 1)
        throw BadInput("basis matrix must be square");
    Lattice g;
    g.basis_ = rows;
    g.label_ = std::move(label);
    g.det_ = std::abs(rows.determinant());
    if (!(g.det_ > 1e-300)) throw RankDeficient("injected basis matrix is singular");
    g.error_bound_ = 1e-12 * (1.0 + g.det_);
    g.inv_ = rows.inverse();
    const int s = g.dim();
    std::vector<std::vector<Rat>> ex(static_cast<size_t>(s),
                                     std::vector<Rat>(static_cast<size_t>(s)));
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            ex[static_cast<size_t>(i)][static_cast<size_t>(j)] = rat_of_double(rows(i, j));
    g.exact_rows_ = std::move(ex);
    return g;
}

Lattice Lattice::dual() const {
    const int s = dim();
    if (!(det_ > 1e-300)) throw SingularBasis("cannot dualize a singular basis");
    Lattice d;
    d.basis_ = basis_.transpose().inverse();
    d.det_ = std::abs(d.basis_.determinant());
    d.inv_ = d.basis_.inverse();
    d.label_ = label_ + "^dual";
    d.error_bound_ = std::max(1e-12, error_bound_ / (det_ * det_));
    d.entry_halfwidth_ = 0.0;
    if (exact_rows_) {
        // Exact inverse transpose keeps the rational backend through duals.
        const auto& rows = *exact_rows_;
        std::vector<std::vector<Rat>> aug(static_cast<size_t>(s),
                                          std::vector<Rat>(static_cast<size_t>(2 * s), Rat(0)));
        for (int i = 0; i < s; ++i) {
            for (int j = 0; j < s; ++j)
                aug[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    rows[static_cast<size_t>(j)][static_cast<size_t>(i)]; // transpose
            aug[static_cast<size_t>(i)][static_cast<size_t>(s + i)] = 1;
        }
        // Gauss-Jordan
        for (int col = 0; col < s; ++col) {
            int piv = col;
            while (piv < s && aug[static_cast<size_t>(piv)][static_cast<size_t>(col)] == 0)
                ++piv;
            if (piv == s) throw SingularBasis("exact basis matrix is singular");
            std::swap(aug[static_cast<size_t>(piv)], aug[static_cast<size_t>(col)]);
            Rat p = aug[static_cast<size_t>(col)][static_cast<size_t>(col)];
            for (int j = 0; j < 2 * s; ++j) aug[static_cast<size_t>(col)][static_cast<size_t>(j)] /= p;
            for (int r = 0; r < s; ++r) {
                if (r == col) continue;
                Rat f = aug[static_cast<size_t>(r)][static_cast<size_t>(col)];
                if (f == 0) continue;
                for (int j = 0; j < 2 * s; ++j)
                    aug[static_cast<size_t>(r)][static_cast<size_t>(j)] -=
                        f * aug[static_cast<size_t>(col)][static_cast<size_t>(j)];
            }
        }
        std::vector<std::vector<Rat>> inv_t(static_cast<size_t>(s),
                                            std::vector<Rat>(static_cast<size_t>(s)));
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j)
                inv_t[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    aug[static_cast<size_t>(i)][static_cast<size_t>(s + j)];
        // Snap float rows to the exact values so both views agree.
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j)
                d.basis_(i, j) = rat_to_double(inv_t[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        d.exact_rows_ = std::move(inv_t);
        d.det_ = std::abs(d.basis_.determinant());
        d.inv_ = d.basis_.inverse();
    }
    return d;
}

const ModuleBasis& Lattice::module() const {
    if (!source_) throw BadInput("lattice has no module source");
    return *source_;
}

FieldElement Lattice::element_at(std::span<const long long> coeffs) const {
    const auto& mb = module();
    FieldElement acc = mb.elements[0].field()->zero();
    for (size_t i = 0; i < mb.elements.size(); ++i)
        if (coeffs[i] != 0) acc = acc + mb.elements[i] * Rat(static_cast<long>(coeffs[i]));
    return acc;
}

Eigen::VectorXd Lattice::coords_of(std::span<const long long> coeffs) const {
    const int s = dim();
    Eigen::VectorXd y = Eigen::VectorXd::Zero(s);
    for (int i = 0; i < s; ++i)
        if (coeffs[static_cast<size_t>(i)] != 0)
            y += static_cast<double>(coeffs[static_cast<size_t>(i)]) * basis_.row(i).transpose();
    return y;
}

double Lattice::coord_margin(double coeff_abs_sum, double mag) const {
    return entry_halfwidth_ * coeff_abs_sum +
           1e-12 * (coeff_abs_sum * basis_.cwiseAbs().maxCoeff() + std::abs(mag) + 1.0);
}

int Lattice::coord_cmp(std::span<const long long> coeffs, int j, const Rat& t) const {
    if (exact_rows_) {
        Rat v(0);
        for (size_t i = 0; i < exact_rows_->size(); ++i)
            if (coeffs[i] != 0)
                v += Rat(static_cast<long>(coeffs[i])) * (*exact_rows_)[i][static_cast<size_t>(j)];
        return sgn(v - t);
    }
    if (!source_) throw PrecisionExhausted("lattice has no exact backend for face decision");
    FieldElement d = element_at(coeffs) - t;
    if (d.is_zero()) return 0;
    for (int bits = 60;; bits += 60) {
        QIv iv = d.embed(bits)[static_cast<size_t>(j)];
        if (!iv.contains_zero()) return sgn(iv.lo) > 0 ? 1 : -1;
        if (bits > 4096)
            throw PrecisionExhausted("sign of nonzero coordinate did not resolve");
    }
}

int Lattice::coord_cmp_points(std::span<const long long> a, std::span<const long long> b,
                              int j) const {
    if (exact_rows_) {
        Rat v(0);
        for (size_t i = 0; i < exact_rows_->size(); ++i) {
            long long dc = a[i] - b[i];
            if (dc != 0) v += Rat(static_cast<long>(dc)) * (*exact_rows_)[i][static_cast<size_t>(j)];
        }
        return sgn(v);
    }
    if (!source_) throw PrecisionExhausted("lattice has no exact backend for comparisons");
    std::vector<long long> dc(a.size());
    for (size_t i = 0; i < a.size(); ++i) dc[i] = a[i] - b[i];
    return coord_cmp(dc, j, Rat(0));
}

std::string Lattice::to_json() const {
    nlohmann::json j;
    const int s = dim();
    std::vector<std::vector<double>> rows(static_cast<size_t>(s),
                                          std::vector<double>(static_cast<size_t>(s)));
    for (int i = 0; i < s; ++i)
        for (int k = 0; k < s; ++k) rows[static_cast<size_t>(i)][static_cast<size_t>(k)] = basis_(i, k);
    j["basis_midpoints"] = rows;
    j["det"] = det_;
    j["source_label"] = label_;
    j["error_bound"] = error_bound_;
    return j.dump(2);
}

NmFloorResult nm_floor(const Lattice& g, long long coeff_radius) {
    if (coeff_radius < 1) throw BadInput("coeff_radius must be >= 1");
    const int s = g.dim();
    double tuples = std::pow(2.0 * static_cast<double>(coeff_radius) + 1.0, s);
    if (tuples > 5e7) throw VolumeLimitExceeded("coefficient ball too large to enumerate");

    NmFloorResult res;
    res.min_abs_norm = Rat(-1);
    res.algebraic_floor = Rat(0);

    if (g.has_module()) {
        // lcm of coordinate denominators d gives d*b_i integral, hence
        // |Nm| >= 1/d^s on the module.
        Int d(1);
        for (const auto& b : g.module().elements)
            for (const auto& c : b.coords()) d = lcm(d, c.get_den());
        // The lcm certificate only applies when the scaled elements are
        // algebraic integers; the power basis generator is integral since
        // the minimal polynomial is monic with integer coefficients.
        Rat floor = Rat(1);
        for (int i = 0; i < s; ++i) floor /= Rat(d);
        res.algebraic_floor = floor;
    }

    std::vector<long long> c(static_cast<size_t>(s), -coeff_radius);
    bool done = false;
    while (!done) {
        bool zero = true, lexpos = false;
        for (int i = 0; i < s; ++i) {
            if (c[static_cast<size_t>(i)] != 0) {
                zero = false;
                lexpos = c[static_cast<size_t>(i)] > 0;
                break;
            }
        }
        if (!zero && lexpos) {
            Rat nm;
            if (g.has_module()) {
                nm = abs(g.element_at(c).norm());
            } else {
                // Product of exact coordinates (rational backend), or of
                // float coordinates as a last resort.
                if (g.has_exact_rows()) {
                    nm = Rat(1);
                    for (int j = 0; j < s; ++j) {
                        Rat v(0);
                        for (int i = 0; i < s; ++i)
                            if (c[static_cast<size_t>(i)] != 0)
                                v += Rat(static_cast<long>(c[static_cast<size_t>(i)])) *
                                     rat_of_double(g.basis()(i, j));
                        nm *= v;
                    }
                    nm = abs(nm);
                } else {
                    Eigen::VectorXd y = g.coords_of(c);
                    double p = 1.0;
                    for (int j = 0; j < s; ++j) p *= y(j);
                    nm = abs(rat_of_double(p));
                }
            }
            if (res.min_abs_norm < 0 || nm < res.min_abs_norm) {
                res.min_abs_norm = nm;
                res.witness = LatticePoint{c, g.coords_of(c)};
            }
        }
        // advance odometer
        int i = s - 1;
        while (i >= 0) {
            if (++c[static_cast<size_t>(i)] <= coeff_radius) break;
            c[static_cast<size_t>(i)] = -coeff_radius;
            --i;
        }
        done = (i < 0);
    }
    res.admissible = res.min_abs_norm > 0;
    return res;
}

} // namespace lat
