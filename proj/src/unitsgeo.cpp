#include "lat/unitsgeo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

namespace lat {

UnitSystem UnitSystem::build(std::vector<FieldElement> units, double snap_tol) {
    if (units.empty()) throw BadInput("unit system needs at least one unit");
    UnitSystem u;
    u.units_ = std::move(units);
    u.snap_ = snap_tol;
    u.s_ = u.units_[0].field()->degree();
    if (static_cast<int>(u.units_.size()) != u.s_ - 1)
        throw BadInput("expected s-1 fundamental units");

    for (const auto& e : u.units_) {
        Rat n = e.norm();
        if (n != 1 && n != -1) throw BadInput("unit with |norm| != 1");
    }

    u.log_rows_.resize(u.s_ - 1, u.s_);
    for (int i = 0; i + 1 < u.s_; ++i) {
        auto mids = u.units_[static_cast<size_t>(i)].embed_mid();
        double row_sum = 0.0;
        for (int j = 0; j < u.s_; ++j) {
            double l = std::log(std::fabs(mids[static_cast<size_t>(j)]));
            u.log_rows_(i, j) = l;
            row_sum += l;
        }
        if (std::fabs(row_sum) > 1e-9)
            throw BadInput("unit log row does not sum to zero");
    }

    Eigen::MatrixXd minor = u.log_rows_.leftCols(u.s_ - 1);
    u.regulator_ = std::fabs(minor.determinant());
    if (u.regulator_ <= 1e-6)
        throw SingularUnitBasis("regulator below independence threshold");

    Eigen::MatrixXd a(u.s_, u.s_);
    a.col(0) = Eigen::VectorXd::Ones(u.s_);
    for (int i = 0; i + 1 < u.s_; ++i) a.col(i + 1) = u.log_rows_.row(i).transpose();
    u.lu_ = Eigen::PartialPivLU<Eigen::MatrixXd>(a);
    return u;
}

double UnitSystem::snapped(double xi) const {
    double r = std::round(xi);
    return (std::fabs(xi - r) <= snap_) ? r : xi;
}

LogDecomposition UnitSystem::decompose(std::span<const double> y) const {
    if (static_cast<int>(y.size()) != s_) throw BadInput("dimension mismatch");
    Eigen::VectorXd l(s_);
    for (int j = 0; j < s_; ++j) {
        if (y[static_cast<size_t>(j)] == 0.0 || !std::isfinite(y[static_cast<size_t>(j)]))
            throw ZeroCoordinate("log embedding needs nonzero coordinates");
        l(j) = std::log(std::fabs(y[static_cast<size_t>(j)]));
    }
    Eigen::VectorXd sol = lu_.solve(l);
    LogDecomposition d;
    d.xi = sol(0);
    d.xis.assign(sol.data() + 1, sol.data() + s_);
    d.sign_first = (y[0] > 0) ? 1 : -1;
    return d;
}

bool UnitSystem::in_fundamental_domain(std::span<const double> y) const {
    if (static_cast<int>(y.size()) != s_) throw BadInput("dimension mismatch");
    for (double v : y)
        if (v == 0.0) return false;
    if (!(y[0] > 0.0)) return false;
    LogDecomposition d = decompose(y);
    for (double xi : d.xis) {
        double sv = snapped(xi);
        if (sv < 0.0 || sv >= 1.0) return false;
    }
    return true;
}

FieldElement UnitSystem::unit_power(std::span<const long long> k) const {
    FieldElement acc = units_[0].field()->one();
    for (size_t i = 0; i < units_.size(); ++i)
        if (k[i] != 0) acc = acc * units_[i].pow(static_cast<long>(k[i]));
    return acc;
}

ReduceResult UnitSystem::reduce_to_F(std::span<const double> y) const {
    if (static_cast<int>(y.size()) != s_) throw BadInput("dimension mismatch");
    for (double v : y)
        if (v == 0.0 || !std::isfinite(v)) throw ZeroNorm("point has a zero coordinate");

    LogDecomposition d = decompose(y);
    ReduceResult res;
    res.k.resize(static_cast<size_t>(s_ - 1));
    for (int i = 0; i + 1 < s_; ++i)
        res.k[static_cast<size_t>(i)] =
            static_cast<long long>(std::floor(snapped(d.xis[static_cast<size_t>(i)])));

    auto apply = [&](std::span<const long long> k) {
        std::vector<long long> neg(k.begin(), k.end());
        for (auto& v : neg) v = -v;
        auto mids = unit_power(neg).embed_mid();
        std::vector<double> out(static_cast<size_t>(s_));
        for (int j = 0; j < s_; ++j)
            out[static_cast<size_t>(j)] = y[static_cast<size_t>(j)] * mids[static_cast<size_t>(j)];
        bool flip = out[0] < 0.0;
        if (flip)
            for (auto& v : out) v = -v;
        res.sign_flip = flip;
        return out;
    };

    res.y_reduced = apply(res.k);
    // Float drift at the [0,1) boundary can push a xi just outside; one
    // corrective step per coordinate restores membership.
    for (int round = 0; round < 2 * s_; ++round) {
        if (in_fundamental_domain(res.y_reduced)) return res;
        LogDecomposition dr = decompose(res.y_reduced);
        bool adjusted = false;
        for (int i = 0; i + 1 < s_; ++i) {
            double sv = snapped(dr.xis[static_cast<size_t>(i)]);
            if (sv < 0.0) {
                res.k[static_cast<size_t>(i)] -= 1;
                adjusted = true;
            } else if (sv >= 1.0) {
                res.k[static_cast<size_t>(i)] += 1;
                adjusted = true;
            }
        }
        if (!adjusted) break;
        res.y_reduced = apply(res.k);
    }
    if (!in_fundamental_domain(res.y_reduced))
        throw PrecisionExhausted("fundamental-domain reduction did not stabilize");
    return res;
}

ElementReduceResult UnitSystem::reduce_element(const FieldElement& e) const {
    if (e.is_zero()) throw ZeroNorm("cannot reduce the zero element");
    auto mids = e.embed_mid();
    ReduceResult r = reduce_to_F(mids);
    ElementReduceResult out;
    out.k = r.k;
    std::vector<long long> neg(r.k);
    for (auto& v : neg) v = -v;
    out.element = e * unit_power(neg);
    // sign from the exact element's first embedding, not the float path
    auto em = out.element.embed(52);
    bool flip = em[0].hi < 0;
    if (em[0].contains_zero()) {
        // refine: a nonzero element has nonzero embeddings
        for (int bits = 120; em[0].contains_zero(); bits += 60)
            em = out.element.embed(bits);
        flip = em[0].hi < 0;
    }
    if (flip) out.element = -out.element;
    out.sign_flip = flip;
    return out;
}

long long UnitSystem::count_unit_powers(double t, PowerCountMode mode) const {
    if (!(t > 0.0)) throw BadInput("t must be positive");
    const int m = s_ - 1; // free exponents
    // Constraints: for all j in [0, s): sum_i k_i * L(i,j) <= t   (max_le)
    //              for all j: sum_i k_i * L(i,j) >= -t            (min_ge)
    // Both polytopes are compact since the unit logs are independent and
    // each row of L sums to zero.  Bounding box from vertex enumeration.
    const double bound_rhs = t;
    std::vector<double> kmax(static_cast<size_t>(m), 0.0);

    // vertices: all m-subsets of the s constraints taken as equalities
    std::vector<int> idx(static_cast<size_t>(m), 0);
    std::function<void(int, int)> choose = [&](int start, int depth) {
        if (depth == m) {
            Eigen::MatrixXd a(m, m);
            Eigen::VectorXd b(m);
            for (int r = 0; r < m; ++r) {
                for (int i = 0; i < m; ++i) a(r, i) = log_rows_(i, idx[static_cast<size_t>(r)]);
                b(r) = bound_rhs;
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
            if (lu.rank() < m) return;
            Eigen::VectorXd v = lu.solve(b);
            for (int i = 0; i < m; ++i)
                kmax[static_cast<size_t>(i)] =
                    std::max(kmax[static_cast<size_t>(i)], std::fabs(v(i)));
            return;
        }
        for (int j = start; j < s_; ++j) {
            idx[static_cast<size_t>(depth)] = j;
            choose(j + 1, depth + 1);
        }
    };
    choose(0, 0);

    std::vector<long long> lo(static_cast<size_t>(m)), hi(static_cast<size_t>(m));
    double cand = 1.0;
    for (int i = 0; i < m; ++i) {
        long long b = static_cast<long long>(std::floor(kmax[static_cast<size_t>(i)] + 1.0));
        lo[static_cast<size_t>(i)] = -b;
        hi[static_cast<size_t>(i)] = b;
        cand *= static_cast<double>(2 * b + 1);
    }
    if (cand > 5e7) throw VolumeLimitExceeded("unit power box too large");

    long long count = 0;
    std::vector<long long> k(static_cast<size_t>(m), 0);
    std::function<void(int)> walk = [&](int depth) {
        if (depth == m) {
            bool ok = true;
            for (int j = 0; j < s_ && ok; ++j) {
                double dot = 0.0;
                for (int i = 0; i < m; ++i)
                    dot += static_cast<double>(k[static_cast<size_t>(i)]) * log_rows_(i, j);
                ok = (mode == PowerCountMode::max_le) ? (dot <= t) : (dot >= -t);
            }
            if (ok) ++count;
            return;
        }
        for (long long v = lo[static_cast<size_t>(depth)]; v <= hi[static_cast<size_t>(depth)]; ++v) {
            k[static_cast<size_t>(depth)] = v;
            walk(depth + 1);
        }
    };
    walk(0);
    return count;
}

NormalizeResult UnitSystem::normalize_box(std::span<const double> nvec,
                                          long long search_radius) const {
    if (static_cast<int>(nvec.size()) != s_) throw BadInput("dimension mismatch");
    if (search_radius < 1) throw BadInput("search_radius must be >= 1");
    double prod = 1.0;
    for (double v : nvec) {
        if (!(v > 0.0)) throw BadInput("box lengths must be positive");
        prod *= v;
    }
    const double root = std::pow(prod, 1.0 / s_);
    const int m = s_ - 1;

    NormalizeResult best;
    best.c3_achieved = std::numeric_limits<double>::infinity();

    std::vector<long long> k(static_cast<size_t>(m), -search_radius);
    bool done = false;
    while (!done) {
        auto mids = unit_power(k).embed_mid();
        std::vector<double> np(static_cast<size_t>(s_));
        double cost = 0.0;
        for (int j = 0; j < s_; ++j) {
            np[static_cast<size_t>(j)] =
                nvec[static_cast<size_t>(j)] * std::fabs(mids[static_cast<size_t>(j)]);
            double r = np[static_cast<size_t>(j)] / root;
            cost = std::max(cost, std::max(r, 1.0 / r));
        }
        if (cost < best.c3_achieved) {
            best.c3_achieved = cost;
            best.k.assign(k.begin(), k.end());
            best.nvec_prime = np;
        }
        int i = m - 1;
        while (i >= 0) {
            if (++k[static_cast<size_t>(i)] <= search_radius) break;
            k[static_cast<size_t>(i)] = -search_radius;
            --i;
        }
        done = (i < 0);
    }

    double prod2 = 1.0;
    for (double v : best.nvec_prime) prod2 *= v;
    if (std::fabs(prod2 - prod) > 1e-9 * (1.0 + std::fabs(prod)))
        throw PrecisionExhausted("normalize_box failed to preserve the product");
    return best;
}

std::vector<FDomainPoint> enumerate_F_norm_bounded(const Lattice& g, const UnitSystem& u,
                                                   const Rat& max_abs_norm,
                                                   long long coeff_radius,
                                                   bool* incomplete) {
    if (!g.has_module()) throw BadInput("fundamental-domain enumeration needs a module lattice");
    if (coeff_radius < 1) throw BadInput("coeff_radius must be >= 1");
    const int s = g.dim();
    double tuples = std::pow(2.0 * static_cast<double>(coeff_radius) + 1.0, s);
    if (tuples > 5e7) throw VolumeLimitExceeded("coefficient ball too large");

    // Completeness check: points of F with |Nm| <= M have |y_i| bounded by
    // M^{1/s} exp(sum_j max(l_i(eps_j), 0)); map through the inverse basis
    // to the coefficient radius that would be needed.
    if (incomplete) {
        double mroot = std::pow(std::max(1e-300, rat_to_double(max_abs_norm)),
                                1.0 / static_cast<double>(s));
        double needed = 0.0;
        const auto& inv = g.basis_inverse();
        for (int i = 0; i < s; ++i) {
            double acc = 0.0;
            for (int j = 0; j < s; ++j) {
                double lplus = 0.0;
                for (int r = 0; r + 1 < s; ++r) lplus += std::max(u.log_rows()(r, j), 0.0);
                acc += std::fabs(inv(j, i)) * mroot * std::exp(lplus);
            }
            needed = std::max(needed, acc);
        }
        *incomplete = static_cast<double>(coeff_radius) < needed;
    }

    // Exact module coordinates of a field element via the basis matrix.
    const auto& basis = g.module().elements;
    auto module_coords = [&](const FieldElement& e) -> std::vector<long long> {
        std::vector<std::vector<Rat>> a(static_cast<size_t>(s),
                                        std::vector<Rat>(static_cast<size_t>(s + 1)));
        for (int j = 0; j < s; ++j) {
            for (int i = 0; i < s; ++i)
                a[static_cast<size_t>(j)][static_cast<size_t>(i)] =
                    basis[static_cast<size_t>(i)].coords()[static_cast<size_t>(j)];
            a[static_cast<size_t>(j)][static_cast<size_t>(s)] =
                e.coords()[static_cast<size_t>(j)];
        }
        // Gaussian elimination with exact rationals
        for (int col = 0; col < s; ++col) {
            int piv = col;
            while (piv < s && a[static_cast<size_t>(piv)][static_cast<size_t>(col)] == 0) ++piv;
            if (piv == s) throw RankDeficient("module basis degenerated");
            std::swap(a[static_cast<size_t>(piv)], a[static_cast<size_t>(col)]);
            Rat p = a[static_cast<size_t>(col)][static_cast<size_t>(col)];
            for (int j = col; j <= s; ++j) a[static_cast<size_t>(col)][static_cast<size_t>(j)] /= p;
            for (int r = 0; r < s; ++r) {
                if (r == col) continue;
                Rat f = a[static_cast<size_t>(r)][static_cast<size_t>(col)];
                if (f == 0) continue;
                for (int j = col; j <= s; ++j)
                    a[static_cast<size_t>(r)][static_cast<size_t>(j)] -=
                        f * a[static_cast<size_t>(col)][static_cast<size_t>(j)];
            }
        }
        std::vector<long long> out(static_cast<size_t>(s));
        for (int i = 0; i < s; ++i) {
            const Rat& v = a[static_cast<size_t>(i)][static_cast<size_t>(s)];
            if (v.get_den() != 1)
                throw BadInput("reduced representative left the module (non-unit data?)");
            out[static_cast<size_t>(i)] = static_cast<long long>(v.get_num().get_si());
        }
        return out;
    };

    std::map<std::vector<long long>, Rat> reps;
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
            FieldElement e = g.element_at(c);
            Rat nm = abs(e.norm());
            if (nm > 0 && nm <= max_abs_norm) {
                FieldElement rep = u.reduce_element(e).element;
                reps.emplace(module_coords(rep), nm);
            }
        }
        int i = s - 1;
        while (i >= 0) {
            if (++c[static_cast<size_t>(i)] <= coeff_radius) break;
            c[static_cast<size_t>(i)] = -coeff_radius;
            --i;
        }
        done = (i < 0);
    }

    std::vector<FDomainPoint> out;
    out.reserve(reps.size());
    for (const auto& [coeffs, nm] : reps) {
        FDomainPoint p;
        p.coeffs = coeffs;
        p.abs_norm = nm;
        Eigen::VectorXd y = g.coords_of(p.coeffs);
        p.coords.assign(y.data(), y.data() + s);
        out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end(), [](const FDomainPoint& a, const FDomainPoint& b) {
        if (a.abs_norm != b.abs_norm) return a.abs_norm < b.abs_norm;
        return a.coeffs < b.coeffs;
    });
    return out;
}

} // namespace lat
