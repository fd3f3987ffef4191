#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "testutil.hpp"

using namespace lat;

namespace {

FieldSpec spec_of(std::vector<long> coeffs, const std::string& label) {
    FieldSpec s;
    for (long c : coeffs) s.coeffs.emplace_back(c);
    s.label = label;
    s.precision_bits = 60;
    return s;
}

FieldElement rand_element(const FieldPtr& f, std::mt19937_64& rng, int num_bound,
                          int den_bound = 1) {
    std::uniform_int_distribution<int> num(-num_bound, num_bound);
    std::uniform_int_distribution<int> den(1, den_bound);
    std::vector<Rat> c;
    for (int i = 0; i < f->degree(); ++i) {
        Rat q(num(rng), den(rng));
        q.canonicalize();
        c.push_back(std::move(q));
    }
    return f->element(std::move(c));
}

} // namespace

TEST_CASE("parse_field isolates certified real roots sorted ascending") {
    auto f = Field::parse(spec_of({-2, 0, 1}, "sqrt2"));
    auto roots = f->root_enclosures(40);
    REQUIRE(roots.size() == 2);
    // sign-change bisection oracle value: +/- 1.41421356... to 1e-12
    CHECK(roots[0].mid_double() == doctest::Approx(-1.4142135623730951).epsilon(1e-12));
    CHECK(roots[1].mid_double() == doctest::Approx(+1.4142135623730951).epsilon(1e-12));
    CHECK(roots[0].halfwidth_double() <= std::ldexp(1.0, -40));
}

TEST_CASE("parse_field rejects bad inputs") {
    CHECK_THROWS_AS(Field::parse(spec_of({1, 0, 1}, "x^2+1")), NotTotallyReal);
    CHECK_THROWS_AS(Field::parse(spec_of({-2, 0, 2}, "2x^2-2")), NotMonic);
    CHECK_THROWS_AS(Field::parse(spec_of({-2, 1}, "x-2")), DegreeTooSmall);
}

TEST_CASE("totally real cubic has three real roots (Sturm count)") {
    QPoly f{Rat(-1), Rat(-3), Rat(0), Rat(1)};
    SturmChain chain(f);
    CHECK(chain.count_real_roots() == 3);
    auto field = Field::parse(spec_of({-1, -3, 0, 1}, "cubic"));
    CHECK(field->degree() == 3);
}

TEST_CASE("element arithmetic in Q(sqrt2)") {
    auto f = Field::parse(spec_of({-2, 0, 1}, "sqrt2"));
    FieldElement one_plus = f->element({Rat(1), Rat(1)});  // 1 + sqrt2
    FieldElement one_minus = f->element({Rat(1), Rat(-1)}); // 1 - sqrt2
    CHECK((one_plus * one_minus) == f->from_rational(Rat(-1)));
    CHECK((one_plus * f->one()) == one_plus);
    CHECK((one_plus * one_plus) == f->element({Rat(3), Rat(2)})); // 3 + 2 sqrt2
}

TEST_CASE("field mismatch is rejected") {
    auto f1 = Field::parse(spec_of({-2, 0, 1}, "sqrt2"));
    auto f2 = Field::parse(spec_of({-5, 0, 1}, "sqrt5"));
    CHECK_THROWS_AS(f1->one() + f2->one(), FieldMismatch);
}

TEST_CASE("norm and trace closed cases") {
    auto f = Field::parse(spec_of({-2, 0, 1}, "sqrt2"));
    CHECK(f->element({Rat(3), Rat(2)}).norm() == 1);   // (3+2sqrt2)(3-2sqrt2)
    CHECK(f->generator().trace() == 0);                // conjugates cancel
    CHECK(f->element({Rat(1), Rat(1)}).norm() == -1);  // (1+sqrt2)(1-sqrt2)
}

TEST_CASE("embedding enclosures and norm consistency") {
    auto f = Field::parse(spec_of({-2, 0, 1}, "sqrt2"));
    auto ones = f->one().embed(50);
    for (const auto& iv : ones) {
        CHECK(iv.lo == 1);
        CHECK(iv.hi == 1);
    }
    auto e = f->element({Rat(1), Rat(1)}).embed(50);
    double prod = e[0].mid_double() * e[1].mid_double();
    CHECK(prod == doctest::Approx(-1.0).epsilon(1e-10));

    auto sq2 = f->generator().embed(50);
    CHECK(sq2[0].mid_double() == doctest::Approx(-1.4142135623730951));
    CHECK(sq2[1].mid_double() == doctest::Approx(+1.4142135623730951));
}

TEST_CASE("inverse and pow") {
    auto f = Field::parse(spec_of({-1, -3, 0, 1}, "cubic"));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        FieldElement a = rand_element(f, rng, 6, 3);
        if (a.is_zero()) continue;
        CHECK((a * a.inverse()) == f->one());
    }
    FieldElement alpha = f->generator();
    CHECK(alpha.pow(3) == (alpha * alpha * alpha));
    CHECK(alpha.pow(-2) == (alpha.inverse() * alpha.inverse()));
}

TEST_CASE("embedding products match exact norms over random elements") {
    for (const char* name : {"sqrt2", "sqrt5", "cubic"}) {
        auto d = lattest::load_field(name);
        auto f = d.field;
        std::mt19937_64 rng(42);
        for (int i = 0; i < 500; ++i) {
            FieldElement a = rand_element(f, rng, 8, 4);
            auto iv = a.embed(50);
            double prod = 1.0, hw = 0.0;
            for (const auto& v : iv) {
                prod *= v.mid_double();
                hw = std::max(hw, v.halfwidth_double());
            }
            double tol = 10.0 * f->degree() * std::max(hw, 1e-12) *
                         (1.0 + std::fabs(prod));
            CHECK(std::fabs(prod - rat_to_double(a.norm())) <= tol);
        }
    }
}

TEST_CASE("embed is multiplicative componentwise") {
    auto d = lattest::load_field("cubic");
    std::mt19937_64 rng(43);
    for (int i = 0; i < 500; ++i) {
        FieldElement a = rand_element(d.field, rng, 6, 2);
        FieldElement b = rand_element(d.field, rng, 6, 2);
        auto ia = a.embed(50), ib = b.embed(50), iab = (a * b).embed(50);
        for (int j = 0; j < 3; ++j) {
            double lhs = iab[j].mid_double();
            double rhs = ia[j].mid_double() * ib[j].mid_double();
            CHECK(std::fabs(lhs - rhs) <= 1e-9 * (1.0 + std::fabs(lhs)));
        }
    }
}

TEST_CASE("norm is multiplicative and trace additive, exactly") {
    auto d = lattest::load_field("sqrt5");
    std::mt19937_64 rng(44);
    for (int i = 0; i < 200; ++i) {
        FieldElement a = rand_element(d.field, rng, 10, 3);
        FieldElement b = rand_element(d.field, rng, 10, 3);
        CHECK((a * b).norm() == a.norm() * b.norm());
        CHECK((a + b).trace() == a.trace() + b.trace());
    }
}

TEST_CASE("nonzero algebraic integers have |norm| >= 1") {
    for (const char* name : {"sqrt2", "sqrt5", "cubic"}) {
        auto d = lattest::load_field(name);
        std::mt19937_64 rng(45);
        std::uniform_int_distribution<int> num(-20, 20);
        for (int i = 0; i < 300; ++i) {
            std::vector<Rat> c;
            for (int k = 0; k < d.field->degree(); ++k) c.emplace_back(num(rng));
            FieldElement a = d.field->element(std::move(c));
            if (a.is_zero()) continue;
            CHECK(abs(a.norm()) >= 1);
        }
    }
}

TEST_CASE("embedding matrix is certified and nonsingular for bundled bases") {
    for (const char* name : {"sqrt2", "sqrt5", "cubic"}) {
        auto d = lattest::load_field(name);
        EmbeddingMatrix em = embedding_matrix(d.basis, 60);
        CHECK(em.max_halfwidth <= std::ldexp(1.0, -60));
        Eigen::MatrixXd m(d.field->degree(), d.field->degree());
        for (int j = 0; j < d.field->degree(); ++j)
            for (int i = 0; i < d.field->degree(); ++i)
                m(j, i) = em.entries[j][i].mid_double();
        CHECK(std::fabs(m.determinant()) > 1e3 * em.max_halfwidth);
    }
}

TEST_CASE("field file loader validates discriminant and rejects bad data") {
    CHECK_THROWS_AS(parse_field_json("{", "inline"), BadInput);
    // tampered basis: discriminant check must fire
    const char* bad = R"({"label":"bad","coeffs":[-2,0,1],
        "basis":[[1,0],[1,0]],"units":[[1,1]],"precision_bits":60})";
    CHECK_THROWS_AS(parse_field_json(bad, "inline"), Error);
    const char* bad_unit = R"({"label":"bad","coeffs":[-2,0,1],
        "basis":[[1,0],[0,1]],"units":[[2,0]],"precision_bits":60})";
    CHECK_THROWS_AS(parse_field_json(bad_unit, "inline"), BadInput);
}

TEST_CASE("resultant-based discriminants of bundled fields") {
    CHECK(poly_discriminant_monic({Rat(-2), Rat(0), Rat(1)}) == 8);
    CHECK(poly_discriminant_monic({Rat(-5), Rat(0), Rat(1)}) == 20);
    CHECK(poly_discriminant_monic({Rat(-1), Rat(-3), Rat(0), Rat(1)}) == 81);
}
