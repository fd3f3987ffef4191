#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "testutil.hpp"

using namespace lat;

TEST_CASE("embedding lattice determinants match sqrt|disc|") {
    Lattice g2 = lattest::load_lattice("sqrt2");
    CHECK(g2.det() == doctest::Approx(2.8284271247461903).epsilon(1e-12)); // 2 sqrt2
    CHECK(g2.module_disc() == 8);

    Lattice g5 = lattest::load_lattice("sqrt5");
    CHECK(g5.det() == doctest::Approx(2.2360679774997896).epsilon(1e-12)); // sqrt5
    CHECK(g5.module_disc() == 5);

    Lattice z2 = Lattice::from_matrix(Eigen::Matrix2d::Identity(), "Z2");
    CHECK(z2.det() == doctest::Approx(1.0));
}

TEST_CASE("rank-deficient module basis is rejected") {
    auto d = lattest::load_field("sqrt2");
    ModuleBasis m{{d.basis[0], d.basis[0]}, "degenerate"};
    CHECK_THROWS_AS(Lattice::from_module(m, 60), RankDeficient);
}

TEST_CASE("dual lattice properties") {
    Lattice z2 = Lattice::from_matrix(Eigen::Matrix2d::Identity(), "Z2");
    Lattice z2d = z2.dual();
    CHECK((z2d.basis() - Eigen::Matrix2d::Identity()).norm() == doctest::Approx(0.0));

    Lattice g = lattest::load_lattice("sqrt2");
    Lattice gd = g.dual();
    Eigen::MatrixXd prod = g.basis() * gd.basis().transpose();
    CHECK((prod - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(gd.det() * g.det() == doctest::Approx(1.0).epsilon(1e-12));

    Lattice gdd = gd.dual();
    CHECK((gdd.basis() - g.basis()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("dual pairing is integral over random coefficient pairs") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long long> coeff(-40, 40);
    for (const char* name : {"sqrt2", "cubic"}) {
        Lattice g = lattest::load_lattice(name);
        Lattice gd = g.dual();
        const int s = g.dim();
        std::vector<long long> a(s), b(s);
        for (int it = 0; it < 5000; ++it) {
            for (int i = 0; i < s; ++i) {
                a[i] = coeff(rng);
                b[i] = coeff(rng);
            }
            double ip = g.coords_of(a).dot(gd.coords_of(b));
            CHECK(std::fabs(ip - std::round(ip)) <= 1e-9);
        }
    }
}

TEST_CASE("nm_floor on Z[sqrt2] finds the unit") {
    Lattice g = lattest::load_lattice("sqrt2");
    NmFloorResult r = nm_floor(g, 50);
    CHECK(r.min_abs_norm == 1);
    CHECK(r.admissible);
    CHECK(r.algebraic_floor == 1);
    // witness really achieves it
    CHECK(abs(g.element_at(r.witness.coeffs).norm()) == 1);
}

TEST_CASE("nm_floor flags the product lattice Z^2 as non-admissible") {
    Lattice z2 = Lattice::from_matrix(Eigen::Matrix2d::Identity(), "Z2");
    NmFloorResult r = nm_floor(z2, 5);
    CHECK(r.min_abs_norm == 0);
    CHECK_FALSE(r.admissible);
}

TEST_CASE("nm_floor on Z[(1+sqrt5)/2]") {
    Lattice g = lattest::load_lattice("sqrt5");
    NmFloorResult r = nm_floor(g, 50);
    CHECK(r.min_abs_norm == 1);
}

TEST_CASE("module lattice float norms track exact norms") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long long> coeff(-30, 30);
    Lattice g = lattest::load_lattice("sqrt5");
    std::vector<long long> c(2);
    for (int it = 0; it < 500; ++it) {
        c[0] = coeff(rng);
        c[1] = coeff(rng);
        if (c[0] == 0 && c[1] == 0) continue;
        Eigen::VectorXd y = g.coords_of(c);
        double float_nm = std::fabs(y(0) * y(1));
        Rat exact = abs(g.element_at(c).norm());
        CHECK(float_nm == doctest::Approx(rat_to_double(exact)).epsilon(1e-9));
        CHECK(exact >= 1);
    }
}

TEST_CASE("coordinate comparisons are certified") {
    // root order ascending: sigma_1(sqrt2) = -1.41..., sigma_2(sqrt2) = +1.41...
    Lattice g = lattest::load_lattice("sqrt2");
    std::vector<long long> c{1, 1}; // 1 + sqrt2
    CHECK(g.coord_cmp(c, 0, Rat(0)) < 0);        // 1 - sqrt2 < 0
    CHECK(g.coord_cmp(c, 1, Rat(2)) > 0);        // 1 + sqrt2 > 2
    std::vector<long long> e{3, 0};
    CHECK(g.coord_cmp(e, 0, Rat(3)) == 0);       // exactly on a face
    CHECK(g.coord_cmp_points(c, e, 0) < 0);      // 1+sqrt2 < 3

    Lattice z2 = Lattice::from_matrix(Eigen::Matrix2d::Identity(), "Z2");
    std::vector<long long> p{0, 1}, q{1, 1};
    CHECK(z2.coord_cmp_points(p, q, 1) == 0);    // shared second coordinate
    CHECK(z2.coord_cmp_points(p, q, 0) < 0);
}

TEST_CASE("lattice serialization carries the required keys") {
    Lattice g = lattest::load_lattice("sqrt2");
    std::string j = g.to_json();
    for (const char* key : {"basis_midpoints", "det", "source_label", "error_bound"})
        CHECK(j.find(key) != std::string::npos);
}
