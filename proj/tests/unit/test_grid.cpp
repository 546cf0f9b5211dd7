#include "helpers.hpp"

#include "sflda/error.hpp"
#include "sflda/grid.hpp"

#include <cmath>
#include <numbers>

using namespace sflda;

TEST_CASE("two-point grid") {
    const Grid g = make_grid(0.0, 1.0, 2);
    CHECK(g.dt() == 1.0);
    CHECK(g.points()[0] == 0.0);
    CHECK(g.points()[1] == 1.0);
    CHECK(g.weights()[0] == 0.5);
    CHECK(g.weights()[1] == 0.5);
}

TEST_CASE("grid spacing and weights") {
    const Grid g101 = make_grid(0.0, 1.0, 101);
    CHECK(g101.dt() == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(g101.weights().sum() == doctest::Approx(1.0).epsilon(1e-14));

    const Grid g100 = make_grid(0.0, 1.0, 100);
    CHECK(g100.dt() == doctest::Approx(1.0 / 99.0).epsilon(1e-15));
    CHECK(g100.points()[99] == 1.0);

    const Grid shifted = make_grid(-2.0, 3.5, 37);
    CHECK(std::abs(shifted.weights().sum() - 5.5) < 1e-13);
}

TEST_CASE("invalid grids are rejected") {
    CHECK_THROWS_AS(make_grid(0.0, 1.0, 1), Error);
    CHECK_THROWS_AS(make_grid(1.0, 1.0, 5), Error);
    CHECK_THROWS_AS(make_grid(2.0, 1.0, 5), Error);
    CHECK_THROWS_AS(GridFunction(make_grid(0.0, 1.0, 3), Vector::Zero(4)), Error);
    Vector bad = Vector::Zero(3);
    bad[1] = NAN;
    CHECK_THROWS_AS(GridFunction(make_grid(0.0, 1.0, 3), bad), Error);
}

TEST_CASE("inner product examples") {
    const Grid g = make_grid(0.0, 1.0, 101);
    const auto one = GridFunction::constant(g, 1.0);
    CHECK(inner_product(GridFunction::zeros(g), one) == 0.0);
    CHECK(inner_product(one, one) == doctest::Approx(1.0).epsilon(1e-15));
    const auto s = GridFunction::sample(g, [](double t) { return std::sin(std::numbers::pi * t); });
    CHECK(std::abs(inner_product(s, s) - 0.5) < 1e-3);
    CHECK_THROWS_AS(inner_product(one, GridFunction::constant(make_grid(0.0, 1.0, 100), 1.0)), Error);
}

TEST_CASE("norms examples") {
    const Grid g = make_grid(0.0, 1.0, 101);
    const Norms z = norms(GridFunction::zeros(g));
    CHECK(z.l1 == 0.0);
    CHECK(z.l2 == 0.0);
    CHECK(z.sup == 0.0);
    const Norms one = norms(GridFunction::constant(g, 1.0));
    CHECK(one.l1 == doctest::Approx(1.0));
    CHECK(one.l2 == doctest::Approx(1.0));
    CHECK(one.sup == 1.0);
    const Norms lin = norms(GridFunction::sample(g, [](double t) { return t; }));
    CHECK(std::abs(lin.l1 - 0.5) < 1e-4);
    CHECK(std::abs(lin.l2 - 1.0 / std::sqrt(3.0)) < 1e-3);
    CHECK(lin.sup == 1.0);
}

TEST_CASE("quadrature is exact for piecewise-linear integrands") {
    const Grid g = make_grid(-1.0, 2.0, 31);
    const auto lin = GridFunction::sample(g, [](double t) { return 3.0 * t - 1.0; });
    // integral of 3t - 1 over [-1, 2]
    CHECK(std::abs(inner_product(lin, GridFunction::constant(g, 1.0)) - 1.5) < 1e-13);
    CHECK(std::abs(inner_product(GridFunction::constant(g, 1.0), GridFunction::constant(g, 1.0)) - 3.0) < 1e-14);
}

TEST_CASE("bilinearity, symmetry and norm consistency") {
    Rng rng(11);
    const Grid g = make_grid(0.0, 1.0, 57);
    for (int rep = 0; rep < 20; ++rep) {
        const GridFunction f(g, test::random_vector(57, rng));
        const GridFunction h(g, test::random_vector(57, rng));
        const GridFunction k(g, test::random_vector(57, rng));
        CHECK(std::abs(inner_product(f, h) - inner_product(h, f)) < 1e-12);
        const GridFunction comb(g, 2.5 * f.values() - 0.75 * h.values());
        CHECK(std::abs(inner_product(comb, k) - (2.5 * inner_product(f, k) - 0.75 * inner_product(h, k))) < 1e-12);
        const double l2 = norms(f).l2;
        CHECK(std::abs(l2 * l2 - inner_product(f, f)) < 1e-12);
    }
}

TEST_CASE("difference matrix and derivative energy") {
    const Grid g2 = make_grid(0.0, 1.0, 2);
    const Matrix d2 = Matrix(difference_matrix(g2));
    REQUIRE(d2.rows() == 1);
    CHECK(d2(0, 0) == -1.0);
    CHECK(d2(0, 1) == 1.0);

    const Grid g = make_grid(0.0, 1.0, 41);
    const auto d = difference_matrix(g);
    CHECK(d.rows() == 40);
    CHECK((d * Vector::Constant(41, 4.2)).cwiseAbs().maxCoeff() < 1e-12);
    const Vector t = g.points();
    const Vector dt = d * t;
    CHECK((dt.array() - 1.0).abs().maxCoeff() < 1e-12);
    const Matrix l = derivative_energy(g);
    CHECK(std::abs(t.dot(l * t) - 1.0) < 1e-12);
    CHECK((l - l.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("discrete Gabushin-type control") {
    Rng rng(5);
    const Grid g = make_grid(0.0, 1.0, 80);
    const Matrix l = derivative_energy(g);
    for (int rep = 0; rep < 50; ++rep) {
        const Vector b = test::random_vector(80, rng) * (rep % 7 + 1);
        const Norms n = weighted_norms(g, b);
        CHECK(n.l2 <= n.l1 + std::sqrt(b.dot(l * b)) + 1e-8);
    }
}
