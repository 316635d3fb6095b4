#include <cmath>

#include "catch_amalgamated.hpp"
#include "loewner/errors.hpp"
#include "loewner/evolve.hpp"
#include "loewner/maps.hpp"

using namespace loewner;

TEST_CASE("shear evaluates and inverts") {
    const Complex a(1.5, -0.25);
    const PolyMap s = PolyMap::shear(a), si = PolyMap::shear(-a);
    const CPoint z{Complex(0.1, 0.2), Complex(-0.3, 0.05)};
    const CPoint w = s(z);
    CHECK(std::abs(w[0] - (z[0] + a * z[1] * z[1])) < 1e-16);
    CHECK(w[1] == z[1]);
    CHECK(distance(si(w), z) < 1e-15);
}

TEST_CASE("polynomial bookkeeping") {
    PolyMap p(2);
    p.add_term(0, {1, 0}, 1.0);
    p.add_term(0, {0, 2}, 0.5);
    p.add_term(0, {0, 2}, 0.5);
    p.add_term(1, {1, 1}, Complex(0, 2));
    CHECK(p.coefficient({0, 2}, 0) == Complex(1.0));
    CHECK(p.coefficient({2, 0}, 0) == Complex(0.0));
    CHECK(p.degree() == 2);
    CHECK(p.lowest_degree() == 1);
    CHECK(p.homogeneous_part(2).lowest_degree() == 2);
    CHECK(p.homogeneous_part(2).coefficient({1, 0}, 0) == Complex(0.0));
    CHECK((p - p).lowest_degree() == INT_MAX);
    CHECK(p.scaled(2.0).coefficient({1, 1}, 1) == Complex(0, 4));
    CHECK(total_degree({2, 3, 1}) == 6);
}

TEST_CASE("polynomial jacobian matches difference quotients") {
    PolyMap p(3);
    p.add_term(0, {1, 0, 0}, 1.0);
    p.add_term(0, {1, 1, 1}, Complex(0.3, 0.2));
    p.add_term(1, {0, 3, 0}, -0.7);
    p.add_term(2, {0, 0, 1}, 1.0);
    p.add_term(2, {2, 0, 0}, Complex(0, 1));
    const CPoint z{Complex(0.2, 0.1), Complex(-0.1, 0.3), Complex(0.05, -0.2)};
    const CMatrix j = p.jacobian(z);
    const double h = 1e-6;
    for (std::size_t k = 0; k < 3; ++k) {
        CPoint zp = z, zm = z;
        zp[k] += h;
        zm[k] -= h;
        const CPoint col = (p(zp) - p(zm)) * (1.0 / (2 * h));
        for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(col[i] - j(i, k)) < 1e-8);
    }
}

TEST_CASE("Cauchy jacobian of a map without an exact jacobian") {
    const PolyMap p = PolyMap::shear(2.0);
    const HoloMap black(2, [p](const CPoint& z) { return p(z); });
    CHECK_FALSE(black.has_exact_jacobian());
    for (const CPoint& z : {CPoint{0.0, 0.0}, CPoint{Complex(0.3, 0.1), Complex(0.0, -0.6)},
                            CPoint{Complex(-0.1, 0.0), Complex(0.9, 0.0)}}) {
        const CMatrix diff = black.jacobian(z) - p.jacobian(z);
        CHECK(diff.frobenius_norm() < 1e-12);
    }
}

TEST_CASE("Cauchy jacobian of a transcendental map") {
    // f(z) = (exp(z1) - 1, z2 / (1 - z1)), df known in closed form.
    const MapFn f = [](const CPoint& z) { return CPoint{std::exp(z[0]) - 1.0, z[1] / (1.0 - z[0])}; };
    const CPoint z{Complex(0.4, 0.2), Complex(0.1, -0.3)};
    const CMatrix j = jacobian(f, z, default_jacobian_radius(z));
    const Complex d = 1.0 - z[0];
    CHECK(std::abs(j(0, 0) - std::exp(z[0])) < 1e-12);
    CHECK(std::abs(j(0, 1)) < 1e-12);
    CHECK(std::abs(j(1, 0) - z[1] / (d * d)) < 1e-12);
    CHECK(std::abs(j(1, 1) - 1.0 / d) < 1e-12);
}

TEST_CASE("jacobian radius must keep the circle in the ball") {
    const MapFn f = [](const CPoint& z) { return z; };
    CHECK_THROWS_AS(jacobian(f, CPoint{0.95, 0.0}, 0.1), DomainError);
    CHECK(default_jacobian_radius(CPoint{0.0, 0.0}) == 0.1);
    CHECK(default_jacobian_radius(CPoint{0.9, 0.0}) == Catch::Approx(0.05));
}

TEST_CASE("identity map") {
    const HoloMap id = HoloMap::identity(4);
    const CPoint z{1.0, 2.0, 3.0, 4.0};
    CHECK(id(z) == z);
    CHECK((id.jacobian(z) - CMatrix::identity(4)).frobenius_norm() == 0.0);
}
