#include <cmath>

#include "catch_amalgamated.hpp"
#include "loewner/errors.hpp"
#include "loewner/evolve.hpp"

using namespace loewner;

namespace {

EvolutionFamily family(FieldSpec g) {
    EvolutionFamily f;
    f.spec = std::move(g);
    return f;
}

// The cayley field -z(1+z)/(1-z) in one variable has chain e^t k(z), k = z/(1+z)^2.
Complex koebe(Complex z) { return z / ((1.0 + z) * (1.0 + z)); }

}  // namespace

TEST_CASE("linear radial flow is e^{s-t} z") {
    const auto fam = family(FieldSpec::linear_radial(2));
    SamplingPlan plan;
    plan.directions = 16;
    plan.random_points = 16;
    for (const auto& z : plan.points(2)) {
        for (auto [s, t] : {std::pair{0.0, 1.0}, {0.3, 0.3}, {1.0, 4.5}}) {
            CHECK(distance(integrate_evolution(fam, s, t, z), z * std::exp(s - t)) <= 1e-10);
        }
    }
}

TEST_CASE("cayley flow satisfies k(phi) = e^{s-t} k(z)") {
    const auto fam = family(FieldSpec::componentwise({caratheodory::cayley()}));
    for (Complex z : {Complex(0.5, 0.0), Complex(-0.7, 0.2), Complex(0.1, 0.85)}) {
        for (double t : {0.5, 2.0, 6.0}) {
            const Complex w = integrate_evolution(fam, 0.0, t, CPoint{z})[0];
            const Complex lhs = koebe(w), rhs = std::exp(-t) * koebe(z);
            CHECK(std::abs(lhs - rhs) <= 1e-7 * std::abs(rhs));
        }
    }
}

TEST_CASE("zero-length evolution is the identity") {
    const auto fam = family(FieldSpec::slit_example(0.5, 1.5));
    const CPoint z{Complex(0.4, 0.3), Complex(0.2, -0.1)};
    for (double s : {0.0, 0.5, 1.5, 7.0}) CHECK(integrate_evolution(fam, s, s, z) == z);
}

TEST_CASE("slit flow after the switch") {
    const double t2 = 1.5;
    const auto fam = family(FieldSpec::slit_example(0.5, t2));
    const CPoint w = integrate_evolution(fam, t2, t2 + std::log(2.0), CPoint{0.5, 0.5});
    CHECK(std::abs(w[0] - 1.0 / 3.0) < 1e-9);
    CHECK(std::abs(w[1] - 0.25) < 1e-9);
}

TEST_CASE("checkpoint overload matches single calls") {
    const auto fam = family(FieldSpec::slit_example(0.5, 1.5));
    const CPoint z{Complex(0.4, 0.3), Complex(0.2, -0.1)};
    const std::vector<double> ts{0.2, 0.5, 1.0, 1.5, 3.0};
    const auto many = integrate_evolution(fam, 0.1, ts, z);
    REQUIRE(many.size() == ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        CHECK(distance(many[i], integrate_evolution(fam, 0.1, ts[i], z)) < 1e-9);
    }
}

TEST_CASE("semigroup property") {
    const auto fam = family(FieldSpec::blended({0.5, 1.5}, {caratheodory::cayley(), caratheodory::one_minus()}));
    SamplingPlan plan;
    plan.directions = 8;
    plan.random_points = 8;
    CHECK(semigroup_defect(fam, 0.0, 0.9, 2.0, plan) < 1e-8);
}

TEST_CASE("recover_chain reproduces the rotated Koebe chain") {
    const auto fam = family(FieldSpec::componentwise({caratheodory::cayley()}));
    for (Complex z : {Complex(0.3, 0.0), Complex(-0.6, 0.4), Complex(0.9, 0.0)}) {
        for (double s : {0.0, 1.0}) {
            const Recovery r = recover_chain(fam, s, CPoint{z});
            const Complex expect = std::exp(s) * koebe(z);
            CHECK(std::abs(r.value[0] - expect) <= 1e-7 * std::abs(expect));
            CHECK(r.horizon >= 5.0);
        }
    }
}

TEST_CASE("expanding fields violate the Schwarz check") {
    const auto fam = family(FieldSpec::custom(1, "expand", [](const CPoint& z, double) { return z; }));
    CHECK_THROWS_AS(integrate_evolution(fam, 0.0, 1.0, CPoint{0.5}), ConsistencyError);
}

TEST_CASE("argument validation") {
    const auto fam = family(FieldSpec::linear_radial(2));
    CHECK_THROWS_AS(integrate_evolution(fam, 1.0, 0.5, CPoint{0.1, 0.1}), DomainError);
    CHECK_THROWS_AS(integrate_evolution(fam, 0.0, 1.0, CPoint{1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(integrate_evolution(fam, 0.0, 1.0, CPoint{0.1}), DomainError);
    CHECK_THROWS_AS(integrate_evolution(fam, -0.1, 1.0, CPoint{0.1, 0.1}), DomainError);
}

TEST_CASE("integration is deterministic") {
    const auto fam = family(FieldSpec::slit_example(0.5, 1.5));
    const CPoint z{Complex(0.6, 0.1), Complex(0.3, 0.3)};
    CHECK(integrate_evolution(fam, 0.0, 2.0, z) == integrate_evolution(fam, 0.0, 2.0, z));
}
