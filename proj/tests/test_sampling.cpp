#include <algorithm>
#include <random>

#include "catch_amalgamated.hpp"
#include "loewner/errors.hpp"
#include "loewner/sampling.hpp"

using namespace loewner;

TEST_CASE("Rng is mt19937_64 with 53-bit doubles") {
    Rng rng(42);
    std::mt19937_64 ref(42);
    for (int i = 0; i < 100; ++i) {
        const double expect = static_cast<double>(ref() >> 11) / 9007199254740992.0;
        CHECK(rng.uniform() == expect);
    }
}

TEST_CASE("normals have roughly unit variance") {
    Rng rng(1);
    double s = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        s += x;
        s2 += x * x;
    }
    CHECK(std::abs(s / n) < 0.01);
    CHECK(std::abs(s2 / n - 1.0) < 0.01);
}

TEST_CASE("radical inverse") {
    CHECK(radical_inverse(1, 2) == 0.5);
    CHECK(radical_inverse(3, 2) == 0.75);
    CHECK(radical_inverse(5, 3) == Catch::Approx(2.0 / 3.0 + 1.0 / 9.0));
}

TEST_CASE("sphere directions start with the axes and are unit") {
    SamplingPlan plan;
    const auto d = plan.sphere_directions(2);
    REQUIRE(d.size() == plan.directions);
    CHECK(d[0] == CPoint::basis(2, 0));
    for (const auto& u : d) CHECK(u.norm() == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("plan points lie in the ball and are reproducible") {
    SamplingPlan plan;
    plan.extra_points.push_back(CPoint{0.99, 0.0});
    const auto a = plan.points(2), b = plan.points(2);
    CHECK(a.size() == plan.radii.size() * plan.directions + plan.random_points + 1);
    CHECK(a == b);
    for (const auto& z : a) CHECK(z.norm() < 1.0);
    const double rmax = std::max_element(a.begin(), a.end() - 1, [](auto& x, auto& y) {
                            return x.norm() < y.norm();
                        })->norm();
    CHECK(rmax <= plan.max_radius() + 1e-15);
    plan.seed += 1;
    CHECK(plan.points(2) != a);
}

TEST_CASE("bad extra points are rejected") {
    SamplingPlan plan;
    plan.extra_points.push_back(CPoint{1.0, 0.0});
    CHECK_THROWS_AS(plan.points(2), DomainError);
    plan.extra_points = {CPoint{0.1}};
    CHECK_THROWS_AS(plan.points(2), DomainError);
}

TEST_CASE("time modes") {
    SamplingPlan plan;
    plan.times_per_interval = 5;
    const Interval iv{1.0, 2.0};
    const auto h = plan.times(iv, TimeMode::HalfOpen);
    const auto c = plan.times(iv, TimeMode::Closed);
    const auto w = plan.times(iv, TimeMode::WithProbes);
    CHECK(std::find(h.begin(), h.end(), 2.0) == h.end());
    CHECK(std::find(h.begin(), h.end(), 1.0) != h.end());
    CHECK(*std::max_element(h.begin(), h.end()) == Catch::Approx(2.0 - 1e-6));
    CHECK(std::find(c.begin(), c.end(), 2.0) != c.end());
    CHECK(*std::min_element(w.begin(), w.end()) == Catch::Approx(1.0 - 1e-6));
    CHECK(*std::max_element(w.begin(), w.end()) == Catch::Approx(2.0 + 1e-6));
    CHECK(std::is_sorted(h.begin(), h.end()));
    const auto f = plan.flow_grid(iv);
    CHECK(f.size() == plan.flow_times);
    CHECK(f.front() == 1.0);
    CHECK(f.back() == 2.0);
}
