#include <cmath>

#include "catch_amalgamated.hpp"
#include "loewner/coeff.hpp"
#include "loewner/construct.hpp"
#include "loewner/errors.hpp"

using namespace loewner;

namespace {

SamplingPlan small_plan() {
    SamplingPlan p;
    p.directions = 24;
    p.random_points = 48;
    p.times_per_interval = 9;
    p.flow_times = 5;
    return p;
}

PolyMap h_default() {
    PolyMap h(2);
    h.add_term(0, {0, 2}, 0.5);
    return h;
}

}  // namespace

TEST_CASE("reparametrization profile") {
    const ReparamPlan rp{1.0, 3.0, 0.4};
    CHECK(rp.alpha(0.5) == 0.0);
    CHECK(rp.alpha(3.5) == 0.0);
    CHECK(rp.alpha(2.0) == Catch::Approx(-0.4));
    CHECK(rp.alpha(1.5) == Catch::Approx(-0.2));
    CHECK(rp.alpha(2.5) == Catch::Approx(-0.2));
    CHECK(rp.alpha_prime(1.0) == Catch::Approx(-0.4));
    CHECK(rp.alpha_prime(2.5) == Catch::Approx(0.4));
    CHECK(rp.alpha_prime(3.0) == 0.0);
}

TEST_CASE("reparametrized slit chain") {
    const ChainHandle f = slit_chain(0.5, 1.5);
    const auto plan = small_plan();
    const auto sq = certify_squeezing(f, {0.5, 1.5}, plan);
    REQUIRE(sq.pass);
    const ReparamPlan rp{0.5, 1.5, 0.5};
    const ChainHandle g = reparam_geraumig(f, rp, sq);
    const CPoint z{Complex(0.3, 0.2), Complex(-0.1, 0.4)};
    // unchanged outside (t1, t2), e^alpha scaling inside
    for (double t : {0.0, 0.5, 1.5, 2.0}) CHECK(g(t, z) == f(t, z));
    const double a = rp.alpha(1.0);
    CHECK(distance(g(1.0, z), f(1.0 - a, z * std::exp(a))) < 1e-15);
    // its driver is the Herglotz field of g
    for (double t : {0.7, 1.0, 1.3}) {
        CHECK(distance(g.herglotz(t, z), -(*g.driver)(z, t)) < 1e-10);
        const double h = 1e-6;
        const CPoint fd = (g(t + h, z) - g(t - h, z)) * (1.0 / (2 * h));
        CHECK(distance(fd, g.time_derivative(t, z)) < 1e-6);
    }
    const auto cert = certify_geraumig(g, {0.6, 1.4}, plan);
    CHECK(cert.pass);
}

TEST_CASE("reparametrization preconditions") {
    const ChainHandle f = slit_chain(0.5, 1.5);
    const auto plan = small_plan();
    const auto sq = certify_squeezing(f, {0.5, 1.5}, plan);
    CHECK_THROWS_AS(reparam_geraumig(f, {0.5, 1.5, 1.5}, sq), ParameterError);
    CHECK_THROWS_AS(reparam_geraumig(f, {0.5, 1.4, 0.5}, sq), PreconditionError);
    auto bad = sq;
    bad.pass = false;
    CHECK_THROWS_AS(reparam_geraumig(f, {0.5, 1.5, 0.5}, bad), PreconditionError);
}

TEST_CASE("variation epsilon") {
    // min{a/2, a^3 T / (2(a + bT))} by hand
    const double e = std::exp(1.0);
    CHECK(variation_epsilon0(1.0, e, 1.0) == Catch::Approx(1.0 / (2.0 * (1.0 + e))));
    CHECK(variation_epsilon0(1.0, e, 1.0) >= 0.134470);
    CHECK(variation_epsilon0(1.0, e, 1.0) < 0.134471);
    CHECK(variation_epsilon0(0.5, 10.0, 1.0) == Catch::Approx(0.125 / (2 * 10.5)));
    CHECK(variation_epsilon0(0.5, 0.01, 1000.0) == 0.25);
    CHECK(variation_epsilon0(0.2, 1e-9, 1.0) == Catch::Approx(0.02).epsilon(1e-6));
    CHECK_THROWS_AS(variation_epsilon0(0.0, 1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(variation_epsilon0(1.0, 1.0, -1.0), ParameterError);
}

TEST_CASE("h normalization") {
    const auto plan = small_plan();
    const auto ok = check_h_normalization(h_default(), plan);
    CHECK(ok.pass);
    CHECK(ok.sup_h == Catch::Approx(0.5));
    CHECK(ok.sup_dh == Catch::Approx(1.0));
    CHECK_FALSE(check_h_normalization(h_default().scaled(3.0), plan).pass);
    PolyMap linear(2);
    linear.add_term(0, {1, 0}, 0.1);
    const auto lin = check_h_normalization(linear, plan);
    CHECK_FALSE(lin.vanishes_to_second_order);
    CHECK_FALSE(lin.pass);
}

TEST_CASE("variation of the identity chain") {
    const auto plan = small_plan();
    const ChainHandle id = identity_chain(2);
    const auto cert = certify_geraumig(id, {0.0, 1.0}, plan);
    REQUIRE(cert.pass);
    const double a = std::min(cert.a_jacobian, cert.squeeze.ratio_a);
    const double eps0 = variation_epsilon0(a, cert.b_timederiv, 1.0);
    CHECK(eps0 >= 0.134470);
    CHECK(eps0 < 0.134471);
    for (double eps : {eps0, -eps0}) {
        const Variation v = apply_variation(id, cert, h_default(), eps, plan);
        CHECK(v.warnings.empty());
        const auto m = check_class_M(v.field, {0.0, 1.0}, plan);
        CHECK(m.pass);
        // g_0 = id + eps h
        const CPoint z{Complex(0.2, 0.1), Complex(0.3, -0.2)};
        CHECK(distance(v.chain(0.0, z), z + h_default()(z) * eps) < 1e-15);
        CHECK(v.chain(1.0, z) == id(1.0, z));
        // perturbed field is the Herglotz field of the varied chain
        CHECK(distance(v.chain.herglotz(0.4, z), -v.field(z, 0.4)) < 1e-12);
    }
    CHECK_THROWS_AS(apply_variation(id, cert, h_default(), 2 * eps0, plan), ParameterError);
    const Variation forced = apply_variation(id, cert, h_default(), 2 * eps0, plan, true);
    CHECK_FALSE(forced.warnings.empty());
}

TEST_CASE("variation needs a certificate starting at zero") {
    const auto plan = small_plan();
    const ChainHandle id = identity_chain(2);
    const auto cert = certify_geraumig(id, {0.5, 1.0}, plan);
    CHECK_THROWS_AS(apply_variation(id, cert, h_default(), 0.01, plan), PreconditionError);
}

TEST_CASE("dilation") {
    const auto plan = small_plan();
    CHECK(dilation_ratio(0.5) == Catch::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(dilate_chain(identity_chain(2), 1.0), ParameterError);
    const ChainHandle slit = slit_chain(0.5, 1.5);
    const ChainHandle d = dilate_chain(slit, 0.5);
    const CPoint z{Complex(0.3, 0.2), Complex(-0.1, 0.4)};
    CHECK(distance(d(0.2, z), slit(0.2, z * 0.5) * 2.0) < 1e-15);
    const auto c = certify_squeezing(d, {0.0, 2.0}, plan);
    CHECK(c.pass);
    CHECK(c.ratio_a >= dilation_ratio(0.5) - 1e-6);
}

TEST_CASE("close-to-identity chain") {
    const auto plan = small_plan();
    PolyMap f = PolyMap::identity(2);
    f.add_term(0, {2, 0}, 0.3);
    const auto cti = chain_from_close_to_identity(f.to_map("f"), 0.6, plan);
    CHECK(cti.sup_defect <= 0.6);
    const CPoint z{Complex(0.3, 0.2), Complex(-0.1, 0.4)};
    const double t = 0.7;
    const CPoint expect = f(z * std::exp(-t)) + z * (std::exp(t) - std::exp(-t));
    CHECK(distance(cti.chain(t, z), expect) < 1e-15);
    CHECK(distance(cti.chain.herglotz(t, z), -cti.field(z, t)) < 1e-12);
    const auto eb = check_ematrix_bounds(cti.field, {0.0, 2.0}, plan);
    CHECK(eb.bound_pass);
    CHECK(eb.inequality_pass);
    // margin at |z| = 0.5 against the lower bound with c|z| = 0.3
    CHECK(local_squeeze_margin(cti.field, CPoint{0.5, 0.0}, 0.0) >= 0.7 / 1.3 - 1e-12);
    CHECK_THROWS_AS(chain_from_close_to_identity(f.to_map("f"), 0.2, plan), PreconditionError);
    CHECK_THROWS_AS(chain_from_close_to_identity(f.to_map("f"), 1.0, plan), ParameterError);
}

TEST_CASE("starlike truncation and evolution to the ball") {
    const auto plan = small_plan();
    const HoloMap phi = phi_map().to_map("Phi");
    const HoloMap phinv = PolyMap::shear(-kPhiCoefficient).to_map("Phi^-1");
    CHECK(check_inverse(phi, phinv, plan) < 1e-12);
    CHECK_THROWS_AS(check_inverse(phi, phi, plan), InputError);
    const HoloMap t = starlike_truncate(phi, phinv, 4.0, plan);
    CHECK(std::abs(functional_L102(t) - kPhiCoefficient * 0.75) < 1e-12);
    CHECK(starlike_margin(phi, plan) > 0.0);
    const ChainHandle ch = evolution_to_ball_chain(phi, phinv, 4.0, plan);
    const double L = std::log(4.0);
    const CPoint z{Complex(0.3, 0.2), Complex(-0.1, 0.4)};
    CHECK(distance(ch(L, z), z * 4.0) < 1e-14);
    CHECK(distance(ch(L + 1.0, z), z * (4.0 * std::exp(1.0))) < 1e-13);
    CHECK(distance(ch(0.0, z), t(z)) < 1e-15);
    std::vector<double> ts{0.0, 0.5, L, 2.0};
    CHECK(check_normalization(ch, ts).pass);
}

TEST_CASE("sampled injectivity") {
    const auto plan = small_plan();
    CHECK(sampled_injectivity(phi_map().to_map(), plan, 2000).pass);
    // z -> (z1^2, z2) identifies z1 and -z1
    SamplingPlan sym = plan;
    sym.extra_points = {CPoint{0.5, 0.1}, CPoint{-0.5, 0.1}};
    PolyMap sq(2);
    sq.add_term(0, {2, 0}, 1.0);
    sq.add_term(1, {0, 1}, 1.0);
    const auto r = sampled_injectivity(sq.to_map(), sym, 20000);
    CHECK(r.min_ratio < 0.2);
}
