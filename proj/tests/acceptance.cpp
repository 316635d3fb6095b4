// Acceptance suite: one PASS/FAIL line per criterion. Criterion 11 re-runs
// 1-10 and compares verdicts and witnesses bit for bit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "loewner/certify.hpp"
#include "loewner/chain.hpp"
#include "loewner/coeff.hpp"
#include "loewner/construct.hpp"
#include "loewner/evolve.hpp"
#include "loewner/fields.hpp"

using namespace loewner;

namespace {

// Pinned tolerances and budgets.
constexpr double kIntegratorTol = 1e-8;
constexpr double kIntegratorBudget = 5.0;
constexpr double kSlitTol = 1e-6;
constexpr double kSlitBudget = 30.0;
constexpr double kFlowSlackTol = 1e-6;
constexpr double kSlitWitnessMargin = 0.011;
constexpr double kMuTol = 1e-10;
constexpr double kAgreementUlps = 4.0;
constexpr double kEps0Leading = 0.134470;  // first six digits, truncated
constexpr double kEps0Digit = 1e-6;
constexpr double kMembershipTol = 1e-9;
constexpr double kVariationBudget = 60.0;
constexpr double kL102Tol = 1e-9;
constexpr double kMarginExpected = -0.3464;
constexpr double kMarginTol = 1e-4;
constexpr double kDilationSlack = 1e-6;

constexpr double T1 = 0.5, T2 = 1.5;
const double kSqrt3 = std::sqrt(3.0);

struct Outcome {
    bool pass = false;
    std::string detail;
    std::string fingerprint;  // exact witness data for the determinism check
};

std::string hex(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

std::string hex(const CPoint& z) {
    std::string s = "(";
    for (std::size_t i = 0; i < z.dim(); ++i) s += hex(z[i].real()) + "," + hex(z[i].imag()) + ";";
    return s + ")";
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SamplingPlan standard_plan() { return SamplingPlan{}; }

SamplingPlan plan_with_edge() {
    SamplingPlan p;
    p.extra_points.push_back(CPoint{0.99, 0.0});
    return p;
}

ChainHandle blended_cayley() {
    return field_chain(
        FieldSpec::blended({T1, T2}, {caratheodory::cayley(), caratheodory::cayley()}));
}

HoloMap phi() { return phi_map().to_map("Phi"); }
HoloMap phi_inverse() { return PolyMap::shear(-kPhiCoefficient).to_map("Phi^-1"); }

ChainHandle close_chain() {
    PolyMap f = PolyMap::identity(2);
    f.add_term(0, {2, 0}, 0.3);
    return chain_from_close_to_identity(f.to_map("f"), 0.6, standard_plan()).chain;
}

// 1. phi_{s,t} of -z against e^{s-t} z.
Outcome integrator_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    EvolutionFamily fam;
    fam.spec = FieldSpec::linear_radial(2);
    const auto pts = standard_plan().points(2);
    double worst = 0.0;
    for (int i = 0; i < 9; ++i) {
        for (int j = 0; j < 9; ++j) {
            const double s = 0.5 * i, t = s + 0.25 * j;
            const double scale = std::exp(s - t);
            for (const auto& z : pts) {
                worst = std::max(worst, distance(integrate_evolution(fam, s, t, z), z * scale));
            }
        }
    }
    const double wall = seconds_since(t0);
    Outcome o;
    o.pass = worst <= kIntegratorTol && wall <= kIntegratorBudget;
    o.detail = "max error " + fmt("%.2e", worst) + " over " + std::to_string(pts.size()) +
               " points x 81 (s,t); " + fmt("%.2f", wall) + " s";
    o.fingerprint = hex(worst);
    return o;
}

// 2. Integrated slit flow and recovered chain against the closed forms.
Outcome slit_closed_form() {
    const auto t0 = std::chrono::steady_clock::now();
    EvolutionFamily fam;
    fam.spec = FieldSpec::slit_example(T1, T2);
    const auto pts = standard_plan().points(2);
    double flow_err = 0.0, recover_err = 0.0;

    // phi_{T2,t} directly, and phi_{s,t} across the switch through f_t^{-1} o f_s.
    for (const auto& z : pts) {
        for (double t : {T2 + 0.3, T2 + 1.0, T2 + 2.5}) {
            const double q = std::exp(T2 - t);
            const CPoint expect{q * z[0] / (1.0 + (q - 1.0) * z[0]), q * z[1]};
            flow_err = std::max(flow_err, distance(integrate_evolution(fam, T2, t, z), expect) /
                                              std::max(1.0, expect.norm()));
        }
        for (auto [s, t] : {std::pair{0.2, 2.0}, {1.0, 1.9}, {T1, T2 + 0.5}}) {
            const double Js = s < T1 ? 1.0 - std::exp(s - T1) + std::exp(s - T2) : std::exp(s - T2);
            const Complex fs1 = std::exp(s) * z[0] / (1.0 - Js * z[0]);
            const Complex u = std::exp(-t) * fs1;
            const CPoint expect{u / (1.0 + u), std::exp(s - t) * z[1]};
            flow_err = std::max(flow_err, distance(integrate_evolution(fam, s, t, z), expect) /
                                              std::max(1.0, expect.norm()));
        }
    }
    for (std::size_t k = 0; k < pts.size(); k += 4) {
        const CPoint& z = pts[k];
        for (double s : {T1, 1.0, T2}) {
            const double es = std::exp(s);
            const CPoint expect{es * z[0] / (1.0 - std::exp(s - T2) * z[0]), es * z[1]};
            const Recovery r = recover_chain(fam, s, z);
            recover_err = std::max(recover_err, distance(r.value, expect) / expect.norm());
        }
    }
    const double wall = seconds_since(t0);
    Outcome o;
    o.pass = flow_err <= kSlitTol && recover_err <= kSlitTol && wall <= kSlitBudget;
    o.detail = "flow error " + fmt("%.2e", flow_err) + ", recover error " +
               fmt("%.2e", recover_err) + " (relative); " + fmt("%.2f", wall) + " s";
    o.fingerprint = hex(flow_err) + hex(recover_err);
    return o;
}

// 3. Field pass implies flow pass; the slit chain fails off the window.
Outcome squeeze_equivalence() {
    const auto plan = plan_with_edge();
    const std::vector<std::pair<std::string, ChainHandle>> chains{
        {"identity", identity_chain(2)},
        {"slit", slit_chain(T1, T2)},
        {"blended-cayley", blended_cayley()},
        {"close-to-identity", close_chain()},
    };
    const Interval ivs[] = {{0.0, T1}, {T1, T2}, {T2, 2.5}};
    bool ok = true;
    int field_passes = 0;
    std::string fp, notes;
    for (const auto& [name, chain] : chains) {
        for (const auto& iv : ivs) {
            const auto c = certify_squeezing(chain, iv, plan);
            fp += name + hex(c.field_min_margin) + hex(c.field_worst_z) + hex(c.flow.worst_ratio) +
                  (c.pass ? "P" : "F");
            if (c.field_pass) {
                ++field_passes;
                const bool implied = c.flow.pass && c.flow.a >= c.ratio_a - kFlowSlackTol;
                if (!implied) {
                    ok = false;
                    notes += " " + name + " flow fails after field pass;";
                }
            }
            if (name == "slit" && !(iv == Interval{T1, T2})) {
                const bool witnessed = !c.pass && c.field_min_margin <= kSlitWitnessMargin &&
                                       c.field_worst_z == CPoint{0.99, 0.0};
                if (!witnessed) {
                    ok = false;
                    notes += " slit not witnessed on [" + fmt("%g", iv.lo) + "," + fmt("%g", iv.hi) + ");";
                } else {
                    notes += " slit margin " + fmt("%.4f", c.field_min_margin) + " at (0.99,0);";
                }
            }
        }
    }
    Outcome o;
    o.pass = ok;
    o.detail = std::to_string(field_passes) + "/12 field passes, all flow-confirmed;" + notes;
    o.fingerprint = fp;
    return o;
}

// 4. mu(A) |A^-1| = 1 on random matrices.
Outcome min_modulus_identity() {
    Rng rng(kDefaultSeed);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const std::size_t n = 1 + k % 4;
        CMatrix a(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = {rng.normal(), rng.normal()};
        worst = std::max(worst, std::abs(min_modulus(a) * operator_norm(inverse(a)) - 1.0));
    }
    Outcome o;
    o.pass = worst <= kMuTol;
    o.detail = "max |mu(A)|A^-1| - 1| = " + fmt("%.2e", worst) + " over 1000 matrices";
    o.fingerprint = hex(worst);
    return o;
}

// 5. Reparametrized slit chain is geraeumig and agrees outside the window.
Outcome reparam_slit() {
    const auto plan = standard_plan();
    const ChainHandle f = slit_chain(T1, T2);
    const auto sq = certify_squeezing(f, {T1, T2}, plan);
    const ReparamPlan rp{T1, T2, 0.5};
    const ChainHandle g = reparam_geraumig(f, rp, sq);
    const Interval check{T1 + 0.1 * (T2 - T1), T2 - 0.1 * (T2 - T1)};
    const auto cert = certify_geraumig(g, check, plan);

    Rng rng(kDefaultSeed + 5);
    const auto pts = plan.points(2);
    double worst_ulps = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double u = rng.uniform();
        const double t = k % 2 == 0 ? u * T1 : T2 + 2.0 * u;
        const CPoint& z = pts[static_cast<std::size_t>(rng.uniform() * pts.size())];
        const CPoint a = g(t, z), b = f(t, z);
        const double ulp = std::numeric_limits<double>::epsilon() * std::max(b.norm(), 1e-300);
        worst_ulps = std::max(worst_ulps, distance(a, b) / ulp);
    }
    Outcome o;
    o.pass = cert.pass && worst_ulps <= kAgreementUlps;
    o.detail = "geraeumig on [0.6,1.4): a = " + fmt("%.4f", std::min(cert.a_jacobian, cert.squeeze.ratio_a)) +
               ", b = " + fmt("%.4f", cert.b_timederiv) + "; outside agreement " +
               fmt("%.1f", worst_ulps) + " ulp";
    o.fingerprint = hex(cert.a_jacobian) + hex(cert.b_timederiv) + hex(cert.squeeze.ratio_a) +
                    hex(worst_ulps) + (cert.pass ? "P" : "F");
    return o;
}

// 6. Variation of the identity chain by +-eps0 h.
Outcome variation_identity() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto plan = standard_plan();
    const ChainHandle id = identity_chain(2);
    const Interval iv{0.0, 1.0};
    const auto cert = certify_geraumig(id, iv, plan);
    PolyMap h(2);
    h.add_term(0, {0, 2}, 0.5);
    const double a = std::min(cert.a_jacobian, cert.squeeze.ratio_a);
    const double eps0 = variation_epsilon0(a, cert.b_timederiv, iv.length());
    bool ok = cert.pass && eps0 >= kEps0Leading && eps0 < kEps0Leading + kEps0Digit;
    std::string fp = hex(eps0), margins;
    for (double eps : {eps0, -eps0}) {
        const Variation v = apply_variation(id, cert, h, eps, plan);
        const auto m = check_class_M(v.field, iv, plan, kMembershipTol);
        ok = ok && m.pass && m.min_margin >= -kMembershipTol;
        margins += " " + fmt("%.4f", m.min_margin);
        fp += hex(m.min_margin) + hex(m.worst_z) + hex(m.worst_t);
    }
    const double wall = seconds_since(t0);
    ok = ok && wall <= kVariationBudget;
    Outcome o;
    o.pass = ok;
    o.detail = "eps0 = " + fmt("%.9f", eps0) + "; class-M min margins" + margins + "; " +
               fmt("%.2f", wall) + " s";
    o.fingerprint = fp;
    return o;
}

// 7. Sharp coefficient of Phi^N and the bound at R = N and R = 2.5.
Outcome sharp_bound() {
    const auto plan = standard_plan();
    bool ok = true;
    double worst = 0.0;
    std::string fp;
    for (double N : {2.0, 3.0, 10.0, 1e6}) {
        const HoloMap t = starlike_truncate(phi(), phi_inverse(), N, plan);
        const Complex v = functional_L102(t);
        const double expect = 1.5 * kSqrt3 * (1.0 - 1.0 / N);
        worst = std::max(worst, std::abs(v - expect));
        fp += hex(v.real()) + hex(v.imag());
        const auto at_n = reachability_bound_check(t, N);
        ok = ok && at_n.satisfied && at_n.sharp;
    }
    const HoloMap t3 = starlike_truncate(phi(), phi_inverse(), 3.0, plan);
    const auto early = reachability_bound_check(t3, 2.5);
    ok = ok && worst <= kL102Tol && !early.satisfied &&
         std::abs(early.margin - kMarginExpected) <= kMarginTol;
    fp += hex(early.margin);
    Outcome o;
    o.pass = ok;
    o.detail = "max |L102 - (3 sqrt3/2)(1-1/N)| = " + fmt("%.2e", worst) +
               "; equality at R = N; R = 2.5: bound " + fmt("%.4f", early.bound) + ", margin " +
               fmt("%.4f", early.margin);
    o.fingerprint = fp;
    return o;
}

// 8. Phi itself violates every finite-time bound.
Outcome phi_not_reachable() {
    bool ok = true;
    std::string fp, detail;
    for (double N : {2.0, 10.0, 1e6}) {
        const auto v = reachability_bound_check(phi(), N);
        ok = ok && !v.satisfied && v.coefficient_magnitude > v.bound;
        fp += hex(v.coefficient_magnitude) + hex(v.bound);
        detail += " N=" + fmt("%g", N) + ": " + fmt("%.5f", v.coefficient_magnitude) + " > " +
                  fmt("%.5f", v.bound) + ";";
    }
    Outcome o;
    o.pass = ok;
    o.detail = "bound violated:" + detail;
    o.fingerprint = fp;
    return o;
}

// 9. Dilated chains squeeze with ratio (1 - r)/(1 + r).
Outcome dilation() {
    const auto plan = standard_plan();
    const std::vector<std::pair<std::string, ChainHandle>> chains{
        {"identity", identity_chain(2)},
        {"slit", slit_chain(T1, T2)},
        {"blended-cayley", blended_cayley()},
        {"Phi-starlike", starlike_chain(phi())},
    };
    bool ok = true;
    std::string fp, fails;
    double worst_excess = std::numeric_limits<double>::infinity();
    for (const auto& [name, chain] : chains) {
        for (double r : {0.3, 0.5, 0.7}) {
            const auto c = certify_squeezing(dilate_chain(chain, r), {0.0, 2.0}, plan);
            const double excess = c.ratio_a - (dilation_ratio(r) - kDilationSlack);
            worst_excess = std::min(worst_excess, excess);
            if (!c.pass || excess < 0.0) {
                ok = false;
                fails += " " + name + " r=" + fmt("%g", r) + ";";
            }
            fp += hex(c.ratio_a) + hex(c.field_worst_z) + (c.pass ? "P" : "F");
        }
    }
    Outcome o;
    o.pass = ok;
    o.detail = "12 dilated chains, min(ratio - (1-r)/(1+r)) = " + fmt("%.4f", worst_excess) +
               (fails.empty() ? "" : "; failing:" + fails);
    o.fingerprint = fp;
    return o;
}

// 10. E-bound and two-sided margin inequality for the close-to-identity chain.
Outcome close_to_identity() {
    const auto plan = standard_plan();
    PolyMap f = PolyMap::identity(2);
    f.add_term(0, {2, 0}, 0.3);
    const auto cti = chain_from_close_to_identity(f.to_map("f"), 0.6, plan);
    const auto eb = check_ematrix_bounds(cti.field, {0.0, 2.0}, plan);
    Outcome o;
    o.pass = eb.bound_pass && eb.inequality_pass;
    o.detail = "sup |E| = " + fmt("%.4f", eb.sup_norm_E) + " <= 0.6; inequality slack " +
               fmt("%.2e", eb.inequality_slack) + " over " + std::to_string(eb.samples) +
               " samples";
    o.fingerprint = hex(eb.sup_norm_E) + hex(eb.inequality_slack) + hex(eb.worst_z) + hex(eb.worst_t);
    return o;
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

Outcome guarded(const Criterion& c) {
    try {
        return c.run();
    } catch (const std::exception& e) {
        return Outcome{false, std::string("raised: ") + e.what(), "error"};
    }
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "integrator oracle", integrator_oracle},
        {2, "slit closed form", slit_closed_form},
        {3, "squeezing equivalence", squeeze_equivalence},
        {4, "minimum modulus", min_modulus_identity},
        {5, "reparametrization", reparam_slit},
        {6, "variation", variation_identity},
        {7, "sharp bound", sharp_bound},
        {8, "Phi not reachable", phi_not_reachable},
        {9, "dilation", dilation},
        {10, "close to identity", close_to_identity},
    };
    int failures = 0;
    std::vector<Outcome> first;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        first.push_back(guarded(c));
        const Outcome& o = first.back();
        failures += o.pass ? 0 : 1;
        std::printf("criterion %2d %s  %-22s %s [%.1f s]\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                    o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }

    bool same = true;
    std::string diff;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const Outcome again = guarded(criteria[k]);
        if (again.pass != first[k].pass || again.fingerprint != first[k].fingerprint) {
            same = false;
            diff += " " + std::to_string(criteria[k].id);
        }
    }
    failures += same ? 0 : 1;
    std::printf("criterion 11 %s  %-22s %s\n", same ? "PASS" : "FAIL", "determinism",
                same ? "second run of 1-10 reproduces verdicts and witnesses bitwise"
                     : ("differs in:" + diff).c_str());
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
