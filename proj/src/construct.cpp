#include "loewner/construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "loewner/errors.hpp"
#include "loewner/parallel.hpp"

namespace loewner {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::vector<double> merged(std::vector<double> a, const std::vector<double>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::erase_if(a, [](double t) { return !(t > 0.0) || !std::isfinite(t); });
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

std::vector<CPoint> sphere_samples(const SamplingPlan& plan, std::size_t n) {
    auto dirs = plan.sphere_directions(n);
    for (const auto& z : plan.points(n)) {
        const double r = z.norm();
        if (r > 0.0) dirs.push_back(z * (1.0 / r));
    }
    return dirs;
}

// Field of a varied chain: -[d(f_t) + alpha dh]^{-1}(df_t/dt + alpha' h) on
// [0, T), the driver of the unvaried chain afterwards.
class PerturbedField final : public FieldModel {
public:
    PerturbedField(ChainHandle base, PolyMap h, VariationPlan plan)
        : base_(std::move(base)), h_(std::move(h)), plan_(plan) {}

    FieldKind kind() const override { return FieldKind::PerturbedChainField; }
    std::size_t dim() const override { return base_.dim; }
    std::string describe() const override {
        return "PerturbedChainField of " + base_.name + " with eps = " + num(plan_.eps) +
               " on [0, " + num(plan_.T) + ")";
    }
    CPoint eval(const CPoint& z, double t) const override {
        if (t >= plan_.T) {
            if (base_.driver) return (*base_.driver)(z, t);
            return -base_.herglotz(t, z);
        }
        const Complex al(plan_.alpha(t));
        const CMatrix m = base_.jacobian(t, z) + h_.jacobian(z) * al;
        const CPoint rhs = base_.time_derivative(t, z) + h_(z) * plan_.alpha_prime(t);
        return -solve(m, rhs);
    }
    std::vector<double> breakpoints() const override {
        return merged({plan_.T}, base_.driver ? base_.driver->breakpoints() : std::vector<double>{});
    }

private:
    ChainHandle base_;
    PolyMap h_;
    VariationPlan plan_;
};

}  // namespace

double ReparamPlan::alpha(double t) const {
    if (!(t > t1) || t >= t2) return 0.0;
    if (t < midpoint()) return -A * (t - t1);
    return A * (t - t2);
}

double ReparamPlan::alpha_prime(double t) const {
    if (t < t1 || t >= t2) return 0.0;
    return t < midpoint() ? -A : A;
}

ChainHandle reparam_geraumig(const ChainHandle& chain, const ReparamPlan& plan,
                             const SqueezeCertificate& squeeze) {
    if (!(plan.t1 >= 0.0) || !(plan.t2 > plan.t1) || !std::isfinite(plan.t2)) {
        throw ParameterError("reparametrization needs 0 <= T1 < T2 < infinity");
    }
    if (!squeeze.pass || !(squeeze.interval == Interval{plan.t1, plan.t2})) {
        throw PreconditionError("reparametrization needs a passing squeeze certificate on [" +
                                num(plan.t1) + ", " + num(plan.t2) + ")");
    }
    if (!(plan.A > 0.0) || !(plan.A < squeeze.ratio_a)) {
        throw ParameterError("reparametrization needs 0 < A < a = " + num(squeeze.ratio_a) +
                             ", got A = " + num(plan.A));
    }

    ChainHandle g;
    g.name = "reparam(" + chain.name + ")";
    g.origin = ChainOrigin::Constructed;
    g.dim = chain.dim;
    g.normal = chain.normal;
    g.tol = chain.tol;
    g.max_step = chain.max_step;
    g.eval = [chain, plan](double t, const CPoint& z) {
        const double al = plan.alpha(t);
        if (al == 0.0) return chain(t, z);
        return chain(t - al, z * std::exp(al));
    };
    g.jac = [chain, plan](double t, const CPoint& z) {
        const double al = plan.alpha(t);
        if (al == 0.0) return chain.jacobian(t, z);
        return chain.jacobian(t - al, z * std::exp(al)) * Complex(std::exp(al));
    };
    g.dtime = [chain, plan](double t, const CPoint& z) {
        const double al = plan.alpha(t);
        const double dal = plan.alpha_prime(t);
        if (al == 0.0 && dal == 0.0) return chain.time_derivative(t, z);
        const CPoint w = z * std::exp(al);
        return chain.time_derivative(t - al, w) * (1.0 - dal) +
               chain.jacobian(t - al, w) * w * Complex(dal);
    };
    g.herglotz_fn = [chain, plan](double t, const CPoint& z) {
        const double al = plan.alpha(t);
        const double dal = plan.alpha_prime(t);
        if (al == 0.0 && dal == 0.0) return chain.herglotz(t, z);
        const double e = std::exp(al);
        return chain.herglotz(t - al, z * e) * ((1.0 - dal) / e) + z * dal;
    };
    if (chain.driver) {
        const FieldSpec base = *chain.driver;
        // Breakpoints of the base field, pulled back through tau(t) = t - alpha(t).
        std::vector<double> breaks{plan.t1, plan.midpoint(), plan.t2};
        const double tau_mid = plan.midpoint() - plan.alpha(plan.midpoint());
        for (double tb : base.breakpoints()) {
            if (tb <= plan.t1 || tb >= plan.t2) {
                breaks.push_back(tb);
            } else if (tb < tau_mid) {
                breaks.push_back((tb + plan.A * plan.t1) / (1.0 + plan.A));
            } else {
                breaks.push_back((tb - plan.A * plan.t2) / (1.0 - plan.A));
            }
        }
        g.driver = FieldSpec::custom(
            chain.dim, "reparam(" + base.describe() + ")",
            [base, plan](const CPoint& z, double t) {
                const double al = plan.alpha(t);
                const double dal = plan.alpha_prime(t);
                if (al == 0.0 && dal == 0.0) return base(z, t);
                const double e = std::exp(al);
                return base(z * e, t - al) * ((1.0 - dal) / e) - z * dal;
            },
            merged(breaks, {}));
    }
    return g;
}

double variation_epsilon0(double a, double b, double T) {
    if (!(a > 0.0 && a <= 1.0) || !(b > 0.0) || !(T > 0.0) || !std::isfinite(b) ||
        !std::isfinite(T)) {
        throw ParameterError("epsilon_0 needs a in (0, 1], b > 0 and T > 0");
    }
    return std::min(a / 2.0, a * a * a * T / (2.0 * (a + b * T)));
}

HNormalization check_h_normalization(const PolyMap& h, const SamplingPlan& plan) {
    HNormalization rep;
    rep.vanishes_to_second_order = h.lowest_degree() >= 2;
    for (const auto& u : sphere_samples(plan, h.dim())) {
        rep.sup_h = std::max(rep.sup_h, h(u).norm());
        rep.sup_dh = std::max(rep.sup_dh, operator_norm(h.jacobian(u)));
    }
    rep.pass = rep.vanishes_to_second_order && rep.sup_h <= 1.0 + 1e-9 &&
               rep.sup_dh <= 1.0 + 1e-9;
    return rep;
}

Variation apply_variation(const ChainHandle& chain, const GeraumigCertificate& cert,
                          const PolyMap& h, double eps, const SamplingPlan& plan, bool force) {
    Variation out;
    if (h.dim() != chain.dim) throw InputError("perturbation has the wrong dimension");
    if (!std::isfinite(eps)) throw ParameterError("eps must be finite");
    if (cert.interval.lo != 0.0) {
        throw PreconditionError("variation needs a geraumig certificate on an interval [0, T)");
    }
    if (!cert.pass) {
        if (!force) {
            throw PreconditionError("chain is not certified geraumig on [0, " +
                                    num(cert.interval.hi) + "): " + cert.note);
        }
        out.warnings.push_back("geraumig certificate failed; proceeding because of --force");
    }

    VariationPlan& vp = out.plan;
    vp.T = cert.interval.hi;
    vp.a = std::min(cert.a_jacobian, cert.squeeze.ratio_a);
    vp.b = cert.b_timederiv;
    vp.eps0 = variation_epsilon0(vp.a, vp.b, vp.T);
    vp.eps = eps;

    out.h_check = check_h_normalization(h, plan);
    if (!out.h_check.pass) {
        const std::string msg = "perturbation fails normalization (sup|h| = " +
                                num(out.h_check.sup_h) + ", sup|dh| = " +
                                num(out.h_check.sup_dh) + ", h(0) = dh_0 = 0 required)";
        if (!force) throw PreconditionError(msg);
        out.warnings.push_back(msg + "; proceeding because of --force");
    }
    if (std::abs(eps) > vp.eps0) {
        const std::string msg = "|eps| = " + num(std::abs(eps)) + " exceeds eps0 = " + num(vp.eps0);
        if (!force) throw ParameterError(msg);
        out.warnings.push_back(msg + "; proceeding because of --force");
    }

    // d(f_t) + alpha dh must stay invertible on the grid.
    const auto pts = plan.points(chain.dim);
    const auto times = plan.times(Interval{0.0, vp.T}, TimeMode::HalfOpen);
    const std::size_t np = pts.size();
    std::vector<char> bad(np * times.size(), 0);
    parallel_for(bad.size(), [&](std::size_t k) {
        const CPoint& z = pts[k % np];
        const double t = times[k / np];
        const auto sv =
            singular_values(chain.jacobian(t, z) + h.jacobian(z) * Complex(vp.alpha(t)));
        bad[k] = sv.back() < kSingularRatio * sv.front();
    });
    for (std::size_t k = 0; k < bad.size(); ++k) {
        if (bad[k]) {
            throw ConstructionError("d(f_t) + alpha dh is singular at z = " +
                                    to_string(pts[k % np]) + ", t = " + num(times[k / np]));
        }
    }

    const VariationPlan p = vp;
    ChainHandle g;
    g.name = "vary(" + chain.name + ", eps = " + num(eps) + ")";
    g.origin = ChainOrigin::Constructed;
    g.dim = chain.dim;
    g.normal = chain.normal;
    g.tol = chain.tol;
    g.max_step = chain.max_step;
    g.eval = [chain, h, p](double t, const CPoint& z) {
        if (t >= p.T) return chain(t, z);
        return chain(t, z) + h(z) * p.alpha(t);
    };
    g.jac = [chain, h, p](double t, const CPoint& z) {
        if (t >= p.T) return chain.jacobian(t, z);
        return chain.jacobian(t, z) + h.jacobian(z) * Complex(p.alpha(t));
    };
    g.dtime = [chain, h, p](double t, const CPoint& z) {
        if (t >= p.T) return chain.time_derivative(t, z);
        return chain.time_derivative(t, z) + h(z) * p.alpha_prime(t);
    };
    out.field = FieldSpec(std::make_shared<PerturbedField>(chain, h, p));
    g.driver = out.field;
    out.chain = std::move(g);
    return out;
}

double dilation_ratio(double r) { return (1.0 - r) / (1.0 + r); }

ChainHandle dilate_chain(const ChainHandle& chain, double r) {
    if (!(r > 0.0 && r < 1.0)) throw ParameterError("dilation radius must lie in (0, 1)");
    ChainHandle f;
    f.name = "dilate(" + chain.name + ", r = " + num(r) + ")";
    f.origin = ChainOrigin::Constructed;
    f.dim = chain.dim;
    f.normal = chain.normal;
    f.tol = chain.tol;
    f.max_step = chain.max_step;
    f.eval = [chain, r](double t, const CPoint& z) { return chain(t, z * r) * (1.0 / r); };
    f.jac = [chain, r](double t, const CPoint& z) { return chain.jacobian(t, z * r); };
    f.dtime = [chain, r](double t, const CPoint& z) {
        return chain.time_derivative(t, z * r) * (1.0 / r);
    };
    f.herglotz_fn = [chain, r](double t, const CPoint& z) {
        return chain.herglotz(t, z * r) * (1.0 / r);
    };
    if (chain.driver) {
        const FieldSpec base = *chain.driver;
        f.driver = FieldSpec::custom(
            chain.dim, "dilate(" + base.describe() + ", r = " + num(r) + ")",
            [base, r](const CPoint& z, double t) { return base(z * r, t) * (1.0 / r); },
            base.breakpoints());
    }
    return f;
}

CloseToIdentity chain_from_close_to_identity(const HoloMap& f, double c,
                                             const SamplingPlan& plan, bool force) {
    if (!(c >= 0.0 && c < 1.0)) throw ParameterError("c must lie in [0, 1)");
    const std::size_t n = f.dim();
    const CMatrix id = CMatrix::identity(n);
    CloseToIdentity out;
    const auto pts = plan.points(n);
    std::vector<double> defect(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        defect[i] = operator_norm(f.jacobian(pts[i]) - id);
    });
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (defect[i] > out.sup_defect) {
            out.sup_defect = defect[i];
            out.worst_z = pts[i];
        }
    }
    if (out.sup_defect > c && !force) {
        throw PreconditionError("sampled |df - id| = " + num(out.sup_defect) + " exceeds c = " +
                                num(c) + " at z = " + to_string(out.worst_z));
    }

    auto emat = [f, id](const CPoint& z, double t) {
        return (id - f.jacobian(z * std::exp(-t))) * Complex(std::exp(-2.0 * t));
    };
    out.field = FieldSpec::ematrix(n, emat, c, {}, "close-to-identity(" + f.name() + ")");

    ChainHandle& ch = out.chain;
    ch.name = "close-to-identity(" + f.name() + ")";
    ch.origin = ChainOrigin::Constructed;
    ch.dim = n;
    ch.eval = [f](double t, const CPoint& z) {
        return f(z * std::exp(-t)) + z * (std::exp(t) - std::exp(-t));
    };
    ch.jac = [f, id](double t, const CPoint& z) {
        const double em = std::exp(-t);
        return f.jacobian(z * em) * Complex(em) + id * Complex(std::exp(t) - em);
    };
    ch.dtime = [f](double t, const CPoint& z) {
        const double em = std::exp(-t);
        return z * (std::exp(t) + em) - f.jacobian(z * em) * z * em;
    };
    ch.driver = out.field;
    return out;
}

double check_inverse(const HoloMap& f, const HoloMap& f_inv, const SamplingPlan& plan) {
    if (f.dim() != f_inv.dim()) throw InputError("map and inverse have different dimensions");
    double worst = 0.0;
    CPoint witness;
    for (const auto& z : plan.points(f.dim())) {
        const double d = distance(f_inv(f(z)), z);
        if (!(d <= worst)) {
            worst = d;
            witness = z;
        }
    }
    if (!(worst <= 1e-10)) {
        throw InputError("F_inv o F differs from the identity by " + num(worst) + " at z = " +
                         to_string(witness));
    }
    return worst;
}

HoloMap starlike_truncate(const HoloMap& f, const HoloMap& f_inv, double N,
                          const SamplingPlan& plan) {
    if (!(N > 1.0) || !std::isfinite(N)) throw ParameterError("truncation needs 1 < N < infinity");
    check_inverse(f, f_inv, plan);
    const double inv_n = 1.0 / N;
    return HoloMap(
        f.dim(), [f, f_inv, N, inv_n](const CPoint& z) { return f_inv(f(z) * inv_n) * N; },
        [f, f_inv, inv_n](const CPoint& z) {
            return f_inv.jacobian(f(z) * inv_n) * f.jacobian(z);
        },
        "truncate(" + f.name() + ", N = " + num(N) + ")");
}

double starlike_margin(const HoloMap& f, const SamplingPlan& plan) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& z : plan.points(f.dim())) {
        const double r2 = z.norm_squared();
        if (r2 == 0.0) continue;
        worst = std::min(worst, inner(solve(f.jacobian(z), f(z)), z).real() / r2);
    }
    return worst;
}

ChainHandle evolution_to_ball_chain(const HoloMap& f, const HoloMap& f_inv, double N,
                                    const SamplingPlan& plan, bool force) {
    if (!(N > 1.0) || !std::isfinite(N)) throw ParameterError("evolution to a ball needs N > 1");
    check_inverse(f, f_inv, plan);
    const double margin = starlike_margin(f, plan);
    if (!(margin > 0.0) && !force) {
        throw PreconditionError("F fails the sampled starlikeness condition (margin " +
                                num(margin) + ")");
    }
    const std::size_t n = f.dim();
    const double L = std::log(N);
    const CMatrix id = CMatrix::identity(n);
    ChainHandle c;
    c.name = "to-ball(" + f.name() + ", N = " + num(N) + ")";
    c.origin = ChainOrigin::Constructed;
    c.dim = n;
    c.eval = [f, f_inv, N, L](double t, const CPoint& z) {
        if (t >= L) return z * (std::exp(t - L) * N);
        return f_inv(f(z) * (std::exp(t) / N)) * N;
    };
    c.jac = [f, f_inv, N, L, id](double t, const CPoint& z) {
        if (t >= L) return id * Complex(std::exp(t - L) * N);
        const double et = std::exp(t);
        return f_inv.jacobian(f(z) * (et / N)) * f.jacobian(z) * Complex(et);
    };
    c.dtime = [f, f_inv, N, L](double t, const CPoint& z) {
        if (t >= L) return z * (std::exp(t - L) * N);
        const double et = std::exp(t);
        const CPoint fz = f(z);
        return f_inv.jacobian(fz * (et / N)) * fz * et;
    };
    c.driver = FieldSpec::custom(
        n, "to-ball(" + f.name() + ")",
        [f, L](const CPoint& z, double t) {
            if (t >= L) return -z;
            return -solve(f.jacobian(z), f(z));
        },
        {L});
    return c;
}

InjectivityReport sampled_injectivity(const HoloMap& f, const SamplingPlan& plan,
                                      std::size_t pairs) {
    const auto pts = plan.points(f.dim());
    if (pts.size() < 2) throw ParameterError("injectivity check needs at least two points");
    std::vector<CPoint> values(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { values[i] = f(pts[i]); });

    Rng rng(plan.seed ^ 0x9e3779b97f4a7c15ULL);
    InjectivityReport rep;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    const auto m = static_cast<double>(pts.size());
    while (rep.pairs < pairs) {
        const auto i = static_cast<std::size_t>(rng.uniform() * m);
        const auto j = static_cast<std::size_t>(rng.uniform() * m);
        const double dz = distance(pts[i], pts[j]);
        if (i == j || dz == 0.0) continue;
        ++rep.pairs;
        const double r = distance(values[i], values[j]) / dz;
        if (r < rep.min_ratio) {
            rep.min_ratio = r;
            rep.worst_z = pts[i];
            rep.worst_w = pts[j];
        }
    }
    rep.pass = rep.min_ratio > 1e-10;
    return rep;
}

}  // namespace loewner
