#include "loewner/chain.hpp"

#include <cmath>

#include "loewner/errors.hpp"

namespace loewner {

std::string to_string(ChainOrigin origin) {
    switch (origin) {
        case ChainOrigin::FromField: return "FromField";
        case ChainOrigin::ClosedForm: return "ClosedForm";
        case ChainOrigin::Constructed: return "Constructed";
    }
    return "unknown";
}

CPoint ChainHandle::operator()(double t, const CPoint& z) const {
    if (!eval) throw InputError("chain '" + name + "' has no evaluator");
    return eval(t, z);
}

CMatrix ChainHandle::jacobian(double t, const CPoint& z) const {
    if (!jac) throw InputError("chain '" + name + "' has no Jacobian");
    return jac(t, z);
}

CPoint ChainHandle::time_derivative(double t, const CPoint& z) const {
    if (!dtime) throw InputError("chain '" + name + "' has no time derivative");
    return dtime(t, z);
}

CPoint ChainHandle::herglotz(double t, const CPoint& z) const {
    if (herglotz_fn) return herglotz_fn(t, z);
    return solve(jacobian(t, z), time_derivative(t, z));
}

EvolutionFamily ChainHandle::family() const {
    if (!driver) {
        throw InputError("chain '" + name +
                         "' has no driving field; transition maps are unavailable");
    }
    EvolutionFamily fam;
    fam.spec = *driver;
    fam.tol = tol;
    fam.max_step = max_step;
    return fam;
}

ChainHandle identity_chain(std::size_t n) {
    ChainHandle c;
    c.name = "identity";
    c.origin = ChainOrigin::ClosedForm;
    c.dim = n;
    c.eval = [](double t, const CPoint& z) { return z * std::exp(t); };
    c.jac = [n](double t, const CPoint&) {
        return CMatrix::identity(n) * Complex(std::exp(t));
    };
    c.dtime = [](double t, const CPoint& z) { return z * std::exp(t); };
    c.driver = FieldSpec::linear_radial(n);
    return c;
}

double slit_J(double t1, double t2, double s) {
    if (s < t1) return 1.0 - std::exp(s - t1) + std::exp(s - t2);
    if (s < t2) return std::exp(s - t2);
    return 1.0;
}

ChainHandle slit_chain(double t1, double t2) {
    const FieldSpec spec = FieldSpec::slit_example(t1, t2);
    auto theta = [t1, t2](double s) { return (s >= t1 && s < t2) ? 1.0 : 0.0; };
    ChainHandle c;
    c.name = "slit";
    c.origin = ChainOrigin::ClosedForm;
    c.dim = 2;
    c.eval = [t1, t2](double s, const CPoint& z) {
        const double J = slit_J(t1, t2, s);
        const double es = std::exp(s);
        return CPoint{es * z[0] / (1.0 - J * z[0]), es * z[1]};
    };
    c.jac = [t1, t2](double s, const CPoint& z) {
        const double J = slit_J(t1, t2, s);
        const double es = std::exp(s);
        const Complex d = 1.0 - J * z[0];
        CMatrix m(2);
        m(0, 0) = es / (d * d);
        m(1, 1) = es;
        return m;
    };
    c.dtime = [t1, t2, theta](double s, const CPoint& z) {
        const double J = slit_J(t1, t2, s);
        const double dJ = J - (1.0 - theta(s));
        const double es = std::exp(s);
        const Complex d = 1.0 - J * z[0];
        return CPoint{es * z[0] / d + es * z[0] * z[0] * dJ / (d * d), es * z[1]};
    };
    c.driver = spec;
    return c;
}

ChainHandle field_chain(const FieldSpec& spec, double tol, double max_step) {
    ChainHandle c;
    c.name = "canonical(" + spec.describe() + ")";
    c.origin = ChainOrigin::FromField;
    c.dim = spec.dim();
    c.driver = spec;
    c.tol = tol;
    c.max_step = max_step;
    EvolutionFamily fam;
    fam.spec = spec;
    fam.tol = tol;
    fam.max_step = max_step;
    c.eval = [fam](double t, const CPoint& z) { return recover_chain(fam, t, z).value; };
    c.jac = [fam](double t, const CPoint& z) {
        return jacobian([&fam, t](const CPoint& w) { return recover_chain(fam, t, w).value; }, z,
                        default_jacobian_radius(z));
    };
    c.dtime = [fam](double t, const CPoint& z) {
        const CMatrix d = jacobian(
            [&fam, t](const CPoint& w) { return recover_chain(fam, t, w).value; }, z,
            default_jacobian_radius(z));
        return -(d * fam.spec(z, t));
    };
    c.herglotz_fn = [spec](double t, const CPoint& z) { return -spec(z, t); };
    return c;
}

ChainHandle starlike_chain(const HoloMap& f) {
    const std::size_t n = f.dim();
    ChainHandle c;
    c.name = "starlike(" + f.name() + ")";
    c.origin = ChainOrigin::ClosedForm;
    c.dim = n;
    c.eval = [f](double t, const CPoint& z) { return f(z) * std::exp(t); };
    c.jac = [f](double t, const CPoint& z) { return f.jacobian(z) * Complex(std::exp(t)); };
    c.dtime = [f](double t, const CPoint& z) { return f(z) * std::exp(t); };
    c.driver = FieldSpec::custom(
        n, "starlike(" + f.name() + ")",
        [f](const CPoint& z, double) { return -solve(f.jacobian(z), f(z)); });
    return c;
}

NormalizationReport check_normalization(const ChainHandle& chain, std::span<const double> times,
                                        double tol) {
    NormalizationReport rep;
    const CPoint zero(chain.dim);
    const CMatrix id = CMatrix::identity(chain.dim);
    for (double t : times) {
        rep.max_value_at_zero = std::max(rep.max_value_at_zero, chain(t, zero).norm());
        const CMatrix d = chain.jacobian(t, zero) * Complex(std::exp(-t));
        rep.max_jacobian_defect = std::max(rep.max_jacobian_defect, operator_norm(d - id));
    }
    rep.pass = rep.max_value_at_zero <= tol && rep.max_jacobian_defect <= tol;
    return rep;
}

}  // namespace loewner
