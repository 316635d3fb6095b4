#include "loewner/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "loewner/errors.hpp"
#include "loewner/parallel.hpp"

namespace loewner {

std::string to_string(FieldKind kind) {
    switch (kind) {
        case FieldKind::LinearRadial: return "LinearRadial";
        case FieldKind::Componentwise: return "Componentwise";
        case FieldKind::Blended: return "Blended";
        case FieldKind::SlitExample: return "SlitExample";
        case FieldKind::EMatrix: return "EMatrix";
        case FieldKind::PerturbedChainField: return "PerturbedChainField";
        case FieldKind::Custom: return "Custom";
    }
    return "unknown";
}

namespace caratheodory {

CaratheodoryFn one() {
    return {"one", [](Complex) { return Complex(1.0); }};
}

CaratheodoryFn cayley() {
    return {"cayley", [](Complex w) { return (1.0 + w) / (1.0 - w); }};
}

CaratheodoryFn one_minus() {
    return {"one_minus", [](Complex w) { return 1.0 - w; }};
}

CaratheodoryFn by_name(const std::string& name) {
    if (name == "one") return one();
    if (name == "cayley") return cayley();
    if (name == "one_minus") return one_minus();
    throw InputError("unknown Caratheodory function '" + name +
                     "' (expected one, cayley, one_minus)");
}

}  // namespace caratheodory

namespace {

std::string interval_text(double lo, double hi) {
    std::ostringstream os;
    os.precision(17);
    os << '[' << lo << ", " << hi << ')';
    return os.str();
}

std::vector<double> finite_positive(std::initializer_list<double> ts) {
    std::vector<double> out;
    for (double t : ts) {
        if (std::isfinite(t) && t > 0.0) out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

class LinearRadialField final : public FieldModel {
public:
    explicit LinearRadialField(std::size_t n) : n_(n) {}
    FieldKind kind() const override { return FieldKind::LinearRadial; }
    std::size_t dim() const override { return n_; }
    std::string describe() const override { return "LinearRadial G = -z"; }
    CPoint eval(const CPoint& z, double) const override { return -z; }

private:
    std::size_t n_;
};

CPoint componentwise_value(const std::vector<CaratheodoryFn>& p, const CPoint& z) {
    CPoint g(z.dim());
    for (std::size_t j = 0; j < z.dim(); ++j) g[j] = -z[j] * p[j].p(z[j]);
    return g;
}

std::string names_of(const std::vector<CaratheodoryFn>& p) {
    std::string s;
    for (const auto& f : p) s += (s.empty() ? "" : ",") + f.name;
    return s;
}

class ComponentwiseField final : public FieldModel {
public:
    explicit ComponentwiseField(std::vector<CaratheodoryFn> p) : p_(std::move(p)) {}
    FieldKind kind() const override { return FieldKind::Componentwise; }
    std::size_t dim() const override { return p_.size(); }
    std::string describe() const override { return "Componentwise p=(" + names_of(p_) + ")"; }
    CPoint eval(const CPoint& z, double) const override { return componentwise_value(p_, z); }

private:
    std::vector<CaratheodoryFn> p_;
};

class BlendedField final : public FieldModel {
public:
    BlendedField(Interval on, std::vector<CaratheodoryFn> p) : on_(on), p_(std::move(p)) {}
    FieldKind kind() const override { return FieldKind::Blended; }
    std::size_t dim() const override { return p_.size(); }
    std::string describe() const override {
        return "Blended theta=1 on " + interval_text(on_.lo, on_.hi) + ", p=(" + names_of(p_) +
               ")";
    }
    CPoint eval(const CPoint& z, double t) const override {
        if (t >= on_.lo && t < on_.hi) return -z;
        return componentwise_value(p_, z);
    }
    std::vector<double> breakpoints() const override { return finite_positive({on_.lo, on_.hi}); }

private:
    Interval on_;
    std::vector<CaratheodoryFn> p_;
};

class SlitExampleField final : public FieldModel {
public:
    SlitExampleField(double t1, double t2) : t1_(t1), t2_(t2) {}
    FieldKind kind() const override { return FieldKind::SlitExample; }
    std::size_t dim() const override { return 2; }
    std::string describe() const override {
        return "SlitExample theta=1 on " + interval_text(t1_, t2_);
    }
    CPoint eval(const CPoint& z, double t) const override {
        if (t >= t1_ && t < t2_) return -z;
        return CPoint{-(z[0] - z[0] * z[0]), -z[1]};
    }
    std::vector<double> breakpoints() const override { return finite_positive({t1_, t2_}); }

private:
    double t1_, t2_;
};

class EMatrixField final : public FieldModel {
public:
    EMatrixField(std::size_t n, EMatrixFn e, double c, std::vector<double> breaks, std::string label)
        : n_(n), e_(std::move(e)), c_(c), breaks_(std::move(breaks)), label_(std::move(label)) {}
    FieldKind kind() const override { return FieldKind::EMatrix; }
    std::size_t dim() const override { return n_; }
    std::string describe() const override {
        std::ostringstream os;
        os << "EMatrix " << label_ << " with |E| <= " << c_;
        return os.str();
    }
    CPoint eval(const CPoint& z, double t) const override {
        const CMatrix e = e_(z, t);
        const CMatrix id = CMatrix::identity(n_);
        return -solve(id - e, (id + e) * z);
    }
    std::vector<double> breakpoints() const override { return breaks_; }

    double bound() const { return c_; }
    CMatrix matrix(const CPoint& z, double t) const { return e_(z, t); }

private:
    std::size_t n_;
    EMatrixFn e_;
    double c_;
    std::vector<double> breaks_;
    std::string label_;
};

class CustomField final : public FieldModel {
public:
    CustomField(std::size_t n, std::string label, std::function<CPoint(const CPoint&, double)> g,
                std::vector<double> breaks)
        : n_(n), label_(std::move(label)), g_(std::move(g)), breaks_(std::move(breaks)) {}
    FieldKind kind() const override { return FieldKind::Custom; }
    std::size_t dim() const override { return n_; }
    std::string describe() const override { return "Custom " + label_; }
    CPoint eval(const CPoint& z, double t) const override { return g_(z, t); }
    std::vector<double> breakpoints() const override { return breaks_; }

private:
    std::size_t n_;
    std::string label_;
    std::function<CPoint(const CPoint&, double)> g_;
    std::vector<double> breaks_;
};

void require_dim(std::size_t n) {
    if (n == 0 || n > kMaxDim) throw ParameterError("field dimension out of range");
}

void require_caratheodory(const std::vector<CaratheodoryFn>& p) {
    require_dim(p.size());
    for (const auto& f : p) {
        if (!f.p) throw InputError("Caratheodory function '" + f.name + "' is empty");
    }
}

std::vector<double> sorted_breaks(std::vector<double> b) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

}  // namespace

FieldSpec::FieldSpec(std::shared_ptr<const FieldModel> model) : model_(std::move(model)) {
    if (!model_) throw InputError("FieldSpec requires a model");
}

FieldSpec FieldSpec::linear_radial(std::size_t n) {
    require_dim(n);
    return FieldSpec(std::make_shared<LinearRadialField>(n));
}

FieldSpec FieldSpec::componentwise(std::vector<CaratheodoryFn> p) {
    require_caratheodory(p);
    return FieldSpec(std::make_shared<ComponentwiseField>(std::move(p)));
}

FieldSpec FieldSpec::blended(Interval on, std::vector<CaratheodoryFn> p) {
    require_caratheodory(p);
    if (!(on.lo >= 0.0) || !(on.hi > on.lo)) {
        throw ParameterError("blended switching interval must satisfy 0 <= T1 < T2");
    }
    return FieldSpec(std::make_shared<BlendedField>(on, std::move(p)));
}

FieldSpec FieldSpec::slit_example(double t1, double t2) {
    if (!(t1 >= 0.0) || !(t2 > t1) || !std::isfinite(t2)) {
        throw ParameterError("SlitExample needs 0 <= T1 < T2 < infinity");
    }
    return FieldSpec(std::make_shared<SlitExampleField>(t1, t2));
}

FieldSpec FieldSpec::ematrix(std::size_t n, EMatrixFn e, double bound_c,
                             std::vector<double> breakpoints, std::string label) {
    require_dim(n);
    if (!e) throw InputError("EMatrix field requires a generator");
    if (!(bound_c >= 0.0 && bound_c < 1.0)) {
        throw ParameterError("EMatrix bound c must lie in [0, 1)");
    }
    return FieldSpec(std::make_shared<EMatrixField>(n, std::move(e), bound_c,
                                                    sorted_breaks(std::move(breakpoints)),
                                                    std::move(label)));
}

FieldSpec FieldSpec::custom(std::size_t n, std::string label,
                            std::function<CPoint(const CPoint&, double)> g,
                            std::vector<double> breakpoints) {
    require_dim(n);
    if (!g) throw InputError("custom field requires a function");
    return FieldSpec(std::make_shared<CustomField>(n, std::move(label), std::move(g),
                                                   sorted_breaks(std::move(breakpoints))));
}

CPoint FieldSpec::operator()(const CPoint& z, double t) const {
    if (z.dim() != dim()) throw DomainError("point dimension does not match the field");
    if (!z.is_finite() || z.norm() >= 1.0) {
        throw DomainError("field evaluated outside the open unit ball at z = " + to_string(z));
    }
    if (!(t >= 0.0)) throw DomainError("field evaluated at negative time");
    return model_->eval(z, t);
}

double ematrix_bound(const FieldSpec& spec) {
    if (const auto* m = dynamic_cast<const EMatrixField*>(&spec.model())) return m->bound();
    return -1.0;
}

CMatrix ematrix_value(const FieldSpec& spec, const CPoint& z, double t) {
    if (const auto* m = dynamic_cast<const EMatrixField*>(&spec.model())) return m->matrix(z, t);
    throw InputError("field is not of EMatrix kind");
}

double local_squeeze_margin(const FieldSpec& spec, const CPoint& z, double t) {
    const double r2 = z.norm_squared();
    if (r2 == 0.0) throw DomainError("squeezing margin is undefined at z = 0");
    return -inner(spec(z, t), z).real() / r2;
}

MembershipReport check_class_M(const FieldSpec& spec, const Interval& interval,
                               const SamplingPlan& plan, double tol, bool keep_samples) {
    const auto times = plan.times(interval, TimeMode::WithProbes);
    auto points = plan.points(spec.dim());
    std::erase_if(points, [](const CPoint& z) { return z.norm_squared() == 0.0; });
    if (points.empty() || times.empty()) throw ParameterError("sampling grid is empty");

    const std::size_t np = points.size();
    std::vector<double> margins(times.size() * np);
    parallel_for(margins.size(), [&](std::size_t k) {
        const CPoint& z = points[k % np];
        const double t = times[k / np];
        try {
            margins[k] = local_squeeze_margin(spec, z, t);
        } catch (const Error& e) {
            std::ostringstream os;
            os.precision(17);
            os << "class-M check failed at z = " << to_string(z) << ", t = " << t << ": "
               << e.what();
            throw EvaluationError(os.str());
        }
    });

    MembershipReport rep;
    rep.interval = interval;
    rep.grid_size = margins.size();
    rep.tolerance = tol;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < margins.size(); ++k) {
        if (margins[k] < rep.min_margin || std::isnan(margins[k])) {
            rep.min_margin = margins[k];
            rep.worst_z = points[k % np];
            rep.worst_t = times[k / np];
            if (std::isnan(margins[k])) break;
        }
    }
    rep.pass = rep.min_margin >= -tol;
    if (keep_samples) {
        rep.samples.reserve(margins.size());
        for (std::size_t k = 0; k < margins.size(); ++k) {
            rep.samples.push_back({points[k % np], times[k / np], margins[k]});
        }
    }
    return rep;
}

EMatrixBoundReport check_ematrix_bounds(const FieldSpec& spec, const Interval& interval,
                                        const SamplingPlan& plan, double tol) {
    EMatrixBoundReport rep;
    rep.bound_c = ematrix_bound(spec);
    if (rep.bound_c < 0.0) throw InputError("field is not of EMatrix kind");
    const auto times = plan.times(interval, TimeMode::Closed);
    auto points = plan.points(spec.dim());
    std::erase_if(points, [](const CPoint& z) { return z.norm_squared() == 0.0; });
    const std::size_t np = points.size();
    const double c = rep.bound_c;
    std::vector<double> enorm(times.size() * np), slack(times.size() * np);
    parallel_for(enorm.size(), [&](std::size_t k) {
        const CPoint& z = points[k % np];
        const double t = times[k / np];
        enorm[k] = operator_norm(ematrix_value(spec, z, t));
        const double r = z.norm();
        const double r2 = z.norm_squared();
        const double m = -inner(spec(z, t), z).real();
        const double lo = r2 * (1.0 - c * r) / (1.0 + c * r);
        const double hi = r2 * (1.0 + c * r) / (1.0 - c * r);
        slack[k] = std::min(m - lo, hi - m);
    });
    rep.samples = enorm.size();
    rep.inequality_slack = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < enorm.size(); ++k) {
        rep.sup_norm_E = std::max(rep.sup_norm_E, enorm[k]);
        if (slack[k] < rep.inequality_slack) {
            rep.inequality_slack = slack[k];
            rep.worst_z = points[k % np];
            rep.worst_t = times[k / np];
        }
    }
    rep.bound_pass = rep.sup_norm_E <= c + tol;
    rep.inequality_pass = rep.inequality_slack >= -tol;
    return rep;
}

}  // namespace loewner
