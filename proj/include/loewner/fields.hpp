#pragma once

// Herglotz vector fields G(z, t) on the unit ball and sampled checks of the
// class-M condition Re<-G(z,t), z> >= 0.
//
// Every catalog field is normalized: G(0, t) = 0 and dG_0 = -id. Time
// dependence is piecewise continuous; the discontinuity times are exposed as
// breakpoints so integrators can step across them exactly.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "loewner/linalg.hpp"
#include "loewner/sampling.hpp"

namespace loewner {

enum class FieldKind {
    LinearRadial,
    Componentwise,
    Blended,
    SlitExample,
    EMatrix,
    PerturbedChainField,
    Custom,
};

std::string to_string(FieldKind kind);

/// A Caratheodory-class function p on the disc (p(0) = 1, Re p > 0).
struct CaratheodoryFn {
    std::string name;
    std::function<Complex(Complex)> p;
};

namespace caratheodory {
CaratheodoryFn one();        ///< p = 1
CaratheodoryFn cayley();     ///< p = (1 + zeta) / (1 - zeta)
CaratheodoryFn one_minus();  ///< p = 1 - zeta
/// Looks a catalog function up by name; throws InputError if unknown.
CaratheodoryFn by_name(const std::string& name);
}  // namespace caratheodory

/// Implementation interface behind FieldSpec. eval() may assume |z| < 1 and t >= 0.
class FieldModel {
public:
    virtual ~FieldModel() = default;
    virtual FieldKind kind() const = 0;
    virtual std::size_t dim() const = 0;
    virtual std::string describe() const = 0;
    virtual CPoint eval(const CPoint& z, double t) const = 0;
    /// Times where the field may jump in t, sorted ascending.
    virtual std::vector<double> breakpoints() const { return {}; }
};

using EMatrixFn = std::function<CMatrix(const CPoint&, double)>;

/// Immutable, cheaply copyable handle to a field model.
class FieldSpec {
public:
    FieldSpec() = default;
    explicit FieldSpec(std::shared_ptr<const FieldModel> model);

    /// G(z, t) = -z.
    static FieldSpec linear_radial(std::size_t n);
    /// G(z) = -(z_1 p_1(z_1), ..., z_n p_n(z_n)).
    static FieldSpec componentwise(std::vector<CaratheodoryFn> p);
    /// theta(t) G_1 + (1 - theta(t)) G_2 with G_1 = -z, G_2 componentwise and
    /// theta the indicator of [on.lo, on.hi); on.hi may be +infinity.
    static FieldSpec blended(Interval on, std::vector<CaratheodoryFn> p);
    /// (-theta z_1 - (1 - theta)(z_1 - z_1^2), -z_2) on C^2, theta = 1 on [t1, t2).
    static FieldSpec slit_example(double t1, double t2);
    /// G(z, t) = -[id - E(z,t)]^{-1} [id + E(z,t)] z with the declared bound |E| <= c.
    static FieldSpec ematrix(std::size_t n, EMatrixFn e, double bound_c,
                             std::vector<double> breakpoints = {}, std::string label = "E");
    static FieldSpec custom(std::size_t n, std::string label,
                            std::function<CPoint(const CPoint&, double)> g,
                            std::vector<double> breakpoints = {});

    bool valid() const noexcept { return static_cast<bool>(model_); }
    FieldKind kind() const { return model_->kind(); }
    std::size_t dim() const { return model_->dim(); }
    std::string describe() const { return model_->describe(); }
    std::vector<double> breakpoints() const { return model_->breakpoints(); }
    const FieldModel& model() const { return *model_; }

    /// G(z, t); DomainError unless |z| < 1 and t >= 0.
    CPoint operator()(const CPoint& z, double t) const;
    /// G(z, t) without the domain check (for integrator stages).
    CPoint eval_unchecked(const CPoint& z, double t) const { return model_->eval(z, t); }

private:
    std::shared_ptr<const FieldModel> model_;
};

/// Declared bound of an EMatrix field, or a negative value for other kinds.
double ematrix_bound(const FieldSpec& spec);
/// E(z, t) of an EMatrix field; InputError for other kinds.
CMatrix ematrix_value(const FieldSpec& spec, const CPoint& z, double t);

struct MarginSample {
    CPoint z;
    double t = 0.0;
    double margin = 0.0;
};

struct MembershipReport {
    Interval interval;
    std::size_t grid_size = 0;
    double tolerance = 0.0;
    double min_margin = 0.0;
    CPoint worst_z;
    double worst_t = 0.0;
    bool pass = false;
    std::vector<MarginSample> samples;  ///< filled only on request
};

inline constexpr double kMembershipTolerance = 1e-9;

/// Pointwise squeezing margin -Re<G(z,t), z>/|z|^2. DomainError for z = 0 or |z| >= 1.
double local_squeeze_margin(const FieldSpec& spec, const CPoint& z, double t);

/// Sampled class-M check on plan.points x plan.times(interval, WithProbes).
/// Passes iff the minimum margin is >= -tol. Evaluation failures are rethrown
/// as EvaluationError naming the offending (z, t).
MembershipReport check_class_M(const FieldSpec& spec, const Interval& interval,
                               const SamplingPlan& plan, double tol = kMembershipTolerance,
                               bool keep_samples = false);

struct EMatrixBoundReport {
    double bound_c = 0.0;
    double sup_norm_E = 0.0;  ///< sampled sup of |E(z,t)|
    bool bound_pass = false;  ///< sup |E| <= c
    /// Worst slack of |z|^2 (1 - c|z|)/(1 + c|z|) <= Re<-G, z> <= |z|^2 (1 + c|z|)/(1 - c|z|),
    /// as min over samples of the smaller of the two differences (>= 0 when both hold).
    double inequality_slack = 0.0;
    CPoint worst_z;
    double worst_t = 0.0;
    bool inequality_pass = false;
    std::size_t samples = 0;
};

/// Checks the declared bound of an EMatrix field and the two-sided margin
/// inequality it implies on plan.points x plan.times(interval, Closed). The
/// inequality needs E(0, t) = 0 (then |E(z,t)| <= c|z| by Schwarz).
EMatrixBoundReport check_ematrix_bounds(const FieldSpec& spec, const Interval& interval,
                                        const SamplingPlan& plan, double tol = 1e-12);

}  // namespace loewner
