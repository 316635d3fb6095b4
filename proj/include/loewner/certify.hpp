#pragma once

// Sampled certificates: exponential squeezing in its field form
// Re<[d(f_t)_z]^{-1} df_t/dt (z), z/|z|^2> >= a and in its flow form
// |phi_{s,t}(z)| <= e^{a(s-t)} |z|, and the three geraeumig conditions.
// Every certificate is relative to the sampling plan it records.

#include <optional>
#include <string>
#include <vector>

#include "loewner/chain.hpp"
#include "loewner/sampling.hpp"

namespace loewner {

/// A certificate claims squeezing only when the sampled ratio reaches this.
inline constexpr double kDefaultAMinThreshold = 0.02;
/// a used in the flow check is the field ratio minus this slack.
inline constexpr double kFlowSlack = 1e-6;

struct SqueezeOptions {
    double a_min_threshold = kDefaultAMinThreshold;
    double flow_slack = kFlowSlack;
    bool keep_samples = false;
};

struct FlowWitness {
    double s = 0.0;
    double t = 0.0;
    CPoint z;
    CPoint phi;
    double ratio = 0.0;  ///< |phi_{s,t}(z)| / (e^{a(s-t)} |z|)
};

struct FlowReport {
    double a = 0.0;               ///< ratio tested
    std::size_t pairs = 0;        ///< number of (s, t) pairs
    std::size_t samples = 0;      ///< number of (s, t, z) samples
    double worst_ratio = 0.0;     ///< max |phi| / (e^{a(s-t)}|z|)
    FlowWitness worst;
    bool pass = false;
};

struct SqueezeCertificate {
    Interval interval;
    double ratio_a = 0.0;           ///< min(field_min_margin, 1)
    double field_min_margin = 0.0;  ///< raw grid infimum of the field margin
    CPoint field_worst_z;
    double field_worst_t = 0.0;
    double flow_worst_ratio = 0.0;
    FlowReport flow;
    double a_min_threshold = kDefaultAMinThreshold;
    std::string grid;  ///< description of the sampling plan
    bool field_pass = false;
    bool pass = false;
    std::string note;  ///< failure reason, e.g. a singular Jacobian witness
    std::vector<MarginSample> samples;
};

/// Flow-form check over all pairs s < t of plan.flow_grid(interval), with
/// phi_{s,t} integrated from the chain's driver. Passes iff every sample has
/// |phi| <= e^{a(s-t)}|z| + 10 tol.
FlowReport flow_check(const ChainHandle& chain, const Interval& interval,
                      const SamplingPlan& plan, double a);

SqueezeCertificate certify_squeezing(const ChainHandle& chain, const Interval& interval,
                                     const SamplingPlan& plan, const SqueezeOptions& opt = {});

struct GeraumigCertificate {
    Interval interval;
    double a_jacobian = 0.0;  ///< grid infimum of mu(d(f_t)_z)
    CPoint jacobian_worst_z;
    double jacobian_worst_t = 0.0;
    double b_timederiv = 0.0;  ///< grid supremum of |df_t/dt (z)| / |z|
    CPoint timederiv_worst_z;
    double timederiv_worst_t = 0.0;
    double b_raw = 0.0;  ///< grid supremum of |df_t/dt (z)|
    SqueezeCertificate squeeze;
    bool consistency_pass = false;  ///< ratio_a <= b/a + 1e-6
    bool pass = false;
    std::string note;
};

GeraumigCertificate certify_geraumig(const ChainHandle& chain, const Interval& interval,
                                     const SamplingPlan& plan, const SqueezeOptions& opt = {});

struct BoundednessReport {
    double sup_norm = 0.0;     ///< sup over the grid of |f_t(z)|
    double radial_sup = 0.0;   ///< sup of |f_t(z)| / |z|
    CPoint worst_z;
    double worst_t = 0.0;
    std::vector<double> times;
    std::vector<double> sup_per_time;
    bool containment_pass = false;  ///< |phi_{s,t}(z)| <= e^{a(s-t)} < 1 on samples
    double containment_worst = 0.0;  ///< max |phi_{s,t}(z)| / e^{a(s-t)}
};

/// Requires a passing squeeze certificate for the same interval
/// (PreconditionError otherwise).
BoundednessReport boundedness_report(const ChainHandle& chain, const Interval& interval,
                                     const SamplingPlan& plan, const SqueezeCertificate& squeeze);

}  // namespace loewner
