#pragma once

// Chain constructors: time reparametrization of a squeezing chain, variation
// of a geraeumig chain by a polynomial direction, dilation, chains built from
// maps close to the identity, starlike truncation and evolution to a ball.

#include <optional>
#include <string>
#include <vector>

#include "loewner/certify.hpp"
#include "loewner/chain.hpp"
#include "loewner/maps.hpp"

namespace loewner {

/// Piecewise-linear time change: 0 outside (t1, t2), -A(t - t1) up to the
/// midpoint and A(t - t2) after it.
struct ReparamPlan {
    double t1 = 0.0;
    double t2 = 0.0;
    double A = 0.0;

    double midpoint() const { return 0.5 * (t1 + t2); }
    double alpha(double t) const;
    /// Right derivative of alpha.
    double alpha_prime(double t) const;
};

/// g_t(z) = f_{t - alpha(t)}(e^{alpha(t)} z). Requires a passing squeeze
/// certificate of the chain on [t1, t2) (PreconditionError) and 0 < A < a
/// (ParameterError).
ChainHandle reparam_geraumig(const ChainHandle& chain, const ReparamPlan& plan,
                             const SqueezeCertificate& squeeze);

/// min{a/2, a^3 T / (2(a + bT))}; ParameterError unless a in (0, 1], b > 0, T > 0.
double variation_epsilon0(double a, double b, double T);

struct HNormalization {
    double sup_h = 0.0;   ///< sampled sup of |h| on the unit sphere
    double sup_dh = 0.0;  ///< sampled sup of |dh| on the unit sphere
    bool vanishes_to_second_order = false;
    bool pass = false;
};

/// Sups of |h| and |dh| over the ball, sampled on the unit sphere (maximum
/// principle) at the plan's directions and its normalized points.
HNormalization check_h_normalization(const PolyMap& h, const SamplingPlan& plan);

struct VariationPlan {
    double T = 0.0;
    double a = 0.0;  ///< min(a_jacobian, squeezing ratio)
    double b = 0.0;
    double eps0 = 0.0;
    double eps = 0.0;
    double alpha(double t) const { return t < T ? eps * (1.0 - t / T) : 0.0; }
    double alpha_prime(double t) const { return t < T ? -eps / T : 0.0; }
};

struct Variation {
    VariationPlan plan;
    HNormalization h_check;
    ChainHandle chain;  ///< g_t = f_t + alpha(t) h
    FieldSpec field;    ///< the perturbed field -[dg]^{-1} dg/dt
    std::vector<std::string> warnings;
};

/// Varies a chain certified geraeumig on [0, T). eps may be signed (the sign
/// selects +h or -h); |eps| > eps0 is refused unless force is set. Scans the
/// grid for singular d(f_t) + alpha dh (ConstructionError with witness).
Variation apply_variation(const ChainHandle& chain, const GeraumigCertificate& cert,
                          const PolyMap& h, double eps, const SamplingPlan& plan,
                          bool force = false);

/// f_t(z) = g_t(rz)/r for r in (0, 1).
ChainHandle dilate_chain(const ChainHandle& chain, double r);

/// Expected squeezing ratio of a dilated chain, (1 - r)/(1 + r).
double dilation_ratio(double r);

struct CloseToIdentity {
    ChainHandle chain;
    FieldSpec field;     ///< the EMatrix field
    double sup_defect = 0.0;  ///< sampled sup |df_z - id|
    CPoint worst_z;
};

/// Chain f_t(z) = f(e^{-t}z) + (e^t - e^{-t})z with its EMatrix field
/// E(z,t) = e^{-2t}[id - df_{e^{-t}z}]. PreconditionError (naming the
/// witness) when the sampled sup |df - id| exceeds c, unless force is set;
/// ParameterError unless 0 <= c < 1.
CloseToIdentity chain_from_close_to_identity(const HoloMap& f, double c,
                                             const SamplingPlan& plan, bool force = false);

/// Sup over the plan's points of |F_inv(F(z)) - z|; InputError above 1e-10.
double check_inverse(const HoloMap& f, const HoloMap& f_inv, const SamplingPlan& plan);

/// z -> N F_inv(F(z)/N).
HoloMap starlike_truncate(const HoloMap& f, const HoloMap& f_inv, double N,
                          const SamplingPlan& plan);

/// Grid infimum of Re<[dF_z]^{-1} F(z), z>/|z|^2 (a necessary condition for
/// starlikeness is that it is positive).
double starlike_margin(const HoloMap& f, const SamplingPlan& plan);

/// f_t = N F_inv(e^t F(z)/N) for t <= log N, e^t z afterwards. Refused
/// (PreconditionError) when the sampled starlikeness margin is not positive,
/// unless force is set.
ChainHandle evolution_to_ball_chain(const HoloMap& f, const HoloMap& f_inv, double N,
                                    const SamplingPlan& plan, bool force = false);

struct InjectivityReport {
    std::size_t pairs = 0;
    double min_ratio = 0.0;  ///< min |f(z) - f(w)| / |z - w| over the pairs
    CPoint worst_z, worst_w;
    bool pass = false;       ///< no sampled pair collides
};

/// Pairwise injectivity check on `pairs` seeded pairs of grid points. This is
/// evidence only; univalence is not certified.
InjectivityReport sampled_injectivity(const HoloMap& f, const SamplingPlan& plan,
                                      std::size_t pairs = 10000);

}  // namespace loewner
