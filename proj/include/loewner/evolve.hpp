#pragma once

// Evolution families of the Loewner ODE d(phi)/dt = G(phi, t), phi_{s,s} = id,
// integrated by an adaptive Dormand-Prince 4(5) scheme that steps exactly onto
// the declared breakpoints of the field. Also: recovery of the canonical chain
// f_s = lim e^t phi_{s,t}, and Cauchy-integral Jacobians.

#include <array>
#include <span>
#include <vector>

#include "loewner/fields.hpp"
#include "loewner/maps.hpp"
#include "loewner/sampling.hpp"

namespace loewner {

struct EvolutionFamily {
    FieldSpec spec;
    double tol = 1e-9;       ///< global error target (relative to |phi|)
    double max_step = 0.05;
    /// Tolerance for the limit e^t phi_{s,t}, relative to max(1, |f_s(z)|).
    double recover_tol = 1e-9;
};

/// phi_{s,t}(z). Throws DomainError for bad arguments, IntegrationError when
/// the step size underflows, ConsistencyError when |phi| exceeds |z| + tol.
CPoint integrate_evolution(const EvolutionFamily& fam, double s, double t, const CPoint& z);

/// phi_{s,t_k}(z) for every checkpoint t_k >= s, in one sweep. The
/// checkpoints must be sorted ascending.
std::vector<CPoint> integrate_evolution(const EvolutionFamily& fam, double s,
                                        std::span<const double> checkpoints, const CPoint& z);

struct Recovery {
    CPoint value;             ///< e^T phi_{s,T}(z) at the accepted horizon T
    double horizon = 0.0;     ///< T - s
    double difference = 0.0;  ///< |v(T) - v(previous horizon)|
    /// Error estimate of value: difference scaled by the O(e^{-T}) rate of
    /// convergence, plus the integration tolerance.
    double error_estimate = 0.0;
};

inline constexpr std::array<double, 4> kRecoveryHorizons{5.0, 10.0, 20.0, 40.0};

/// Canonical chain value f_s(z) = lim_{t -> inf} e^t phi_{s,t}(z), evaluated on
/// the horizons s + {5, 10, 20, 40}. Throws HorizonError if no horizon meets
/// recover_tol.
Recovery recover_chain(const EvolutionFamily& fam, double s, const CPoint& z);

inline constexpr int kJacobianSamples = 32;

/// min(0.1, (1 - |z|) / 2).
double default_jacobian_radius(const CPoint& z);

/// d(map)_z by the trapezoid rule on circles of the given radius in each
/// coordinate direction. DomainError if |z| + radius >= 1.
CMatrix jacobian(const MapFn& map, const CPoint& z, double radius,
                 int samples = kJacobianSamples);

/// max over the plan's points of |phi_{s,t}(z) - phi_{u,t}(phi_{s,u}(z))|.
double semigroup_defect(const EvolutionFamily& fam, double s, double u, double t,
                        const SamplingPlan& plan);

}  // namespace loewner
