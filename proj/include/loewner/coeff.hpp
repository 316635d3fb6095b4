#pragma once

// Taylor coefficients at the origin by iterated circle quadrature, the
// functional picking the z_2^2 coefficient of the first component, polynomial
// perturbation directions for linear functionals, and the coefficient bound
// for maps reachable in time log N.

#include <string>
#include <vector>

#include "loewner/maps.hpp"
#include "loewner/sampling.hpp"

namespace loewner {

inline constexpr int kCoefficientSamples = 64;
inline constexpr double kCoefficientRadius = 0.5;
inline constexpr int kDirectionMaxDegree = 8;

struct CoefficientReport {
    MultiIndex index;
    std::size_t component = 0;  ///< 0-based
    Complex value;
    double radius = 0.0;
    /// |value(radius) - value(0.6 radius)|, a stability indicator.
    double estimated_error = 0.0;
};

/// Coefficient of z^index in component `component` (0-based) of the map at 0.
/// Integrates only over coordinates with a positive exponent; the others are
/// held at 0. DomainError if radius >= 1/sqrt(n).
Complex taylor_coefficient(const MapFn& map, std::size_t n, const MultiIndex& index,
                           std::size_t component, double radius = kCoefficientRadius,
                           int samples = kCoefficientSamples);

CoefficientReport coefficient_report(const MapFn& map, std::size_t n, const MultiIndex& index,
                                     std::size_t component, double radius = kCoefficientRadius);

/// The coefficient of z_2^2 in f_1, i.e. (1/2) d^2 f_1 / dz_2^2 (0). Needs n >= 2.
Complex functional_L102(const HoloMap& map);

/// A linear functional on coefficient data: sum of weight * coef(index, component).
struct LinearFunctional {
    struct Term {
        MultiIndex index;
        std::size_t component = 0;
        Complex weight{1.0};
    };
    std::vector<Term> terms;

    static LinearFunctional L102(std::size_t n);
    Complex operator()(const PolyMap& p) const;
    Complex operator()(const HoloMap& f) const;
};

struct PerturbationDirection {
    PolyMap h;
    int degree = 0;        ///< j of the homogeneous part P_j used
    Complex L_of_Pj;       ///< L(P_j)
    Complex lambda;        ///< h = lambda P_j
    Complex L_of_h;        ///< L(h), with positive real part
    double sup_h = 0.0;    ///< sampled sup of |h| on the sphere
    double sup_dh = 0.0;   ///< sampled sup of |dh| on the sphere
};

/// h = lambda P_j for the lowest j >= 2 with L(P_j) != 0, where P_j is the
/// homogeneous part of degree j of f; lambda rotates L(h) onto the positive
/// axis and scales the sampled sup norms of h and dh below 1 with a 1e-3
/// safety factor. NotFoundError when L vanishes up to degree 8.
PerturbationDirection perturbation_direction(const LinearFunctional& L, const PolyMap& f,
                                             const SamplingPlan& plan = {});
PerturbationDirection perturbation_direction(const LinearFunctional& L, const HoloMap& f,
                                             const SamplingPlan& plan = {});

struct BoundVerdict {
    double N = 0.0;
    double coefficient_magnitude = 0.0;  ///< |d^2 f_1 / dz_2^2 (0)|
    double bound = 0.0;                  ///< 3 sqrt(3) (1 - 1/N)
    bool satisfied = false;              ///< magnitude <= bound + 1e-9
    double margin = 0.0;                 ///< bound - magnitude
    bool sharp = false;                  ///< |margin| <= 1e-9
};

inline constexpr double kBoundTolerance = 1e-9;

/// 3 sqrt(3) (1 - 1/N); ParameterError unless N >= 1.
double reachability_bound(double N);

/// Necessary condition for membership in the maps reachable in time log N.
BoundVerdict reachability_bound_check(const HoloMap& map, double N);

/// Phi = (z_1 + (3 sqrt(3)/2) z_2^2, z_2), the extremal map of the bound.
PolyMap phi_map();
inline constexpr double kPhiCoefficient = 2.598076211353315940291169;  // 3 sqrt(3) / 2

}  // namespace loewner
