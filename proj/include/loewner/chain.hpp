#pragma once

// Loewner chains t -> f_t as evaluable handles: value, Jacobian and time
// derivative, together with the driving field G when one is known, so that
// the transition maps f_t^{-1} o f_s can be realized as phi_{s,t}.

#include <functional>
#include <optional>
#include <string>

#include "loewner/evolve.hpp"
#include "loewner/fields.hpp"
#include "loewner/maps.hpp"

namespace loewner {

enum class ChainOrigin { FromField, ClosedForm, Constructed };

std::string to_string(ChainOrigin origin);

using ChainValueFn = std::function<CPoint(double, const CPoint&)>;
using ChainJacobianFn = std::function<CMatrix(double, const CPoint&)>;

struct ChainHandle {
    std::string name;
    ChainOrigin origin = ChainOrigin::ClosedForm;
    std::size_t dim = 0;
    bool normal = true;  ///< whether {e^{-t} f_t} is asserted to be a normal family

    ChainValueFn eval;   ///< (t, z) -> f_t(z)
    ChainJacobianFn jac; ///< (t, z) -> d(f_t)_z
    ChainValueFn dtime;  ///< (t, z) -> df_t/dt (z)
    /// Optional closed form of [d(f_t)_z]^{-1} df_t/dt (z); when absent it is
    /// obtained by solving with jac and dtime.
    ChainValueFn herglotz_fn;

    /// G with dphi/dt = G(phi, t) for the transition maps of this chain.
    std::optional<FieldSpec> driver;
    /// Integration settings used whenever phi_{s,t} of the driver is needed.
    double tol = 1e-9;
    double max_step = 0.05;

    CPoint operator()(double t, const CPoint& z) const;
    CMatrix jacobian(double t, const CPoint& z) const;
    CPoint time_derivative(double t, const CPoint& z) const;
    /// [d(f_t)_z]^{-1} df_t/dt (z) = -G(z, t). Throws SingularMatrixError if
    /// the Jacobian is singular.
    CPoint herglotz(double t, const CPoint& z) const;

    /// The evolution family of the driver; InputError if there is none.
    EvolutionFamily family() const;
};

/// f_t = e^t z, driven by G = -z.
ChainHandle identity_chain(std::size_t n);

/// Closed-form chain of the SlitExample field on C^2:
/// f_s(z) = e^s (z_1 / (1 - J(s) z_1), z_2) with
/// J(s) = int_s^inf (1 - theta(tau)) e^{s - tau} d tau.
ChainHandle slit_chain(double t1, double t2);

/// J(s) of slit_chain.
double slit_J(double t1, double t2, double s);

/// Canonical chain of a field, evaluated through recover_chain. The Jacobian
/// is a Cauchy integral of the recovered values; df/dt = -d(f_t)_z G(z, t).
ChainHandle field_chain(const FieldSpec& spec, double tol = 1e-9, double max_step = 0.05);

/// Starlike chain f_t = e^t F for a normalized starlike map F, driven by
/// G = -[dF]^{-1} F.
ChainHandle starlike_chain(const HoloMap& f);

struct NormalizationReport {
    double max_value_at_zero = 0.0;  ///< max |f_t(0)|
    double max_jacobian_defect = 0.0;  ///< max |e^{-t} d(f_t)_0 - id| (operator norm)
    bool pass = false;
};

/// Checks f_t(0) = 0 and d(f_t)_0 = e^t id at the given times to tol.
NormalizationReport check_normalization(const ChainHandle& chain, std::span<const double> times,
                                        double tol = 1e-8);

}  // namespace loewner
