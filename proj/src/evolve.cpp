#include "loewner/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "loewner/errors.hpp"
#include "loewner/parallel.hpp"

namespace loewner {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// Local error target per unit of |y|. The embedded estimate is of fourth
// order while the propagated solution is fifth order, and long horizons
// (recover_chain runs to s + 40) accumulate hundreds of steps, so the local
// target sits two decades below the global one.
constexpr double kLocalFactor = 1e-2;

std::string where(double t) {
    std::ostringstream os;
    os.precision(17);
    os << t;
    return os.str();
}

class Stepper {
public:
    Stepper(const EvolutionFamily& fam, double t0, const CPoint& y0)
        : fam_(fam), t_(t0), y_(y0), bound_(y0.norm() + fam.tol) {
        breaks_ = fam.spec.breakpoints();
        h_ = fam.max_step;
    }

    double time() const { return t_; }
    const CPoint& state() const { return y_; }

    void advance_to(double target) {
        while (t_ < target) {
            auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t_);
            const double seg_end = (it != breaks_.end() && *it < target) ? *it : target;
            segment(seg_end);
        }
    }

private:
    CPoint field(const CPoint& y, double t, double seg_lo, double seg_hi) const {
        // Stay on the left of seg_hi so the right-continuous field is never
        // sampled past the discontinuity that ends the segment.
        const double left = std::nextafter(seg_hi, seg_lo);
        return fam_.spec.eval_unchecked(y, std::clamp(t, seg_lo, left));
    }

    void segment(double b) {
        const double a = t_;
        const double ltol = fam_.tol * kLocalFactor;
        const double h_min = 1e-14 * std::max(1.0, std::abs(b));
        CPoint k1 = field(y_, t_, a, b);
        h_ = std::min(h_, fam_.max_step);
        while (t_ < b) {
            double h = std::min(h_, b - t_);
            const bool last = (t_ + h >= b);
            if (last) h = b - t_;
            const double t = t_;
            const CPoint& y = y_;
            const CPoint k2 = field(y + h * a21 * k1, t + c2 * h, a, b);
            const CPoint k3 = field(y + h * (a31 * k1 + a32 * k2), t + c3 * h, a, b);
            const CPoint k4 = field(y + h * (a41 * k1 + a42 * k2 + a43 * k3), t + c4 * h, a, b);
            const CPoint k5 =
                field(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), t + c5 * h, a, b);
            const CPoint k6 = field(
                y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), t + h, a, b);
            const CPoint y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const CPoint k7 = field(y5, t + h, a, b);
            const CPoint err =
                h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            const double scale = ltol * std::max(y.norm(), y5.norm()) + 1e-300;
            const double ratio = err.norm() / scale;
            if (!std::isfinite(ratio)) {
                if (h <= h_min) {
                    throw IntegrationError("non-finite field value near t = " + where(t), t);
                }
                h_ = h * 0.1;
                continue;
            }
            if (ratio <= 1.0) {
                t_ = last ? b : t + h;
                y_ = y5;
                k1 = k7;
                if (y_.norm() > bound_) {
                    std::ostringstream os;
                    os.precision(17);
                    os << "trajectory left the ball of its initial radius at t = " << t_
                       << " (|phi| = " << y_.norm() << ", bound " << bound_ << ")";
                    throw ConsistencyError(os.str());
                }
                const double grow = ratio == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(ratio, -0.2));
                if (!last) h_ = std::min(fam_.max_step, h * grow);
            } else {
                const double shrink = std::max(0.2, 0.9 * std::pow(ratio, -0.2));
                h_ = h * shrink;
                if (h_ < h_min) {
                    throw IntegrationError(
                        "step size underflow at t = " + where(t) +
                            " (unresolved discontinuity in the field?)",
                        t);
                }
            }
        }
    }

    const EvolutionFamily& fam_;
    double t_;
    CPoint y_;
    double bound_;
    double h_;
    std::vector<double> breaks_;
};

void validate(const EvolutionFamily& fam, double s, const CPoint& z) {
    if (!fam.spec.valid()) throw InputError("evolution family has no field");
    if (!(fam.tol > 0.0) || !(fam.max_step > 0.0)) {
        throw ParameterError("tol and max_step must be positive");
    }
    if (!std::isfinite(s) || s < 0.0) throw DomainError("start time must satisfy s >= 0");
    if (z.dim() != fam.spec.dim()) throw DomainError("point dimension does not match the field");
    if (!z.is_finite() || z.norm() >= 1.0) {
        throw DomainError("initial point is not in the open unit ball: " + to_string(z));
    }
}

}  // namespace

CPoint integrate_evolution(const EvolutionFamily& fam, double s, double t, const CPoint& z) {
    const double ts[1] = {t};
    return integrate_evolution(fam, s, ts, z).front();
}

std::vector<CPoint> integrate_evolution(const EvolutionFamily& fam, double s,
                                        std::span<const double> checkpoints, const CPoint& z) {
    validate(fam, s, z);
    std::vector<CPoint> out;
    out.reserve(checkpoints.size());
    Stepper st(fam, s, z);
    double prev = s;
    for (double t : checkpoints) {
        if (!std::isfinite(t) || t < prev) {
            throw DomainError("checkpoints must be finite, sorted and >= s");
        }
        st.advance_to(t);
        out.push_back(st.state());
        prev = t;
    }
    return out;
}

Recovery recover_chain(const EvolutionFamily& fam, double s, const CPoint& z) {
    validate(fam, s, z);
    Stepper st(fam, s, z);
    Recovery rec;
    CPoint prev;
    double prev_h = 0.0;
    double best_diff = 0.0;
    for (std::size_t k = 0; k < kRecoveryHorizons.size(); ++k) {
        const double horizon = kRecoveryHorizons[k];
        st.advance_to(s + horizon);
        const CPoint v = st.state() * std::exp(horizon + s);
        if (k > 0) {
            const double diff = distance(v, prev);
            const double q = std::exp(-(horizon - prev_h));
            const double tail = diff * q / (1.0 - q);
            const double scale = std::max(1.0, v.norm());
            best_diff = diff;
            if (tail <= fam.recover_tol * scale) {
                rec.value = v;
                rec.horizon = horizon;
                rec.difference = diff;
                rec.error_estimate = tail + fam.tol * scale;
                return rec;
            }
        }
        prev = v;
        prev_h = horizon;
    }
    std::ostringstream os;
    os.precision(6);
    os << "e^t phi_{s,t}(z) did not converge by horizon s + " << kRecoveryHorizons.back()
       << " (last difference " << best_diff << ") at s = " << s << ", z = " << to_string(z);
    throw HorizonError(os.str());
}

double default_jacobian_radius(const CPoint& z) {
    return std::min(0.1, (1.0 - z.norm()) / 2.0);
}

CMatrix jacobian(const MapFn& map, const CPoint& z, double radius, int samples) {
    if (!map) throw InputError("jacobian of an empty map");
    if (!z.is_finite()) throw InputError("jacobian at a non-finite point");
    if (!(radius > 0.0) || samples < 2) throw ParameterError("jacobian radius must be positive");
    if (z.norm() + radius >= 1.0) {
        throw DomainError("jacobian circles leave the unit ball at z = " + to_string(z));
    }
    const std::size_t n = z.dim();
    CMatrix jac(n);
    const double step = 2.0 * std::numbers::pi / samples;
    for (std::size_t k = 0; k < n; ++k) {
        CPoint acc(n);
        for (int q = 0; q < samples; ++q) {
            const Complex w = std::polar(1.0, step * q);
            CPoint p = z;
            p[k] += radius * w;
            const CPoint v = map(p);
            if (v.dim() != n) throw InputError("map returned a point of the wrong dimension");
            acc += v * std::conj(w);
        }
        const double scale = 1.0 / (radius * samples);
        for (std::size_t j = 0; j < n; ++j) jac(j, k) = acc[j] * scale;
    }
    return jac;
}

double semigroup_defect(const EvolutionFamily& fam, double s, double u, double t,
                        const SamplingPlan& plan) {
    if (!(s <= u && u <= t)) throw DomainError("semigroup defect needs s <= u <= t");
    const auto pts = plan.points(fam.spec.dim());
    std::vector<double> defect(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        const CPoint whole = integrate_evolution(fam, s, t, pts[i]);
        const CPoint mid = integrate_evolution(fam, s, u, pts[i]);
        const CPoint split = integrate_evolution(fam, u, t, mid);
        defect[i] = distance(whole, split);
    });
    double worst = 0.0;
    for (double d : defect) worst = std::max(worst, d);
    return worst;
}

}  // namespace loewner
