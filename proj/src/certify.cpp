#include "loewner/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "loewner/errors.hpp"
#include "loewner/parallel.hpp"

namespace loewner {

namespace {

struct FlowSample {
    double s, t;
    std::size_t point;
    CPoint phi;
};

std::vector<CPoint> nonzero_points(const SamplingPlan& plan, std::size_t n) {
    auto pts = plan.points(n);
    std::erase_if(pts, [](const CPoint& z) { return z.norm_squared() == 0.0; });
    if (pts.empty()) throw ParameterError("sampling grid has no nonzero points");
    return pts;
}

std::string sample_text(const CPoint& z, double t) {
    std::ostringstream os;
    os.precision(17);
    os << "z = " << to_string(z) << ", t = " << t;
    return os.str();
}

// phi_{s,t}(z) for every pair s < t of the flow grid and every point, in a
// fixed order: start time, then point, then end time.
std::vector<FlowSample> flow_samples(const ChainHandle& chain, const Interval& iv,
                                     const SamplingPlan& plan, const std::vector<CPoint>& pts) {
    const EvolutionFamily fam = chain.family();
    const auto grid = plan.flow_grid(iv);
    const std::size_t m = grid.size();
    const std::size_t np = pts.size();
    std::vector<std::vector<CPoint>> runs((m - 1) * np);
    parallel_for(runs.size(), [&](std::size_t k) {
        const std::size_t i = k / np;
        const std::span<const double> later(grid.data() + i + 1, m - i - 1);
        try {
            runs[k] = integrate_evolution(fam, grid[i], later, pts[k % np]);
        } catch (const Error& e) {
            throw EvaluationError("flow check failed at " + sample_text(pts[k % np], grid[i]) +
                                  ": " + e.what());
        }
    });
    std::vector<FlowSample> out;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const std::size_t i = k / np;
        for (std::size_t j = 0; j < runs[k].size(); ++j) {
            out.push_back({grid[i], grid[i + 1 + j], k % np, runs[k][j]});
        }
    }
    return out;
}

FlowReport flow_from_samples(const std::vector<FlowSample>& samples,
                             const std::vector<CPoint>& pts, std::size_t pairs, double a,
                             double tol) {
    FlowReport rep;
    rep.a = a;
    rep.pairs = pairs;
    rep.samples = samples.size();
    rep.pass = true;
    rep.worst_ratio = -std::numeric_limits<double>::infinity();
    for (const auto& fs : samples) {
        const CPoint& z = pts[fs.point];
        const double bound = std::exp(a * (fs.s - fs.t)) * z.norm();
        const double r = fs.phi.norm() / bound;
        if (fs.phi.norm() > bound + 10.0 * tol) rep.pass = false;
        if (r > rep.worst_ratio) {
            rep.worst_ratio = r;
            rep.worst = {fs.s, fs.t, z, fs.phi, r};
        }
    }
    return rep;
}

std::size_t pair_count(const SamplingPlan& plan, const Interval& iv) {
    const std::size_t m = plan.flow_grid(iv).size();
    return m * (m - 1) / 2;
}

}  // namespace

FlowReport flow_check(const ChainHandle& chain, const Interval& interval,
                      const SamplingPlan& plan, double a) {
    const auto pts = nonzero_points(plan, chain.dim);
    const auto samples = flow_samples(chain, interval, plan, pts);
    return flow_from_samples(samples, pts, pair_count(plan, interval), a, chain.tol);
}

SqueezeCertificate certify_squeezing(const ChainHandle& chain, const Interval& interval,
                                     const SamplingPlan& plan, const SqueezeOptions& opt) {
    const auto pts = nonzero_points(plan, chain.dim);
    const auto times = plan.times(interval, TimeMode::HalfOpen);
    const std::size_t np = pts.size();
    const std::size_t total = np * times.size();

    std::vector<double> margin(total, std::numeric_limits<double>::quiet_NaN());
    std::vector<char> singular(total, 0);
    parallel_for(total, [&](std::size_t k) {
        const CPoint& z = pts[k % np];
        const double t = times[k / np];
        try {
            margin[k] = inner(chain.herglotz(t, z), z).real() / z.norm_squared();
        } catch (const SingularMatrixError&) {
            singular[k] = 1;
        } catch (const Error& e) {
            throw EvaluationError("squeezing margin failed at " + sample_text(z, t) + ": " +
                                  e.what());
        }
    });

    SqueezeCertificate cert;
    cert.interval = interval;
    cert.a_min_threshold = opt.a_min_threshold;
    cert.grid = plan.describe(chain.dim) + "; field times half-open";
    cert.field_min_margin = std::numeric_limits<double>::infinity();
    bool any_singular = false;
    for (std::size_t k = 0; k < total; ++k) {
        if (singular[k]) {
            if (!any_singular) {
                cert.note = "singular Jacobian at " + sample_text(pts[k % np], times[k / np]);
                cert.field_worst_z = pts[k % np];
                cert.field_worst_t = times[k / np];
            }
            any_singular = true;
            continue;
        }
        if (margin[k] < cert.field_min_margin) {
            cert.field_min_margin = margin[k];
            if (!any_singular) {
                cert.field_worst_z = pts[k % np];
                cert.field_worst_t = times[k / np];
            }
        }
    }
    cert.ratio_a = std::min(cert.field_min_margin, 1.0);
    cert.field_pass = !any_singular && cert.ratio_a >= opt.a_min_threshold;

    const auto flows = flow_samples(chain, interval, plan, pts);
    cert.flow = flow_from_samples(flows, pts, pair_count(plan, interval),
                                  cert.ratio_a - opt.flow_slack, chain.tol);
    cert.flow_worst_ratio = cert.flow.worst_ratio;
    cert.pass = cert.field_pass && cert.flow.pass;
    if (!any_singular && !cert.field_pass) {
        std::ostringstream os;
        os.precision(17);
        os << "field ratio " << cert.ratio_a << " below threshold " << opt.a_min_threshold
           << " at " << sample_text(cert.field_worst_z, cert.field_worst_t);
        cert.note = os.str();
    } else if (cert.field_pass && !cert.flow.pass) {
        cert.note = "flow bound violated at s = " + std::to_string(cert.flow.worst.s) +
                    ", t = " + std::to_string(cert.flow.worst.t) + ", z = " +
                    to_string(cert.flow.worst.z);
    }
    if (opt.keep_samples) {
        cert.samples.reserve(total);
        for (std::size_t k = 0; k < total; ++k) {
            cert.samples.push_back({pts[k % np], times[k / np], margin[k]});
        }
    }
    return cert;
}

GeraumigCertificate certify_geraumig(const ChainHandle& chain, const Interval& interval,
                                     const SamplingPlan& plan, const SqueezeOptions& opt) {
    GeraumigCertificate cert;
    cert.interval = interval;
    cert.squeeze = certify_squeezing(chain, interval, plan, opt);

    const auto pts = nonzero_points(plan, chain.dim);
    const auto times = plan.times(interval, TimeMode::HalfOpen);
    const std::size_t np = pts.size();
    const std::size_t total = np * times.size();
    std::vector<double> mu(total), dt(total), dt_raw(total);
    parallel_for(total, [&](std::size_t k) {
        const CPoint& z = pts[k % np];
        const double t = times[k / np];
        try {
            mu[k] = min_modulus(chain.jacobian(t, z));
            dt_raw[k] = chain.time_derivative(t, z).norm();
            dt[k] = dt_raw[k] / z.norm();
        } catch (const Error& e) {
            throw EvaluationError("geraumig sample failed at " + sample_text(z, t) + ": " +
                                  e.what());
        }
    });

    cert.a_jacobian = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < total; ++k) {
        if (mu[k] < cert.a_jacobian) {
            cert.a_jacobian = mu[k];
            cert.jacobian_worst_z = pts[k % np];
            cert.jacobian_worst_t = times[k / np];
        }
        if (dt[k] > cert.b_timederiv) {
            cert.b_timederiv = dt[k];
            cert.timederiv_worst_z = pts[k % np];
            cert.timederiv_worst_t = times[k / np];
        }
        cert.b_raw = std::max(cert.b_raw, dt_raw[k]);
    }
    const bool finite_b = std::isfinite(cert.b_timederiv);
    const bool positive_a = cert.a_jacobian > 0.0 && std::isfinite(cert.a_jacobian);
    cert.consistency_pass =
        positive_a && finite_b &&
        cert.squeeze.ratio_a <= cert.b_timederiv / cert.a_jacobian + 1e-6;
    cert.pass = positive_a && finite_b && cert.squeeze.pass && cert.consistency_pass;
    if (!cert.squeeze.pass) {
        cert.note = "squeezing condition failed: " + cert.squeeze.note;
    } else if (!positive_a) {
        cert.note = "Jacobian degenerates at " + to_string(cert.jacobian_worst_z);
    } else if (!cert.consistency_pass) {
        cert.note = "ratio exceeds b/a";
    }
    return cert;
}

BoundednessReport boundedness_report(const ChainHandle& chain, const Interval& interval,
                                     const SamplingPlan& plan,
                                     const SqueezeCertificate& squeeze) {
    if (!squeeze.pass || !(squeeze.interval == interval)) {
        throw PreconditionError(
            "boundedness report needs a passing squeeze certificate on the same interval");
    }
    const auto pts = nonzero_points(plan, chain.dim);
    const auto times = plan.times(interval, TimeMode::Closed);
    const std::size_t np = pts.size();
    std::vector<double> norms(np * times.size()), radial(np * times.size());
    parallel_for(norms.size(), [&](std::size_t k) {
        const CPoint& z = pts[k % np];
        const double t = times[k / np];
        try {
            norms[k] = chain(t, z).norm();
        } catch (const Error& e) {
            throw EvaluationError("chain evaluation failed at " + sample_text(z, t) + ": " +
                                  e.what());
        }
        radial[k] = norms[k] / z.norm();
    });

    BoundednessReport rep;
    rep.times = times;
    rep.sup_per_time.assign(times.size(), 0.0);
    for (std::size_t k = 0; k < norms.size(); ++k) {
        const std::size_t i = k / np;
        rep.sup_per_time[i] = std::max(rep.sup_per_time[i], norms[k]);
        if (norms[k] > rep.sup_norm) {
            rep.sup_norm = norms[k];
            rep.worst_z = pts[k % np];
            rep.worst_t = times[i];
        }
        rep.radial_sup = std::max(rep.radial_sup, radial[k]);
    }

    const double a = squeeze.ratio_a - kFlowSlack;
    const auto flows = flow_samples(chain, interval, plan, pts);
    rep.containment_pass = true;
    for (const auto& fs : flows) {
        const double cap = std::exp(a * (fs.s - fs.t));
        rep.containment_worst = std::max(rep.containment_worst, fs.phi.norm() / cap);
        if (fs.phi.norm() > cap + 10.0 * chain.tol || !(cap < 1.0)) rep.containment_pass = false;
    }
    return rep;
}

}  // namespace loewner
