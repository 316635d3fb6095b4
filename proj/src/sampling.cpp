#include "loewner/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "loewner/errors.hpp"

namespace loewner {

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
}

double radical_inverse(std::uint64_t index, unsigned base) {
    double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (index > 0) {
        r += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return r;
}

namespace {

constexpr std::array<unsigned, 16> kPrimes{2,  3,  5,  7,  11, 13, 17, 19,
                                           23, 29, 31, 37, 41, 43, 47, 53};

CPoint normalized(CPoint v) {
    const double nv = v.norm();
    return v * (1.0 / nv);
}

}  // namespace

std::vector<CPoint> SamplingPlan::sphere_directions(std::size_t n) const {
    std::vector<CPoint> dirs;
    dirs.reserve(directions);
    const std::array<Complex, 4> units{Complex(1, 0), Complex(-1, 0), Complex(0, 1),
                                       Complex(0, -1)};
    for (std::size_t j = 0; j < n && dirs.size() < directions; ++j) {
        for (const Complex u : units) {
            if (dirs.size() == directions) break;
            CPoint e(n);
            e[j] = u;
            dirs.push_back(e);
        }
    }
    // Halton in [0,1)^{2n}; each pair of coordinates becomes two normals.
    for (std::uint64_t k = 1; dirs.size() < directions; ++k) {
        CPoint v(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double u1 = radical_inverse(k, kPrimes[2 * j]);
            const double u2 = radical_inverse(k, kPrimes[2 * j + 1]);
            const double r = std::sqrt(-2.0 * std::log(u1));
            const double th = 2.0 * std::numbers::pi * u2;
            v[j] = Complex(r * std::cos(th), r * std::sin(th));
        }
        if (v.norm() > 1e-12) dirs.push_back(normalized(v));
    }
    return dirs;
}

double SamplingPlan::max_radius() const {
    if (radii.empty()) return 0.9;
    return *std::max_element(radii.begin(), radii.end());
}

std::vector<CPoint> SamplingPlan::points(std::size_t n) const {
    for (double r : radii) {
        if (!(r > 0.0 && r < 1.0)) throw DomainError("grid radii must lie in (0, 1)");
    }
    std::vector<CPoint> pts;
    const auto dirs = sphere_directions(n);
    pts.reserve(radii.size() * dirs.size() + random_points + extra_points.size());
    for (double r : radii) {
        for (const auto& u : dirs) pts.push_back(u * r);
    }

    Rng rng(seed);
    const double rmax = max_radius();
    for (std::size_t k = 0; k < random_points; ++k) {
        CPoint v(n);
        do {
            for (std::size_t j = 0; j < n; ++j) v[j] = Complex(rng.normal(), rng.normal());
        } while (v.norm() < 1e-12);
        const double rho = rmax * std::pow(rng.uniform(), 1.0 / (2.0 * static_cast<double>(n)));
        pts.push_back(normalized(v) * rho);
    }

    for (const auto& z : extra_points) {
        if (z.dim() != n) throw DomainError("extra grid point has the wrong dimension");
        if (!z.is_finite() || z.norm() >= 1.0) {
            throw DomainError("extra grid point is not in the open unit ball");
        }
        pts.push_back(z);
    }
    return pts;
}

std::vector<double> SamplingPlan::times(const Interval& iv, TimeMode mode) const {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo < 0.0 || iv.hi < iv.lo) {
        throw ParameterError("time interval must satisfy 0 <= lo <= hi < infinity");
    }
    std::vector<double> ts;
    if (iv.hi == iv.lo) {
        ts.push_back(iv.lo);
        return ts;
    }
    const std::size_t m = std::max<std::size_t>(times_per_interval, 2);
    for (std::size_t k = 0; k < m; ++k) {
        ts.push_back(iv.lo + iv.length() * static_cast<double>(k) / static_cast<double>(m - 1));
    }
    ts.back() = iv.hi;
    if (mode == TimeMode::HalfOpen) ts.pop_back();
    if (endpoint_probe > 0.0 && endpoint_probe < iv.length()) {
        ts.push_back(iv.lo + endpoint_probe);
        ts.push_back(iv.hi - endpoint_probe);
        if (mode == TimeMode::WithProbes) {
            if (iv.lo - endpoint_probe >= 0.0) ts.push_back(iv.lo - endpoint_probe);
            ts.push_back(iv.hi + endpoint_probe);
        }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

std::vector<double> SamplingPlan::flow_grid(const Interval& iv) const {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo < 0.0 || iv.hi < iv.lo) {
        throw ParameterError("time interval must satisfy 0 <= lo <= hi < infinity");
    }
    const std::size_t m = std::max<std::size_t>(flow_times, 2);
    std::vector<double> ts(m);
    for (std::size_t k = 0; k < m; ++k) {
        ts[k] = iv.lo + iv.length() * static_cast<double>(k) / static_cast<double>(m - 1);
    }
    ts.back() = iv.hi;
    return ts;
}

std::string SamplingPlan::describe(std::size_t n) const {
    std::ostringstream os;
    os << "radii=" << radii.size() << " x directions=" << directions
       << " + random=" << random_points << " (seed " << seed << ") + extra="
       << extra_points.size() << " in C^" << n << "; times/interval=" << times_per_interval
       << ", flow times=" << flow_times << ", probe=" << endpoint_probe;
    return os.str();
}

}  // namespace loewner
