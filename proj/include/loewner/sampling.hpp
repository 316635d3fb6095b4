#pragma once

// Deterministic sampling plans for sampled certificates. Every certificate in
// this library is relative to the plan it was computed on; a plan is fully
// reproducible from its parameters and seed.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "loewner/linalg.hpp"

namespace loewner {

/// Time interval [lo, hi). Certificates treat it as half-open; hi must be finite.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const noexcept { return hi - lo; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

enum class TimeMode {
    HalfOpen,    ///< equispaced grid without hi, plus lo + probe and hi - probe
    Closed,      ///< equispaced grid including hi, plus the inner probes
    WithProbes,  ///< Closed plus lo - probe (if >= 0) and hi + probe
};

/// Seeded 64-bit generator: std::mt19937_64 with explicit bit-to-double
/// conversion (53 high bits) and Box-Muller normals, so streams are identical
/// across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Radical inverse of index in the given base (the Halton coordinate).
double radical_inverse(std::uint64_t index, unsigned base);

inline constexpr std::uint64_t kDefaultSeed = 20140901;

struct SamplingPlan {
    std::vector<double> radii{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::size_t directions = 64;
    std::size_t random_points = 256;
    std::uint64_t seed = kDefaultSeed;
    std::size_t times_per_interval = 33;
    std::size_t flow_times = 9;
    double endpoint_probe = 1e-6;
    std::vector<CPoint> extra_points;

    /// Unit vectors of C^n: the 4n axis directions (+-e_j, +-i e_j) first,
    /// then Halton points pushed to the sphere through Box-Muller.
    std::vector<CPoint> sphere_directions(std::size_t n) const;

    /// radii x directions, then random points uniform in the ball of radius
    /// max(radii), then extra_points. Throws DomainError if an extra point is
    /// not in the open unit ball or has the wrong dimension.
    std::vector<CPoint> points(std::size_t n) const;

    std::vector<double> times(const Interval& iv, TimeMode mode) const;

    /// flow_times equispaced times covering [lo, hi].
    std::vector<double> flow_grid(const Interval& iv) const;

    double max_radius() const;
    std::string describe(std::size_t n) const;
};

}  // namespace loewner
