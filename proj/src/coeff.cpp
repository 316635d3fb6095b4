#include "loewner/coeff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

std::vector<CPoint> sphere_samples(const SamplingPlan& plan, std::size_t n) {
    auto dirs = plan.sphere_directions(n);
    for (const auto& z : plan.points(n)) {
        const double r = z.norm();
        if (r > 0.0) dirs.push_back(z * (1.0 / r));
    }
    return dirs;
}

// All multi-indices of length n and total degree d, in lexicographic order.
void indices_of_degree(std::size_t n, int d, MultiIndex& cur, std::size_t pos,
                       std::vector<MultiIndex>& out) {
    if (pos + 1 == n) {
        cur[pos] = d;
        out.push_back(cur);
        return;
    }
    for (int k = d; k >= 0; --k) {
        cur[pos] = k;
        indices_of_degree(n, d - k, cur, pos + 1, out);
    }
}

void validate_index(const MultiIndex& index, std::size_t n, std::size_t component) {
    if (index.size() != n) throw InputError("multi-index length does not match the dimension");
    if (component >= n) throw InputError("component index out of range");
    for (int a : index) {
        if (a < 0) throw InputError("multi-index entries must be nonnegative");
    }
}

PerturbationDirection finish_direction(const LinearFunctional& L, PolyMap pj, int degree,
                                       Complex lp, const SamplingPlan& plan) {
    double sup_p = 0.0, sup_dp = 0.0;
    for (const auto& u : sphere_samples(plan, pj.dim())) {
        sup_p = std::max(sup_p, pj(u).norm());
        sup_dp = std::max(sup_dp, operator_norm(pj.jacobian(u)));
    }
    const double scale = 1.0 / (std::max(sup_p, sup_dp) * (1.0 + 1e-3));
    PerturbationDirection out;
    out.degree = degree;
    out.L_of_Pj = lp;
    out.lambda = std::conj(lp) / std::abs(lp) * scale;
    out.h = pj.scaled(out.lambda);
    out.L_of_h = L(out.h);
    out.sup_h = sup_p * scale;
    out.sup_dh = sup_dp * scale;
    return out;
}

std::string not_found_message() {
    return "the functional vanishes on every homogeneous part up to total degree " +
           std::to_string(kDirectionMaxDegree);
}

}  // namespace

Complex taylor_coefficient(const MapFn& map, std::size_t n, const MultiIndex& index,
                           std::size_t component, double radius, int samples) {
    if (!map) throw InputError("coefficient of an empty map");
    validate_index(index, n, component);
    if (!(radius > 0.0)) throw ParameterError("extraction radius must be positive");
    if (radius >= 1.0 / std::sqrt(static_cast<double>(n))) {
        throw DomainError("extraction polytorus leaves the unit ball (radius >= 1/sqrt(n))");
    }
    std::vector<std::size_t> active;
    int degree = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (index[j] > 0) active.push_back(j);
        degree += index[j];
    }
    if (active.empty()) return map(CPoint(n))[component];
    const std::size_t k = active.size();
    double total = 1.0;
    for (std::size_t i = 0; i < k; ++i) total *= samples;
    if (total > 1 << 24) throw ParameterError("too many active coordinates for quadrature");

    const double step = 2.0 * std::numbers::pi / samples;
    std::vector<Complex> roots(samples);
    for (int q = 0; q < samples; ++q) roots[q] = std::polar(1.0, step * q);

    std::vector<int> q(k, 0);
    Complex acc = 0.0;
    while (true) {
        CPoint z(n);
        Complex weight = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            z[active[i]] = radius * roots[q[i]];
            weight *= std::conj(roots[(static_cast<long>(q[i]) * index[active[i]]) % samples]);
        }
        acc += map(z)[component] * weight;
        std::size_t i = 0;
        while (i < k && ++q[i] == samples) q[i++] = 0;
        if (i == k) break;
    }
    return acc / (total * std::pow(radius, degree));
}

CoefficientReport coefficient_report(const MapFn& map, std::size_t n, const MultiIndex& index,
                                     std::size_t component, double radius) {
    CoefficientReport rep;
    rep.index = index;
    rep.component = component;
    rep.radius = radius;
    rep.value = taylor_coefficient(map, n, index, component, radius);
    rep.estimated_error =
        std::abs(rep.value - taylor_coefficient(map, n, index, component, 0.6 * radius));
    return rep;
}

Complex functional_L102(const HoloMap& map) {
    if (map.dim() < 2) throw InputError("the z_2^2 functional needs dimension >= 2");
    MultiIndex idx(map.dim(), 0);
    idx[1] = 2;
    return taylor_coefficient(map.fn(), map.dim(), idx, 0);
}

LinearFunctional LinearFunctional::L102(std::size_t n) {
    if (n < 2) throw InputError("the z_2^2 functional needs dimension >= 2");
    MultiIndex idx(n, 0);
    idx[1] = 2;
    return LinearFunctional{{{idx, 0, Complex(1.0)}}};
}

Complex LinearFunctional::operator()(const PolyMap& p) const {
    Complex v = 0.0;
    for (const auto& term : terms) v += term.weight * p.coefficient(term.index, term.component);
    return v;
}

Complex LinearFunctional::operator()(const HoloMap& f) const {
    Complex v = 0.0;
    for (const auto& term : terms) {
        v += term.weight * taylor_coefficient(f.fn(), f.dim(), term.index, term.component);
    }
    return v;
}

PerturbationDirection perturbation_direction(const LinearFunctional& L, const PolyMap& f,
                                             const SamplingPlan& plan) {
    if (L.terms.empty()) throw InputError("empty linear functional");
    for (const auto& term : L.terms) validate_index(term.index, f.dim(), term.component);
    for (int j = 2; j <= kDirectionMaxDegree; ++j) {
        PolyMap pj = f.homogeneous_part(j);
        const Complex lp = L(pj);
        if (std::abs(lp) > 1e-12) return finish_direction(L, std::move(pj), j, lp, plan);
    }
    throw NotFoundError(not_found_message());
}

PerturbationDirection perturbation_direction(const LinearFunctional& L, const HoloMap& f,
                                             const SamplingPlan& plan) {
    if (L.terms.empty()) throw InputError("empty linear functional");
    const std::size_t n = f.dim();
    for (const auto& term : L.terms) validate_index(term.index, n, term.component);
    for (int j = 2; j <= kDirectionMaxDegree; ++j) {
        Complex lp = 0.0;
        bool any = false;
        for (const auto& term : L.terms) {
            if (total_degree(term.index) != j) continue;
            any = true;
            lp += term.weight * taylor_coefficient(f.fn(), n, term.index, term.component);
        }
        if (!any || std::abs(lp) <= 1e-12) continue;

        PolyMap pj(n);
        std::vector<MultiIndex> idx;
        MultiIndex cur(n, 0);
        indices_of_degree(n, j, cur, 0, idx);
        for (const auto& a : idx) {
            for (std::size_t c = 0; c < n; ++c) {
                const Complex v = taylor_coefficient(f.fn(), n, a, c);
                if (std::abs(v) > 1e-12) pj.add_term(c, a, v);
            }
        }
        return finish_direction(L, std::move(pj), j, lp, plan);
    }
    throw NotFoundError(not_found_message());
}

double reachability_bound(double N) {
    if (!(N >= 1.0) || !std::isfinite(N)) throw ParameterError("bound needs 1 <= N < infinity");
    return 3.0 * std::sqrt(3.0) * (1.0 - 1.0 / N);
}

BoundVerdict reachability_bound_check(const HoloMap& map, double N) {
    BoundVerdict v;
    v.N = N;
    v.bound = reachability_bound(N);
    v.coefficient_magnitude = 2.0 * std::abs(functional_L102(map));
    v.margin = v.bound - v.coefficient_magnitude;
    v.satisfied = v.coefficient_magnitude <= v.bound + kBoundTolerance;
    v.sharp = std::abs(v.margin) <= kBoundTolerance;
    return v;
}

PolyMap phi_map() { return PolyMap::shear(kPhiCoefficient); }

}  // namespace loewner
