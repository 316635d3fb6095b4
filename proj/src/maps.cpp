#include "loewner/maps.hpp"

#include <algorithm>
#include <climits>
#include <memory>
#include <cmath>
#include <numeric>

#include "loewner/errors.hpp"
#include "loewner/evolve.hpp"

namespace loewner {

HoloMap::HoloMap(std::size_t dim, MapFn eval, JacobianFn jac, std::string name)
    : dim_(dim), eval_(std::move(eval)), jac_(std::move(jac)), name_(std::move(name)) {
    if (!eval_) throw InputError("HoloMap requires an evaluation function");
}

HoloMap HoloMap::identity(std::size_t dim) {
    return HoloMap(
        dim, [](const CPoint& z) { return z; },
        [dim](const CPoint&) { return CMatrix::identity(dim); }, "identity");
}

CMatrix HoloMap::jacobian(const CPoint& z) const {
    if (jac_) return jac_(z);
    return loewner::jacobian(eval_, z, default_jacobian_radius(z));
}

int total_degree(const MultiIndex& index) noexcept {
    return std::accumulate(index.begin(), index.end(), 0);
}

PolyMap::PolyMap(std::size_t dim) : dim_(dim), comps_(dim) {
    if (dim == 0 || dim > kMaxDim) throw ParameterError("PolyMap dimension out of range");
}

PolyMap::PolyMap(std::size_t dim, std::vector<std::vector<Monomial>> components)
    : PolyMap(dim) {
    if (components.size() != dim) throw InputError("PolyMap needs one term list per component");
    for (std::size_t j = 0; j < dim; ++j) {
        for (const auto& m : components[j]) add_term(j, m.index, m.coef);
    }
}

PolyMap PolyMap::identity(std::size_t dim) {
    PolyMap p(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        MultiIndex e(dim, 0);
        e[j] = 1;
        p.add_term(j, e, 1.0);
    }
    return p;
}

PolyMap PolyMap::shear(Complex a) {
    PolyMap p = identity(2);
    p.add_term(0, {0, 2}, a);
    return p;
}

void PolyMap::add_term(std::size_t j, const MultiIndex& index, Complex coef) {
    if (j >= dim_) throw InputError("PolyMap component index out of range");
    if (index.size() != dim_) throw InputError("multi-index length must equal the dimension");
    if (std::any_of(index.begin(), index.end(), [](int e) { return e < 0; })) {
        throw InputError("multi-index entries must be nonnegative");
    }
    if (!std::isfinite(coef.real()) || !std::isfinite(coef.imag())) {
        throw InputError("PolyMap coefficient is not finite");
    }
    auto& terms = comps_[j];
    auto it = std::find_if(terms.begin(), terms.end(),
                           [&](const Monomial& m) { return m.index == index; });
    if (it != terms.end()) {
        it->coef += coef;
    } else {
        terms.push_back({index, coef});
    }
}

namespace {

Complex ipow(Complex z, int e) {
    Complex r = 1.0;
    for (int k = 0; k < e; ++k) r *= z;
    return r;
}

Complex monomial_value(const MultiIndex& index, const CPoint& z) {
    Complex v = 1.0;
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (index[i] != 0) v *= ipow(z[i], index[i]);
    }
    return v;
}

}  // namespace

CPoint PolyMap::operator()(const CPoint& z) const {
    if (z.dim() != dim_) throw InputError("PolyMap evaluated at a point of wrong dimension");
    CPoint w(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
        for (const auto& m : comps_[j]) w[j] += m.coef * monomial_value(m.index, z);
    }
    return w;
}

CMatrix PolyMap::jacobian(const CPoint& z) const {
    if (z.dim() != dim_) throw InputError("PolyMap evaluated at a point of wrong dimension");
    CMatrix d(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
        for (const auto& m : comps_[j]) {
            for (std::size_t k = 0; k < dim_; ++k) {
                if (m.index[k] == 0) continue;
                MultiIndex lowered = m.index;
                lowered[k] -= 1;
                d(j, k) += m.coef * static_cast<double>(m.index[k]) * monomial_value(lowered, z);
            }
        }
    }
    return d;
}

Complex PolyMap::coefficient(const MultiIndex& index, std::size_t j) const {
    for (const auto& m : comps_.at(j)) {
        if (m.index == index) return m.coef;
    }
    return 0.0;
}

int PolyMap::degree() const noexcept {
    int d = 0;
    for (const auto& terms : comps_) {
        for (const auto& m : terms) {
            if (m.coef != Complex{}) d = std::max(d, total_degree(m.index));
        }
    }
    return d;
}

int PolyMap::lowest_degree() const noexcept {
    int d = INT_MAX;
    for (const auto& terms : comps_) {
        for (const auto& m : terms) {
            if (m.coef != Complex{}) d = std::min(d, total_degree(m.index));
        }
    }
    return d;
}

PolyMap PolyMap::homogeneous_part(int d) const {
    PolyMap p(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
        for (const auto& m : comps_[j]) {
            if (total_degree(m.index) == d && m.coef != Complex{}) p.add_term(j, m.index, m.coef);
        }
    }
    return p;
}

PolyMap PolyMap::scaled(Complex s) const {
    PolyMap p = *this;
    for (auto& terms : p.comps_) {
        for (auto& m : terms) m.coef *= s;
    }
    return p;
}

PolyMap operator+(const PolyMap& a, const PolyMap& b) {
    if (a.dim_ != b.dim_) throw InputError("PolyMap dimensions differ");
    PolyMap p = a;
    for (std::size_t j = 0; j < b.dim_; ++j) {
        for (const auto& m : b.comps_[j]) p.add_term(j, m.index, m.coef);
    }
    return p;
}

PolyMap operator-(const PolyMap& a, const PolyMap& b) { return a + b.scaled(-1.0); }

HoloMap PolyMap::to_map(std::string name) const {
    auto self = std::make_shared<const PolyMap>(*this);
    return HoloMap(
        dim_, [self](const CPoint& z) { return (*self)(z); },
        [self](const CPoint& z) { return self->jacobian(z); }, std::move(name));
}

}  // namespace loewner
