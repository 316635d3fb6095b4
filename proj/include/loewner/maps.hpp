#pragma once

// Holomorphic maps C^n -> C^n: a type-erased HoloMap (evaluation plus an
// optional exact Jacobian) and PolyMap, polynomial maps with explicit
// coefficient data.

#include <functional>
#include <string>
#include <vector>

#include "loewner/linalg.hpp"

namespace loewner {

using MapFn = std::function<CPoint(const CPoint&)>;
using JacobianFn = std::function<CMatrix(const CPoint&)>;

class HoloMap {
public:
    HoloMap() = default;
    HoloMap(std::size_t dim, MapFn eval, JacobianFn jac = {}, std::string name = {});

    static HoloMap identity(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    const std::string& name() const noexcept { return name_; }
    CPoint operator()(const CPoint& z) const { return eval_(z); }
    const MapFn& fn() const noexcept { return eval_; }

    bool has_exact_jacobian() const noexcept { return static_cast<bool>(jac_); }
    /// Exact Jacobian when available, Cauchy-integral Jacobian otherwise.
    CMatrix jacobian(const CPoint& z) const;

private:
    std::size_t dim_ = 0;
    MapFn eval_;
    JacobianFn jac_;
    std::string name_;
};

using MultiIndex = std::vector<int>;

struct Monomial {
    MultiIndex index;
    Complex coef;
};

/// Polynomial map z -> (P_1(z), ..., P_n(z)) stored as sparse monomial lists.
class PolyMap {
public:
    PolyMap() = default;
    explicit PolyMap(std::size_t dim);
    PolyMap(std::size_t dim, std::vector<std::vector<Monomial>> components);

    static PolyMap identity(std::size_t dim);
    /// (z_1 + a z_2^2, z_2) on C^2; an automorphism with inverse shear(-a).
    static PolyMap shear(Complex a);

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<Monomial>& component(std::size_t j) const { return comps_.at(j); }

    /// Adds coef * z^index to component j, merging with an existing term.
    void add_term(std::size_t j, const MultiIndex& index, Complex coef);

    CPoint operator()(const CPoint& z) const;
    CMatrix jacobian(const CPoint& z) const;

    /// Coefficient of z^index in component j (zero if absent).
    Complex coefficient(const MultiIndex& index, std::size_t j) const;
    int degree() const noexcept;
    /// Smallest total degree carrying a nonzero coefficient (INT_MAX for the zero map).
    int lowest_degree() const noexcept;
    PolyMap homogeneous_part(int d) const;

    PolyMap scaled(Complex s) const;
    friend PolyMap operator+(const PolyMap& a, const PolyMap& b);
    friend PolyMap operator-(const PolyMap& a, const PolyMap& b);

    HoloMap to_map(std::string name = {}) const;

private:
    std::size_t dim_ = 0;
    std::vector<std::vector<Monomial>> comps_;
};

int total_degree(const MultiIndex& index) noexcept;

}  // namespace loewner
