#pragma once

// Small dense complex linear algebra: points of C^n and n x n matrices with
// n <= kMaxDim, stored inline so they can be passed by value in hot loops.

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace loewner {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDim = 8;

/// A point of C^n.
class CPoint {
public:
    CPoint() = default;
    explicit CPoint(std::size_t n);
    CPoint(std::initializer_list<Complex> coords);

    static CPoint basis(std::size_t n, std::size_t k);

    std::size_t dim() const noexcept { return n_; }
    Complex& operator[](std::size_t i) noexcept { return c_[i]; }
    const Complex& operator[](std::size_t i) const noexcept { return c_[i]; }
    std::span<const Complex> coords() const noexcept { return {c_.data(), n_}; }

    double norm_squared() const noexcept;
    double norm() const noexcept;
    bool is_finite() const noexcept;

    CPoint& operator+=(const CPoint& o) noexcept;
    CPoint& operator-=(const CPoint& o) noexcept;
    CPoint& operator*=(Complex s) noexcept;
    CPoint& operator*=(double s) noexcept;

    friend CPoint operator+(CPoint a, const CPoint& b) noexcept { return a += b; }
    friend CPoint operator-(CPoint a, const CPoint& b) noexcept { return a -= b; }
    friend CPoint operator-(CPoint a) noexcept { return a *= -1.0; }
    friend CPoint operator*(CPoint a, Complex s) noexcept { return a *= s; }
    friend CPoint operator*(Complex s, CPoint a) noexcept { return a *= s; }
    friend CPoint operator*(CPoint a, double s) noexcept { return a *= s; }
    friend CPoint operator*(double s, CPoint a) noexcept { return a *= s; }
    friend bool operator==(const CPoint& a, const CPoint& b) noexcept;

private:
    std::array<Complex, kMaxDim> c_{};
    std::size_t n_ = 0;
};

/// Euclidean inner product <a, b> = sum_j a_j conj(b_j).
Complex inner(const CPoint& a, const CPoint& b) noexcept;

/// Euclidean distance |a - b|.
double distance(const CPoint& a, const CPoint& b) noexcept;

/// "(re+imi, ...)" with full round-trip precision, for messages and witnesses.
std::string to_string(const CPoint& z);

/// Row-major n x n complex matrix.
class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(std::size_t n);
    CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(std::span<const Complex> d);
    /// Matrix whose k-th column is cols[k].
    static CMatrix from_columns(std::span<const CPoint> cols);

    std::size_t dim() const noexcept { return n_; }
    Complex& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * kMaxDim + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
        return a_[i * kMaxDim + j];
    }

    CPoint column(std::size_t k) const;
    CMatrix adjoint() const;
    double frobenius_norm() const noexcept;
    bool is_finite() const noexcept;

    CMatrix& operator+=(const CMatrix& o) noexcept;
    CMatrix& operator-=(const CMatrix& o) noexcept;
    CMatrix& operator*=(Complex s) noexcept;

    friend CMatrix operator+(CMatrix a, const CMatrix& b) noexcept { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) noexcept { return a -= b; }
    friend CMatrix operator*(CMatrix a, Complex s) noexcept { return a *= s; }
    friend CMatrix operator*(Complex s, CMatrix a) noexcept { return a *= s; }
    friend CMatrix operator*(const CMatrix& a, const CMatrix& b) noexcept;
    friend CPoint operator*(const CMatrix& a, const CPoint& v) noexcept;

private:
    std::array<Complex, kMaxDim * kMaxDim> a_{};
    std::size_t n_ = 0;
};

/// sigma_min < kSingularRatio * sigma_max is treated as singular.
inline constexpr double kSingularRatio = 1e-10;

/// Singular values in descending order. Closed form for n <= 2, one-sided
/// Jacobi otherwise. Throws InputError on non-finite entries.
std::vector<double> singular_values(const CMatrix& a);

/// Spectral norm, the largest singular value.
double operator_norm(const CMatrix& a);

/// Minimum modulus mu(A) = min_{|v|=1} |Av|, the smallest singular value.
double min_modulus(const CMatrix& a);

/// Inverse by Gauss-Jordan elimination with partial pivoting. Throws
/// SingularMatrixError (carrying sigma_min) below the singularity threshold.
CMatrix inverse(const CMatrix& a);

/// Solves A x = b with the same singularity policy as inverse().
CPoint solve(const CMatrix& a, const CPoint& b);

}  // namespace loewner
