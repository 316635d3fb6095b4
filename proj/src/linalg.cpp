#include "loewner/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "loewner/errors.hpp"

namespace loewner {

CPoint::CPoint(std::size_t n) : n_(n) {
    if (n == 0 || n > kMaxDim) {
        throw ParameterError("CPoint dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    }
}

CPoint::CPoint(std::initializer_list<Complex> coords) : CPoint(coords.size()) {
    std::copy(coords.begin(), coords.end(), c_.begin());
}

CPoint CPoint::basis(std::size_t n, std::size_t k) {
    CPoint e(n);
    e[k] = 1.0;
    return e;
}

double CPoint::norm_squared() const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += std::norm(c_[i]);
    return s;
}

double CPoint::norm() const noexcept {
    return std::sqrt(norm_squared());
}

bool CPoint::is_finite() const noexcept {
    for (std::size_t i = 0; i < n_; ++i) {
        if (!std::isfinite(c_[i].real()) || !std::isfinite(c_[i].imag())) return false;
    }
    return true;
}

CPoint& CPoint::operator+=(const CPoint& o) noexcept {
    for (std::size_t i = 0; i < n_; ++i) c_[i] += o.c_[i];
    return *this;
}

CPoint& CPoint::operator-=(const CPoint& o) noexcept {
    for (std::size_t i = 0; i < n_; ++i) c_[i] -= o.c_[i];
    return *this;
}

CPoint& CPoint::operator*=(Complex s) noexcept {
    for (std::size_t i = 0; i < n_; ++i) c_[i] *= s;
    return *this;
}

CPoint& CPoint::operator*=(double s) noexcept {
    for (std::size_t i = 0; i < n_; ++i) c_[i] *= s;
    return *this;
}

bool operator==(const CPoint& a, const CPoint& b) noexcept {
    if (a.n_ != b.n_) return false;
    for (std::size_t i = 0; i < a.n_; ++i) {
        if (a.c_[i] != b.c_[i]) return false;
    }
    return true;
}

Complex inner(const CPoint& a, const CPoint& b) noexcept {
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * std::conj(b[i]);
    return s;
}

double distance(const CPoint& a, const CPoint& b) noexcept { return (a - b).norm(); }

std::string to_string(const CPoint& z) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t i = 0; i < z.dim(); ++i) {
        if (i) os << ", ";
        os << z[i].real() << (z[i].imag() < 0 ? "-" : "+") << std::abs(z[i].imag()) << 'i';
    }
    os << ')';
    return os.str();
}

CMatrix::CMatrix(std::size_t n) : n_(n) {
    if (n == 0 || n > kMaxDim) {
        throw ParameterError("CMatrix dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    }
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : CMatrix(rows.size()) {
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != n_) throw InputError("CMatrix rows must all have length n");
        std::size_t j = 0;
        for (const auto& v : row) (*this)(i, j++) = v;
        ++i;
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> d) {
    CMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

CMatrix CMatrix::from_columns(std::span<const CPoint> cols) {
    CMatrix m(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) {
        for (std::size_t j = 0; j < cols.size(); ++j) m(j, k) = cols[k][j];
    }
    return m;
}

CPoint CMatrix::column(std::size_t k) const {
    CPoint c(n_);
    for (std::size_t j = 0; j < n_; ++j) c[j] = (*this)(j, k);
    return c;
}

CMatrix CMatrix::adjoint() const {
    CMatrix m(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) m(i, j) = std::conj((*this)(j, i));
    }
    return m;
}

double CMatrix::frobenius_norm() const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) s += std::norm((*this)(i, j));
    }
    return std::sqrt(s);
}

bool CMatrix::is_finite() const noexcept {
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            const Complex v = (*this)(i, j);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        }
    }
    return true;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) noexcept {
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) (*this)(i, j) += o(i, j);
    }
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) noexcept {
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) (*this)(i, j) -= o(i, j);
    }
    return *this;
}

CMatrix& CMatrix::operator*=(Complex s) noexcept {
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) (*this)(i, j) *= s;
    }
    return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) noexcept {
    CMatrix m(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i) {
        for (std::size_t k = 0; k < a.n_; ++k) {
            const Complex aik = a(i, k);
            for (std::size_t j = 0; j < a.n_; ++j) m(i, j) += aik * b(k, j);
        }
    }
    return m;
}

CPoint operator*(const CMatrix& a, const CPoint& v) noexcept {
    CPoint r(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < a.n_; ++j) s += a(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

namespace {

void require_finite(const CMatrix& a) {
    if (!a.is_finite()) throw InputError("matrix has non-finite entries");
}

// Largest and smallest singular value of a 2x2 matrix from the invariants of
// A*A: sigma_max^2 + sigma_min^2 = |A|_F^2 and sigma_max * sigma_min = |det A|.
std::pair<double, double> singular_extremes_2x2(const CMatrix& a) {
    const double fro2 = std::norm(a(0, 0)) + std::norm(a(0, 1)) + std::norm(a(1, 0)) +
                        std::norm(a(1, 1));
    const double det = std::abs(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0));
    const double disc = std::sqrt(std::max(0.0, (fro2 - 2.0 * det) * (fro2 + 2.0 * det)));
    const double smax = std::sqrt(0.5 * (fro2 + disc));
    const double smin = smax > 0.0 ? det / smax : 0.0;
    return {smax, smin};
}

// One-sided (Hestenes) Jacobi: rotate column pairs until mutually orthogonal;
// the column norms are then the singular values.
std::vector<double> jacobi_singular_values(const CMatrix& a) {
    const std::size_t n = a.dim();
    std::array<CPoint, kMaxDim> cols;
    for (std::size_t k = 0; k < n; ++k) cols[k] = a.column(k);

    constexpr int kMaxSweeps = 80;
    constexpr double kEps = 1e-15;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double alpha = cols[p].norm_squared();
                const double beta = cols[q].norm_squared();
                const Complex gamma = inner(cols[q], cols[p]);  // a_p^H a_q
                const double g = std::abs(gamma);
                if (g <= kEps * std::sqrt(alpha * beta) || g == 0.0) continue;
                rotated = true;
                const Complex phase = gamma / g;
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                // Work with a_q * conj(phase) so the pair's Gram entry is real.
                const CPoint ap = cols[p];
                const CPoint aq = cols[q] * std::conj(phase);
                cols[p] = c * ap - s * aq;
                cols[q] = (s * ap + c * aq) * phase;
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sv(n);
    for (std::size_t k = 0; k < n; ++k) sv[k] = cols[k].norm();
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

std::pair<double, double> singular_extremes(const CMatrix& a) {
    require_finite(a);
    switch (a.dim()) {
        case 1: {
            const double v = std::abs(a(0, 0));
            return {v, v};
        }
        case 2:
            return singular_extremes_2x2(a);
        default: {
            const auto sv = jacobi_singular_values(a);
            return {sv.front(), sv.back()};
        }
    }
}

void require_invertible(const CMatrix& a) {
    const auto [smax, smin] = singular_extremes(a);
    if (!(smin >= kSingularRatio * smax) || smax == 0.0) {
        std::ostringstream os;
        os << "matrix is numerically singular (sigma_min = " << smin
           << ", sigma_max = " << smax << ")";
        throw SingularMatrixError(os.str(), smin);
    }
}

}  // namespace

std::vector<double> singular_values(const CMatrix& a) {
    require_finite(a);
    if (a.dim() <= 2) {
        const auto [smax, smin] = singular_extremes(a);
        if (a.dim() == 1) return {smax};
        return {smax, smin};
    }
    return jacobi_singular_values(a);
}

double operator_norm(const CMatrix& a) { return singular_extremes(a).first; }

double min_modulus(const CMatrix& a) { return singular_extremes(a).second; }

CMatrix inverse(const CMatrix& a) {
    require_invertible(a);
    const std::size_t n = a.dim();
    CMatrix m = a;
    CMatrix inv = CMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
        }
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(col, j), m(piv, j));
                std::swap(inv(col, j), inv(piv, j));
            }
        }
        const Complex d = m(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            m(col, j) /= d;
            inv(col, j) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const Complex f = m(r, col);
            if (f == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) {
                m(r, j) -= f * m(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

CPoint solve(const CMatrix& a, const CPoint& b) {
    require_invertible(a);
    const std::size_t n = a.dim();
    CMatrix m = a;
    CPoint x = b;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
        }
        if (piv != col) {
            for (std::size_t j = col; j < n; ++j) std::swap(m(col, j), m(piv, j));
            std::swap(x[col], x[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const Complex f = m(r, col) / m(col, col);
            if (f == Complex{}) continue;
            for (std::size_t j = col; j < n; ++j) m(r, j) -= f * m(col, j);
            x[r] -= f * x[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        Complex s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
        x[i] = s / m(i, i);
    }
    return x;
}

}  // namespace loewner
