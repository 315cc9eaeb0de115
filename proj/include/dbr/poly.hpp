#ifndef DBR_POLY_HPP
#define DBR_POLY_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace dbr {

using cplx = std::complex<double>;

/// Trailing coefficients below this fraction of the largest one are dropped.
inline constexpr double kTrimTolerance = 1e-12;

/// Dense polynomial with complex coefficients, ascending powers.
/// The zero polynomial has no coefficients and degree -1.
class Poly {
   public:
    Poly() = default;
    explicit Poly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }
    Poly(std::initializer_list<cplx> coeffs) : c_(coeffs) { trim(); }

    static Poly constant(cplx value) { return Poly(std::vector<cplx>{value}); }
    static Poly monomial(std::size_t power, cplx coeff = 1.0) {
        std::vector<cplx> c(power + 1, 0.0);
        c[power] = coeff;
        return Poly(std::move(c));
    }
    /// (z - w)^power
    static Poly linear_power(cplx w, std::size_t power) {
        Poly result = constant(1.0);
        const Poly factor{-w, 1.0};
        for (std::size_t k = 0; k < power; ++k) result = result * factor;
        return result;
    }
    /// lead * prod (z - r)
    static Poly from_roots(const std::vector<cplx>& roots, cplx lead = 1.0) {
        std::vector<cplx> c{lead};
        for (const cplx& r : roots) {
            std::vector<cplx> next(c.size() + 1, 0.0);
            for (std::size_t k = 0; k < c.size(); ++k) {
                next[k + 1] += c[k];
                next[k] -= r * c[k];
            }
            c = std::move(next);
        }
        return Poly(std::move(c));
    }

    const std::vector<cplx>& coeffs() const noexcept { return c_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_constant() const noexcept { return c_.size() <= 1; }

    cplx operator[](std::size_t k) const noexcept { return k < c_.size() ? c_[k] : cplx{}; }
    cplx leading() const noexcept { return c_.empty() ? cplx{} : c_.back(); }

    cplx operator()(cplx z) const noexcept {
        cplx acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
        return acc;
    }

    double max_abs() const noexcept {
        double m = 0.0;
        for (const cplx& v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<cplx> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
        return Poly(std::move(d));
    }

    /// Coefficients of h -> p(w + h), i.e. p^{(k)}(w) / k!, padded to at least `count` entries.
    std::vector<cplx> shifted_coeffs(cplx w, std::size_t count = 0) const {
        std::vector<cplx> b = c_;
        const std::size_t n = b.size();
        // Repeated synthetic division by (z - w).
        for (std::size_t k = 0; k + 1 < n; ++k)
            for (std::size_t j = n - 1; j > k; --j) b[j - 1] += w * b[j];
        if (b.size() < count) b.resize(count, 0.0);
        return b;
    }

    /// Polynomial with conjugated coefficients, i.e. conj(p(conj z)).
    Poly conj_coeffs() const {
        std::vector<cplx> c = c_;
        for (cplx& v : c) v = std::conj(v);
        return Poly(std::move(c));
    }

    /// Multiplies by z^k.
    Poly shifted_up(std::size_t k) const {
        if (is_zero()) return {};
        std::vector<cplx> c(k, 0.0);
        c.insert(c.end(), c_.begin(), c_.end());
        return Poly(std::move(c));
    }

    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
        trim();
        return *this;
    }
    Poly& operator*=(cplx s) {
        for (cplx& v : c_) v *= s;
        trim();
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(Poly a) { return a *= -1.0; }
    friend Poly operator*(Poly a, cplx s) { return a *= s; }
    friend Poly operator*(cplx s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<cplx> c(a.c_.size() + b.c_.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(c));
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

   private:
    void trim() {
        const double tol = kTrimTolerance * max_abs();
        while (!c_.empty() && (std::abs(c_.back()) <= tol || c_.back() == cplx{})) c_.pop_back();
    }

    std::vector<cplx> c_;
};

/// Division by (z - w): returns quotient and remainder p(w).
inline std::pair<Poly, cplx> synthetic_divide(const Poly& p, cplx w) {
    const auto& c = p.coeffs();
    if (c.size() <= 1) return {Poly{}, p[0]};
    std::vector<cplx> q(c.size() - 1);
    cplx acc = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        q[k] = acc;
        acc = acc * w + c[k];
    }
    return {Poly(std::move(q)), acc};
}

/// Largest coefficient-wise |a_k - b_k|.
inline double max_coeff_diff(const Poly& a, const Poly& b) {
    const std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
    double d = 0.0;
    for (std::size_t k = 0; k < n; ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

/// p~(z) = z^n conj(p(1/conj z)): the length-(n+1) coefficient vector reversed and conjugated.
inline Poly conjugate_reciprocal(const Poly& p, int n) {
    if (n < 0 || p.degree() > n)
        throw Error(ErrorKind::InvalidDegree,
                    "conjugate_reciprocal needs degree(p) <= n (degree " + std::to_string(p.degree()) +
                        ", n = " + std::to_string(n) + ")");
    std::vector<cplx> c(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(n - k)] = std::conj(p[static_cast<std::size_t>(k)]);
    return Poly(std::move(c));
}

/// Equispaced points on the unit circle, starting at 1.
inline std::vector<cplx> circle_points(std::size_t count, double phase = 0.0) {
    std::vector<cplx> pts(count);
    for (std::size_t k = 0; k < count; ++k)
        pts[k] = std::polar(1.0, phase + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count));
    return pts;
}

/// Unit-circle point e^{i theta}, with cos/sin outputs within 1e-15 of 0 or +-1 snapped.
inline cplx unit_from_angle(double theta) {
    auto snap = [](double v) {
        for (double t : {-1.0, 0.0, 1.0})
            if (std::abs(v - t) <= 1e-15) return t;
        return v;
    };
    return {snap(std::cos(theta)), snap(std::sin(theta))};
}

}  // namespace dbr

#endif  // DBR_POLY_HPP
