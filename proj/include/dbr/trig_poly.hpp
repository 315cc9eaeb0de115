#ifndef DBR_TRIG_POLY_HPP
#define DBR_TRIG_POLY_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "poly.hpp"

namespace dbr {

/// Hermitian Laurent polynomial R(z) = c_0 + sum_{k>=1} (c_k z^k + conj(c_k) z^{-k}), read on |z| = 1.
class TrigPoly {
   public:
    TrigPoly() = default;
    explicit TrigPoly(std::vector<cplx> c) : c_(std::move(c)) {
        if (!c_.empty()) c_[0] = c_[0].real();
        trim();
    }

    /// |q(z)|^2 on the circle: c_k = sum_j q_{j+k} conj(q_j).
    static TrigPoly from_modulus_squared(const Poly& q) {
        const auto& a = q.coeffs();
        std::vector<cplx> c(a.size(), 0.0);
        for (std::size_t k = 0; k < a.size(); ++k)
            for (std::size_t j = 0; j + k < a.size(); ++j) c[k] += a[j + k] * std::conj(a[j]);
        return TrigPoly(std::move(c));
    }

    const std::vector<cplx>& coeffs() const noexcept { return c_; }
    int order() const noexcept { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }

    /// Value at a circle point z (z^{-k} is taken as conj(z^k)).
    double operator()(cplx z) const noexcept {
        if (c_.empty()) return 0.0;
        cplx acc = 0.0;
        for (std::size_t k = c_.size() - 1; k >= 1; --k) acc = (acc + c_[k]) * z;
        return c_[0].real() + 2.0 * acc.real();
    }

    /// z^n R(z) as an ordinary polynomial of degree 2n.
    Poly lifted() const {
        const int n = order();
        std::vector<cplx> p(static_cast<std::size_t>(2 * n + 1), 0.0);
        for (int k = 0; k <= n; ++k) {
            p[static_cast<std::size_t>(n + k)] += c_[static_cast<std::size_t>(k)];
            if (k > 0) p[static_cast<std::size_t>(n - k)] += std::conj(c_[static_cast<std::size_t>(k)]);
        }
        return Poly(std::move(p));
    }

    TrigPoly& operator+=(const TrigPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        trim();
        return *this;
    }
    TrigPoly& operator*=(double s) {
        for (cplx& v : c_) v *= s;
        trim();
        return *this;
    }
    friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
    friend TrigPoly operator*(TrigPoly a, double s) { return a *= s; }
    friend TrigPoly operator*(double s, TrigPoly a) { return a *= s; }

   private:
    void trim() {
        double m = 0.0;
        for (const cplx& v : c_) m = std::max(m, std::abs(v));
        while (!c_.empty() && (std::abs(c_.back()) <= kTrimTolerance * m || c_.back() == cplx{})) c_.pop_back();
    }

    std::vector<cplx> c_;
};

}  // namespace dbr

#endif  // DBR_TRIG_POLY_HPP
