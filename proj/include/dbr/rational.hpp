#ifndef DBR_RATIONAL_HPP
#define DBR_RATIONAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"
#include "roots.hpp"

namespace dbr {

/// Denominator roots must have modulus above 1 + this margin.
inline constexpr double kPoleMargin = 1e-9;

/// num / den with every pole strictly outside the closed unit disc.
class RationalFn {
   public:
    RationalFn() : den_(Poly::constant(1.0)), radius_(std::numeric_limits<double>::infinity()) {}

    RationalFn(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "rational function with zero denominator");
        radius_ = std::numeric_limits<double>::infinity();
        if (den_.degree() > 0) {
            for (const cplx& r : poly_roots(den_)) radius_ = std::min(radius_, std::abs(r));
            if (radius_ <= 1.0 + kPoleMargin)
                throw Error(ErrorKind::PoleInClosedDisc,
                            "denominator has a root of modulus " + std::to_string(radius_) + " <= 1 + 1e-9");
        }
    }

    static RationalFn polynomial(Poly p) { return RationalFn(std::move(p), Poly::constant(1.0), kInf); }

    const Poly& num() const noexcept { return num_; }
    const Poly& den() const noexcept { return den_; }
    /// Smallest pole modulus; infinity for polynomials.
    double pole_radius() const noexcept { return radius_; }
    bool is_polynomial() const noexcept { return den_.degree() <= 0; }
    bool is_zero() const noexcept { return num_.is_zero(); }

    cplx operator()(cplx z) const { return num_(z) / den_(z); }

    /// Taylor coefficients f^{(l)}(w) / l! for l < count.
    std::vector<cplx> taylor_coeffs(cplx w, std::size_t count) const {
        const std::vector<cplx> n = num_.shifted_coeffs(w, count);
        const std::vector<cplx> d = den_.shifted_coeffs(w, 1);
        if (std::abs(d[0]) <= 1e-14 * den_.max_abs())
            throw Error(ErrorKind::PoleAtExpansionPoint, "denominator vanishes at the expansion point");
        std::vector<cplx> c(count, 0.0);
        for (std::size_t k = 0; k < count; ++k) {
            cplx acc = n[k];
            for (std::size_t j = 1; j <= k && j < d.size(); ++j) acc -= d[j] * c[k - j];
            c[k] = acc / d[0];
        }
        return c;
    }

    /// l-th derivative at w.
    cplx derivative(cplx w, std::size_t l) const {
        double fact = 1.0;
        for (std::size_t k = 2; k <= l; ++k) fact *= static_cast<double>(k);
        return taylor_coeffs(w, l + 1)[l] * fact;
    }

    RationalFn times(const Poly& p) const { return {num_ * p, den_, radius_}; }
    RationalFn scaled(cplx s) const { return {num_ * s, den_, radius_}; }

    /// Backward shift (f - f(0)) / z.
    RationalFn backward_shift() const {
        const Poly top = num_ - den_ * ((*this)(0.0));
        std::vector<cplx> c;
        for (std::size_t k = 1; k < top.coeffs().size(); ++k) c.push_back(top.coeffs()[k]);
        return {Poly(std::move(c)), den_, radius_};
    }

    friend RationalFn operator+(const RationalFn& a, const RationalFn& b) {
        if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_, a.radius_};
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_, std::min(a.radius_, b.radius_)};
    }
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b) { return a + b.scaled(-1.0); }
    friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
        return {a.num_ * b.num_, a.den_ * b.den_, std::min(a.radius_, b.radius_)};
    }

   private:
    static constexpr double kInf = std::numeric_limits<double>::infinity();

    // Pole radius known from the operands.
    RationalFn(Poly num, Poly den, double radius) : num_(std::move(num)), den_(std::move(den)), radius_(radius) {}

    friend RationalFn deflate(const RationalFn& f, cplx w, int m);

    Poly num_;
    Poly den_;
    double radius_;
};

/// sum_k coeffs[k] * fns[k]; functions sharing a denominator keep it.
inline RationalFn linear_combination(const std::vector<cplx>& coeffs, const std::vector<RationalFn>& fns) {
    RationalFn acc = RationalFn::polynomial(Poly{});
    bool first = true;
    for (std::size_t k = 0; k < fns.size(); ++k) {
        if (first) {
            acc = fns[k].scaled(coeffs[k]);
            first = false;
        } else {
            acc = acc + fns[k].scaled(coeffs[k]);
        }
    }
    return acc;
}

/// Degree-(m-1) Taylor polynomial of f at w, in ascending powers of z.
inline Poly taylor_polynomial(const RationalFn& f, cplx w, int m) {
    if (m < 1) throw Error(ErrorKind::InvalidDegree, "taylor_polynomial needs m >= 1");
    const std::vector<cplx> c = f.taylor_coeffs(w, static_cast<std::size_t>(m));
    const Poly step{-w, 1.0};
    Poly acc = Poly::constant(c.back());
    for (int l = m - 2; l >= 0; --l) acc = acc * step + Poly::constant(c[static_cast<std::size_t>(l)]);
    return acc;
}

/// (f - T_{m-1}(f, w)) / (z - w)^m with an exactness check on each synthetic-division remainder.
inline RationalFn deflate(const RationalFn& f, cplx w, int m) {
    const Poly taylor = taylor_polynomial(f, w, m);
    const Poly shifted = taylor * f.den();
    Poly top = f.num() - shifted;
    const double scale = std::max({f.num().max_abs(), shifted.max_abs(), 1e-300});
    for (int k = 0; k < m; ++k) {
        if (top.is_zero()) break;
        auto [quot, rem] = synthetic_divide(top, w);
        if (std::abs(rem) > 1e-10 * scale)
            throw Error(ErrorKind::DeflationResidual,
                        "division by (z - w)^" + std::to_string(m) + " left remainder " + std::to_string(std::abs(rem)));
        top = std::move(quot);
    }
    return {std::move(top), f.den(), f.pole_radius()};
}

namespace detail {

// Maclaurin coefficients of num/den generated one at a time.
class MaclaurinStream {
   public:
    explicit MaclaurinStream(const RationalFn& f) : num_(f.num().coeffs()), den_(f.den().coeffs()) {}

    cplx next() {
        const std::size_t k = history_.size();
        cplx acc = k < num_.size() ? num_[k] : cplx{};
        for (std::size_t j = 1; j < den_.size() && j <= k; ++j) acc -= den_[j] * history_[k - j];
        const cplx value = acc / den_[0];
        history_.push_back(value);
        return value;
    }

   private:
    const std::vector<cplx>& num_;
    const std::vector<cplx>& den_;
    std::vector<cplx> history_;
};

}  // namespace detail

/// First `count` Maclaurin coefficients.
inline std::vector<cplx> maclaurin(const RationalFn& f, std::size_t count) {
    if (f.is_zero()) return std::vector<cplx>(count, 0.0);
    detail::MaclaurinStream s(f);
    std::vector<cplx> out(count);
    for (auto& v : out) v = s.next();
    return out;
}

inline constexpr std::size_t kMaxSeriesTerms = 100000;

/// H^2 pairing sum_k f_k conj(g_k) of Maclaurin coefficients.
/// Truncated once the geometric tail bound drops below 1e-14 of the norm scale; warns at the term cap.
inline cplx h2_inner(const RationalFn& f, const RationalFn& g, std::vector<std::string>* warnings = nullptr) {
    if (f.is_zero() || g.is_zero()) return 0.0;
    detail::MaclaurinStream sf(f), sg(g);

    // A polynomial factor makes the sum finite.
    std::size_t exact_terms = 0;
    if (f.is_polynomial()) exact_terms = static_cast<std::size_t>(f.num().degree()) + 1;
    if (g.is_polynomial()) {
        const auto n = static_cast<std::size_t>(g.num().degree()) + 1;
        exact_terms = exact_terms == 0 ? n : std::min(exact_terms, n);
    }
    cplx cross = 0.0;
    if (exact_terms > 0) {
        for (std::size_t k = 0; k < exact_terms; ++k) cross += sf.next() * std::conj(sg.next());
        return cross;
    }

    const double rho = std::min(f.pole_radius(), g.pole_radius());
    // Shrunk radius absorbs the polynomial factors of repeated poles.
    const double rho_eff = 1.0 + 0.8 * (rho - 1.0);
    const double decay = 1.0 / (rho_eff * rho_eff);
    const std::size_t min_terms =
        2 * static_cast<std::size_t>(f.num().degree() + f.den().degree() + g.num().degree() + g.den().degree() + 2) +
        16;
    double sff = 0.0, sgg = 0.0, cf = 0.0, cg = 0.0, weight = 1.0;
    for (std::size_t k = 0; k < kMaxSeriesTerms; ++k) {
        const cplx a = sf.next(), b = sg.next();
        cross += a * std::conj(b);
        sff += std::norm(a);
        sgg += std::norm(b);
        cf = std::max(cf, std::abs(a) * weight);
        cg = std::max(cg, std::abs(b) * weight);
        weight *= rho_eff;
        if (k + 1 < min_terms) continue;
        const double tail = cf * cg / (weight * weight) / (1.0 - decay);
        if (tail < 1e-14 * std::sqrt(sff * sgg) || tail == 0.0) return cross;
    }
    if (warnings)
        warnings->push_back("AccuracyWarning: h2_inner reached the " + std::to_string(kMaxSeriesTerms) +
                            "-term cap (pole radius " + std::to_string(rho) + ")");
    return cross;
}

inline double h2_norm_sq(const RationalFn& f) { return h2_inner(f, f).real(); }

}  // namespace dbr

#endif  // DBR_RATIONAL_HPP
