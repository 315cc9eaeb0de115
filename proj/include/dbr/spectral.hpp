#ifndef DBR_SPECTRAL_HPP
#define DBR_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"
#include "rational.hpp"
#include "roots.hpp"
#include "space_spec.hpp"
#include "trig_poly.hpp"

namespace dbr {

inline constexpr std::size_t kFactorSamples = 512;

struct SpectralFactor {
    Poly q;
    std::vector<std::string> warnings;
};

/// Fejer-Riesz: q with |q|^2 = R on the circle and every root of modulus > 1.
///
/// The lifted polynomial z^n R(z) has its roots in pairs (rho, 1/conj(rho)); one root per pair is kept
/// (the outer one) and the positive scale is fixed where R is largest. No phase is imposed on q.
inline SpectralFactor fejer_riesz(const TrigPoly& r) {
    SpectralFactor out;
    const auto samples = circle_points(kFactorSamples);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    cplx argmax = 1.0;
    for (const cplx& z : samples) {
        const double v = r(z);
        lo = std::min(lo, v);
        if (v > hi) {
            hi = v;
            argmax = z;
        }
    }
    if (!(hi > 0.0) || lo <= 1e-12 * hi)
        throw Error(ErrorKind::DegenerateFactorization,
                    "trigonometric polynomial is not strictly positive on the circle (min " + std::to_string(lo) +
                        ", max " + std::to_string(hi) + ")");
    if (lo < 1e-9 * hi)
        out.warnings.push_back("AccuracyWarning: near-degenerate factorization, min/max = " +
                               std::to_string(lo / hi));

    const int n = r.order();
    if (n == 0) {
        out.q = Poly::constant(std::sqrt(r.coeffs()[0].real()));
        return out;
    }

    const std::vector<cplx> roots = poly_roots(r.lifted());
    std::vector<cplx> outer, inner;
    for (const cplx& z : roots) (std::abs(z) > 1.0 ? outer : inner).push_back(z);
    if (outer.size() != static_cast<std::size_t>(n) || inner.size() != static_cast<std::size_t>(n))
        throw Error(ErrorKind::RootPairingFailure, "lifted polynomial has " + std::to_string(outer.size()) +
                                                       " roots outside and " + std::to_string(inner.size()) +
                                                       " inside the circle, expected " + std::to_string(n) + " each");
    std::vector<bool> used(inner.size(), false);
    for (const cplx& z : outer) {
        const cplx mirror = 1.0 / std::conj(z);
        std::size_t best = inner.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < inner.size(); ++k)
            if (!used[k] && std::abs(inner[k] - mirror) < best_d) {
                best_d = std::abs(inner[k] - mirror);
                best = k;
            }
        if (best == inner.size() || best_d > 1e-6 * std::max(1.0, std::abs(mirror)))
            throw Error(ErrorKind::RootPairingFailure,
                        "root " + std::to_string(z.real()) + "+" + std::to_string(z.imag()) + "i has no reflected partner");
        used[best] = true;
    }

    Poly q = Poly::from_roots(outer);
    const double gamma = std::sqrt(r(argmax)) / std::abs(q(argmax));
    out.q = q * gamma;

    double worst = 0.0;
    for (const cplx& z : samples) worst = std::max(worst, std::abs(std::norm(out.q(z)) - r(z)));
    if (worst > 1e-9 * hi)
        out.warnings.push_back("AccuracyWarning: |q|^2 matches R only to " + std::to_string(worst / hi) + " (relative)");
    return out;
}

/// Mate data: a = p_A / q with a(0) > 0.
struct MateResult {
    Poly p_A;
    Poly q;
    RationalFn a;
    std::vector<std::string> warnings;
};

namespace detail {

// Rotates q so that num(0) / q(0) is real and positive.
inline Poly normalize_mate_phase(const Poly& num, const Poly& q) {
    const cplx a0 = num(0.0) / q(0.0);
    return q * (a0 / std::abs(a0));
}

}  // namespace detail

/// The right-hand side |p_A|^2 + sum_j |p_A / (z - w_j)^{m_j}|^2 sum_i |p_ij|^2 on the circle.
inline TrigPoly mate_modulus(const SpaceSpec& spec) {
    TrigPoly r = TrigPoly::from_modulus_squared(spec.p_A());
    for (std::size_t j = 0; j < spec.size(); ++j) {
        const Poly others = spec.p_A(j, 0);
        for (const Poly& p : spec.points()[j].weights) r += TrigPoly::from_modulus_squared(others * p);
    }
    return r;
}

/// Mate of the space defined by the norm: factor the modulus identity, then fix the phase so a(0) > 0.
inline MateResult mate_from_spec(const SpaceSpec& spec) {
    for (std::size_t j = 0; j < spec.size(); ++j)
        if (!spec.strict(j))
            throw Error(ErrorKind::DegenerateFactorization,
                        "every weight vanishes at point " + std::to_string(j) + "; the modulus identity has a zero on the circle");
    SpectralFactor f = fejer_riesz(mate_modulus(spec));
    MateResult out;
    out.p_A = spec.p_A();
    out.q = detail::normalize_mate_phase(out.p_A, f.q);
    out.a = RationalFn(out.p_A, out.q);
    out.warnings = std::move(f.warnings);
    return out;
}

struct RankOneMate {
    RationalFn b;
    RationalFn a;
    Poly q;
};

/// Rank-one normal form: |q|^2 = |p|^2 + |z - w|^{2m}, b = p/q, a = (z - w)^m / q with a(0) > 0.
inline RankOneMate mate_rank_one(cplx w, int m, const Poly& p) {
    if (m < 1) throw Error(ErrorKind::InvalidDegree, "mate_rank_one needs m >= 1");
    if (p.degree() > m) throw Error(ErrorKind::InvalidDegree, "mate_rank_one needs degree(p) <= m");
    if (!p.is_zero() && std::abs(p(0.0)) > 1e-12 * p.max_abs())
        throw Error(ErrorKind::InvalidSpec, "mate_rank_one needs p(0) = 0");
    if (p.is_zero() || std::abs(p(w)) <= 1e-10 * p.max_abs())
        throw Error(ErrorKind::NotStrict, "p(w) = 0: the norm is not a strict 2m-isometry");
    const Poly zw = Poly::linear_power(w, static_cast<std::size_t>(m));
    const SpectralFactor f = fejer_riesz(TrigPoly::from_modulus_squared(p) + TrigPoly::from_modulus_squared(zw));
    const Poly q = detail::normalize_mate_phase(zw, f.q);
    RationalFn a(zw, q);
    return {RationalFn(p, q), std::move(a), q};
}

/// a0 * prod (1 - w_i z) / prod (1 - alpha_i z) from the characteristic polynomials with roots w_i, alpha_i.
inline RationalFn mate_from_char_polys(const Poly& p, const Poly& q, double a0) {
    if (!(a0 > 0.0)) throw Error(ErrorKind::InvalidSpectrum, "a(0) must be positive");
    if (p.is_zero() || q.is_zero()) throw Error(ErrorKind::InvalidSpectrum, "characteristic polynomials must be nonzero");
    // A root in a cluster of k only comes back to about eps^{1/k}, so the slack grows with the cluster size.
    const std::vector<cplx> p_roots = poly_roots(p);
    for (const cplx& r : p_roots) {
        const auto k = std::count_if(p_roots.begin(), p_roots.end(), [&](const cplx& s) { return std::abs(s - r) < 1e-2; });
        if (std::abs(r) > 1.0 + std::max(1e-4, std::pow(1e-8, 1.0 / static_cast<double>(k))))
            throw Error(ErrorKind::InvalidSpectrum, "root of p outside the closed disc, |w| = " + std::to_string(std::abs(r)));
    }
    for (const cplx& r : poly_roots(q))
        if (std::abs(r) >= 1.0)
            throw Error(ErrorKind::InvalidSpectrum, "root of q outside the open disc, |alpha| = " + std::to_string(std::abs(r)));
    auto reversed_monic = [](const Poly& x) {
        std::vector<cplx> c(x.coeffs().rbegin(), x.coeffs().rend());
        return Poly(std::move(c)) * (1.0 / x.leading());
    };
    return RationalFn(reversed_monic(p) * a0, reversed_monic(q));
}

}  // namespace dbr

#endif  // DBR_SPECTRAL_HPP
