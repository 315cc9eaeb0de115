#ifndef DBR_DIRICHLET_HPP
#define DBR_DIRICHLET_HPP

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"
#include "rational.hpp"
#include "space_spec.hpp"

namespace dbr {

/// D_w^m(f) = || (f - T_{m-1}(f, w)) / (z - w)^m ||^2_{H^2}
inline double local_dirichlet(const RationalFn& f, cplx w, int m) {
    const RationalFn g = deflate(f, w, m);
    return h2_norm_sq(g);
}

/// H(B) inner product of the norm ||f||^2_{H^2} + sum_{j,i} D_{w_j}^{m_j}(p_ij f), by bilinearity of deflation.
inline cplx hb_inner(const RationalFn& f, const RationalFn& g, const SpaceSpec& spec) {
    const bool same = &f == &g;
    cplx acc = h2_inner(f, g);
    for (const SpacePoint& pt : spec.points()) {
        const cplx w = pt.w();
        for (const Poly& p : pt.weights) {
            const RationalFn df = deflate(f.times(p), w, pt.m);
            if (same) {
                acc += h2_norm_sq(df);
            } else {
                acc += h2_inner(df, deflate(g.times(p), w, pt.m));
            }
        }
    }
    return acc;
}

inline double hb_norm_sq(const RationalFn& f, const SpaceSpec& spec) { return hb_inner(f, f, spec).real(); }

/// <Delta f, g> in closed form: sum_{j,i} (p_ij f)^{(m_j-1)}(w_j) conj((p_ij g)^{(m_j-1)}(w_j)) / ((m_j-1)!)^2.
inline cplx delta_form(const RationalFn& f, const RationalFn& g, const SpaceSpec& spec) {
    cplx acc = 0.0;
    for (const SpacePoint& pt : spec.points()) {
        const cplx w = pt.w();
        const auto top = static_cast<std::size_t>(pt.m - 1);
        for (const Poly& p : pt.weights) {
            const cplx a = f.times(p).taylor_coeffs(w, top + 1)[top];
            const cplx b = g.times(p).taylor_coeffs(w, top + 1)[top];
            acc += a * std::conj(b);
        }
    }
    return acc;
}

/// <zf, zg>_{H(B)} - <f, g>_{H(B)}; the second route to delta_form.
inline cplx delta_form_by_shift(const RationalFn& f, const RationalFn& g, const SpaceSpec& spec) {
    const Poly z = Poly::monomial(1);
    return hb_inner(f.times(z), g.times(z), spec) - hb_inner(f, g, spec);
}

/// Trapezoidal rule over `samples` circle nodes for the integral of <Delta h_l, h_l>, h_l = (g - g(l)) / (z - l).
/// Converges to ||g||^2_{H(B)} - ||g||^2_{H^2}.
inline double defect_quadrature(const Poly& g, const SpaceSpec& spec, std::size_t samples) {
    if (samples < 16) throw Error(ErrorKind::InvalidSpec, "quadrature needs at least 16 samples");
    double acc = 0.0;
    for (const cplx& lambda : circle_points(samples)) {
        const RationalFn h = RationalFn::polynomial(synthetic_divide(g, lambda).first);
        acc += delta_form(h, h, spec).real();
    }
    return acc / static_cast<double>(samples);
}

}  // namespace dbr

#endif  // DBR_DIRICHLET_HPP
