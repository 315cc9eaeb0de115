#ifndef DBR_KERNEL_HPP
#define DBR_KERNEL_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dirichlet.hpp"
#include "errors.hpp"
#include "poly.hpp"
#include "rational.hpp"
#include "space_spec.hpp"
#include "spectral.hpp"

namespace dbr {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Flat index of the basis element (point j, derivative order i): point-major, order-minor.
struct BasisIndex {
    std::size_t point;
    int order;
};

inline std::vector<BasisIndex> basis_indices(const SpaceSpec& spec) {
    std::vector<BasisIndex> idx;
    for (std::size_t j = 0; j < spec.size(); ++j)
        for (int i = 0; i < spec.m(j); ++i) idx.push_back({j, i});
    return idx;
}

/// f_ij = a / (z - w_j)^{m_j - i} * g_ij, biorthogonal to the kernel derivatives at the spec points.
inline std::vector<RationalFn> dual_basis(const SpaceSpec& spec, const MateResult& mate) {
    std::vector<RationalFn> out;
    for (std::size_t j = 0; j < spec.size(); ++j) {
        const cplx w = spec.w(j);
        const int m = spec.m(j);
        // h = a / (z - w)^m is analytic and nonzero at w.
        const RationalFn h(spec.p_A(j, 0), mate.q);
        const std::vector<cplx> hc = h.taylor_coeffs(w, static_cast<std::size_t>(m));
        if (std::abs(hc[0]) <= 1e-12 * std::max(1.0, h.num().max_abs()))
            throw Error(ErrorKind::DegenerateDualBasis, "mate has a zero of order above m at point " + std::to_string(j));
        double fact = 1.0;
        for (int i = 0; i < m; ++i) {
            if (i > 0) fact *= i;
            // [h g]_0 = 1/i!, [h g]_s = 0 for 1 <= s <= m - 1 - i, in powers of (z - w).
            const int len = m - i;
            std::vector<cplx> gamma(static_cast<std::size_t>(len), 0.0);
            for (int s = 0; s < len; ++s) {
                cplx acc = s == 0 ? cplx(1.0 / fact) : cplx(0.0);
                for (int t = 0; t < s; ++t) acc -= hc[static_cast<std::size_t>(s - t)] * gamma[static_cast<std::size_t>(t)];
                gamma[static_cast<std::size_t>(s)] = acc / hc[0];
            }
            const Poly step{-w, 1.0};
            Poly g = Poly::constant(gamma.back());
            for (int s = len - 2; s >= 0; --s) g = g * step + Poly::constant(gamma[static_cast<std::size_t>(s)]);
            out.push_back(RationalFn(spec.p_A(j, i) * g, mate.q));
        }
    }
    return out;
}

/// F[r][c] = <f_r, f_c>_{H(B)}
inline Matrix grammian(const std::vector<RationalFn>& dual, const SpaceSpec& spec) {
    const auto n = static_cast<Eigen::Index>(dual.size());
    Matrix f(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = r; c < n; ++c) {
            f(r, c) = hb_inner(dual[static_cast<std::size_t>(r)], dual[static_cast<std::size_t>(c)], spec);
            f(c, r) = std::conj(f(r, c));
        }
    return f;
}

struct HermitianInverse {
    Matrix inverse;
    double condition = 1.0;
    double min_eigenvalue = 0.0;
};

/// Inverse of a Hermitian positive definite matrix via its eigendecomposition.
inline HermitianInverse hermitian_inverse(const Matrix& m) {
    HermitianInverse out;
    if (m.rows() == 0) return out;
    const Matrix sym = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    const Eigen::VectorXd ev = es.eigenvalues();
    out.min_eigenvalue = ev.minCoeff();
    const double hi = ev.maxCoeff();
    out.condition = out.min_eigenvalue > 0.0 ? hi / out.min_eigenvalue : std::numeric_limits<double>::infinity();
    if (!(out.min_eigenvalue > 0.0))
        throw Error(ErrorKind::IllConditionedGrammian,
                    "Grammian is not positive definite (min eigenvalue " + std::to_string(out.min_eigenvalue) +
                        ", condition estimate " + std::to_string(hi / std::abs(out.min_eigenvalue)) + ")");
    Matrix x = es.eigenvectors() * ev.cwiseInverse().cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    // One Newton-Schulz refinement step recovers digits lost in the eigendecomposition.
    x += x * (Matrix::Identity(m.rows(), m.cols()) - sym * x);
    out.inverse = (x + x.adjoint()) / 2.0;
    return out;
}

struct KernelModel {
    SpaceSpec spec;
    MateResult mate;
    std::vector<BasisIndex> index;
    std::vector<RationalFn> dual;
    Matrix F;
    Matrix F_inv;
    double condition = 1.0;
    /// kernel[r] is the kernel derivative at (point, order) index[r]: <f, kernel[r]> = f^{(i)}(w_j).
    std::vector<RationalFn> kernel;
    std::vector<std::string> warnings;

    std::size_t dim() const noexcept { return dual.size(); }
};

inline KernelModel build_kernel_model(const SpaceSpec& spec, const MateResult& mate) {
    KernelModel km;
    km.spec = spec;
    km.mate = mate;
    km.warnings = mate.warnings;
    km.index = basis_indices(spec);
    km.dual = dual_basis(spec, mate);
    km.F = grammian(km.dual, spec);
    const Matrix asym = km.F - km.F.adjoint();
    if (km.dim() > 0 && asym.cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, km.F.cwiseAbs().maxCoeff()))
        km.warnings.push_back("Grammian asymmetry above 1e-10 before symmetrization");
    const HermitianInverse inv = hermitian_inverse(km.F);
    km.F_inv = inv.inverse;
    km.condition = inv.condition;
    if (inv.condition > 1e10)
        km.warnings.push_back("AccuracyWarning: Grammian condition number " + std::to_string(inv.condition));
    for (std::size_t r = 0; r < km.dim(); ++r) {
        std::vector<cplx> row(km.dim());
        for (std::size_t s = 0; s < km.dim(); ++s)
            row[s] = km.F_inv(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s));
        km.kernel.push_back(linear_combination(row, km.dual));
    }
    return km;
}

inline KernelModel build_kernel_model(const SpaceSpec& spec) { return build_kernel_model(spec, mate_from_spec(spec)); }

namespace detail {

inline void require_disc(cplx z, const char* name) {
    if (!(std::abs(z) < 1.0))
        throw Error(ErrorKind::OutOfDomain, std::string(name) + " must lie in the open unit disc, |" + name +
                                                "| = " + std::to_string(std::abs(z)));
}

}  // namespace detail

/// K_w(z) = sum_r conj(K_r(w)) f_r(z) + a(z) conj(a(w)) / (1 - z conj(w)).
inline cplx kernel_at(const KernelModel& km, cplx w, cplx z) {
    detail::require_disc(w, "w");
    detail::require_disc(z, "z");
    cplx acc = km.mate.a(z) * std::conj(km.mate.a(w)) / (1.0 - z * std::conj(w));
    for (std::size_t r = 0; r < km.dim(); ++r) acc += std::conj(km.kernel[r](w)) * km.dual[r](z);
    return acc;
}

/// z -> K_w(z) as a rational function with denominator q (1 - conj(w) z).
inline RationalFn kernel_section(const KernelModel& km, cplx w) {
    detail::require_disc(w, "w");
    const Poly tail{1.0, -std::conj(w)};
    Poly num = km.mate.p_A * std::conj(km.mate.a(w));
    for (std::size_t r = 0; r < km.dim(); ++r) num += km.dual[r].num() * tail * std::conj(km.kernel[r](w));
    return RationalFn(num, km.mate.q * tail);
}

/// Row Schur function B = (b_1, ..., b_n) with mate a.
struct SchurFunction {
    std::vector<RationalFn> components;
    RationalFn mate;

    std::size_t rank() const noexcept { return components.size(); }

    std::vector<cplx> operator()(cplx z) const {
        std::vector<cplx> v;
        for (const RationalFn& b : components) v.push_back(b(z));
        return v;
    }
    double norm_sq(cplx z) const {
        double s = 0.0;
        for (const RationalFn& b : components) s += std::norm(b(z));
        return s;
    }
    /// sum_i b_i(z) conj(b_i(w))
    cplx pairing(cplx z, cplx w) const {
        cplx s = 0.0;
        for (const RationalFn& b : components) s += b(z) * std::conj(b(w));
        return s;
    }
    /// (1 - <B(z), B(w)>) / (1 - z conj(w))
    cplx kernel(cplx w, cplx z) const { return (1.0 - pairing(z, w)) / (1.0 - z * std::conj(w)); }

    /// Largest |b_i(0)|.
    double origin_residual() const {
        double r = 0.0;
        for (const RationalFn& b : components) r = std::max(r, std::abs(b(0.0)));
        return r;
    }
    /// Largest | sum |b_i|^2 + |a|^2 - 1 | over circle samples.
    double mate_identity_residual(std::size_t samples = 256) const {
        double r = 0.0;
        for (const cplx& z : circle_points(samples)) r = std::max(r, std::abs(norm_sq(z) + std::norm(mate(z)) - 1.0));
        return r;
    }
    /// Largest sum |b_i|^2 over interior samples of radius <= 0.95; below 1 for a proper contraction.
    double interior_sup(std::size_t samples = 64) const {
        double r = 0.0;
        for (std::size_t k = 0; k < samples; ++k) {
            const double rad = 0.95 * std::sqrt((static_cast<double>(k) + 0.5) / static_cast<double>(samples));
            const cplx z = std::polar(rad, 2.399963229728653 * static_cast<double>(k));
            r = std::max(r, norm_sq(z));
        }
        return r;
    }
};

namespace detail {

// Rotates b so that its first nonvanishing Maclaurin coefficient is real and positive.
inline RationalFn fix_phase(const RationalFn& b, std::size_t probe) {
    const std::vector<cplx> c = maclaurin(b, probe);
    double mx = 0.0;
    for (const cplx& v : c) mx = std::max(mx, std::abs(v));
    for (const cplx& v : c)
        if (std::abs(v) > 1e-8 * mx) return b.scaled(std::abs(v) / v);
    return b;
}

}  // namespace detail

/// Eigenpairs of Delta on N rebuilt as b_i = z sqrt(t_i / (1 + t_i)) e_i with ||e_i||_{H(B)} = 1.
inline SchurFunction recover_schur(const KernelModel& km) {
    SchurFunction out;
    out.mate = km.mate.a;
    const auto n = static_cast<Eigen::Index>(km.dim());
    if (n == 0) return out;
    // Coordinates x over the dual basis: <u, v> = y* G x with G = F^T, <Delta u, v> = y* E x.
    const Matrix G = km.F.transpose();
    Matrix E(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = r; c < n; ++c) {
            E(c, r) = delta_form(km.dual[static_cast<std::size_t>(r)], km.dual[static_cast<std::size_t>(c)], km.spec);
            E(r, c) = std::conj(E(c, r));
        }
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(E, (G + G.adjoint()) / 2.0);
    const Eigen::VectorXd t = es.eigenvalues();
    const double tmax = std::max(t.cwiseAbs().maxCoeff(), 0.0);
    if (tmax == 0.0) return out;
    const Poly z = Poly::monomial(1);
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        if (t(k) < -1e-9 * tmax)
            throw Error(ErrorKind::NotPositiveDefect, "Delta on N has eigenvalue " + std::to_string(t(k)));
        if (t(k) <= 1e-10 * tmax) continue;
        std::vector<cplx> coeffs(static_cast<std::size_t>(n));
        for (Eigen::Index r = 0; r < n; ++r) coeffs[static_cast<std::size_t>(r)] = es.eigenvectors()(r, k);
        const RationalFn e = linear_combination(coeffs, km.dual);
        const RationalFn b = e.times(z).scaled(std::sqrt(t(k) / (1.0 + t(k))));
        out.components.push_back(detail::fix_phase(b, static_cast<std::size_t>(n) + 8));
    }
    return out;
}

/// C = phi_alpha(B) for the ball automorphism phi_alpha; the mate becomes f_alpha a up to a unimodular factor.
inline SchurFunction mobius_normalize(const SchurFunction& B, const std::vector<cplx>& alpha) {
    if (alpha.size() != B.rank())
        throw Error(ErrorKind::InvalidSpec, "alpha has dimension " + std::to_string(alpha.size()) + ", B has rank " +
                                                std::to_string(B.rank()));
    double a2 = 0.0;
    for (const cplx& v : alpha) a2 += std::norm(v);
    if (std::sqrt(a2) >= 1.0 - 1e-9)
        throw Error(ErrorKind::OutOfBall, "alpha must satisfy ||alpha|| < 1, got " + std::to_string(std::sqrt(a2)));
    SchurFunction out;
    if (B.rank() == 0) {
        out.mate = B.mate;
        return out;
    }
    if (a2 == 0.0) {
        for (const RationalFn& b : B.components) out.components.push_back(b.scaled(-1.0));
        out.mate = B.mate;
        return out;
    }
    // Bring every component and the mate over one denominator q.
    const Poly q = B.components[0].den();
    std::vector<Poly> num;
    for (const RationalFn& b : B.components) {
        if (!(b.den() == q)) throw Error(ErrorKind::InvalidSpec, "components must share a denominator");
        num.push_back(b.num());
    }
    const double s = std::sqrt(1.0 - a2);
    Poly inner;  // sum conj(alpha_k) n_k
    for (std::size_t k = 0; k < num.size(); ++k) inner += num[k] * std::conj(alpha[k]);
    const Poly d = q - inner;
    for (std::size_t i = 0; i < num.size(); ++i) {
        const Poly top = q * alpha[i] - inner * ((1.0 - s) / a2 * alpha[i]) - num[i] * s;
        out.components.push_back(RationalFn(top, d));
    }
    // f_alpha a = s a q / d
    const RationalFn mate = B.mate.den() == q ? RationalFn(B.mate.num() * s, d)
                                              : RationalFn(B.mate.num() * q * s, B.mate.den() * d);
    const cplx m0 = mate(0.0);
    out.mate = mate.scaled(std::abs(m0) / m0);
    return out;
}

}  // namespace dbr

#endif  // DBR_KERNEL_HPP
