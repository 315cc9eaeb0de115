#ifndef DBR_OPERATOR_HPP
#define DBR_OPERATOR_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dirichlet.hpp"
#include "errors.hpp"
#include "kernel.hpp"
#include "poly.hpp"
#include "rational.hpp"
#include "space_spec.hpp"
#include "spectral.hpp"

namespace dbr {

/// Monic characteristic polynomial det(zI - M), via Hessenberg reduction and the standard recurrence.
inline Poly char_poly(const Matrix& m) {
    const Eigen::Index n = m.rows();
    if (n == 0) return Poly::constant(1.0);
    const Matrix h = Eigen::HessenbergDecomposition<Matrix>(m).matrixH();
    std::vector<Poly> p{Poly::constant(1.0)};
    for (Eigen::Index k = 0; k < n; ++k) {
        Poly next = Poly{-h(k, k), 1.0} * p[static_cast<std::size_t>(k)];
        cplx sub = 1.0;
        for (Eigen::Index i = k - 1; i >= 0; --i) {
            sub *= h(i + 1, i);
            next -= p[static_cast<std::size_t>(i)] * (h(i, k) * sub);
        }
        p.push_back(std::move(next));
    }
    return p.back();
}

struct OperatorModel {
    const KernelModel* model = nullptr;
    std::size_t N = 0;
    /// Gram matrix of the kernel-basis coordinates: <x, y> = y* G x.
    Matrix G;
    Matrix G_inv;
    /// T* restricted to N, kernel-basis coordinates.
    Matrix Astar;
    /// Closed-form T*: conj(w_j) on the diagonal, i on the superdiagonal within each point block.
    Matrix Astar_structural;
    /// Gram-adjoint of Astar, the compression of T to N.
    Matrix A;
    /// L restricted to N on the dual basis.
    Matrix L;
    /// Delta restricted to N, kernel-basis coordinates.
    Matrix Delta;
    /// Defect form on the dual basis: defect_form(c, r) = delta_form(f_r, f_c), so Delta = defect_form * G.
    Matrix defect_form;
    Poly char_A;
    Poly char_L;
    double invariance_residual = 0.0;
};

inline Matrix gram_adjoint(const Matrix& m, const Matrix& g, const Matrix& g_inv) { return g_inv * m.adjoint() * g; }

inline OperatorModel build_operator_model(const KernelModel& km) {
    OperatorModel op;
    op.model = &km;
    op.N = km.dim();
    const auto n = static_cast<Eigen::Index>(op.N);
    op.G = km.F_inv.transpose();
    op.G_inv = km.F.transpose();
    op.Astar = Matrix::Zero(n, n);
    op.Astar_structural = Matrix::Zero(n, n);
    op.Delta = Matrix::Zero(n, n);
    op.L = Matrix::Zero(n, n);
    const Poly z = Poly::monomial(1);
    const SpaceSpec& spec = km.spec;

    for (Eigen::Index c = 0; c < n; ++c) {
        const BasisIndex bc = km.index[static_cast<std::size_t>(c)];
        op.Astar_structural(c, c) = std::conj(spec.w(bc.point));
        if (bc.order > 0) op.Astar_structural(c - 1, c) = static_cast<double>(bc.order);
    }

    // Forms are taken on the well-conditioned dual basis and mapped to kernel coordinates through G,
    // which avoids the cancellation inside the kernel functions when the Grammian is ill-conditioned.
    Matrix M(n, n);
    Matrix& ED = op.defect_form;
    ED.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const RationalFn zf = km.dual[static_cast<std::size_t>(r)].times(z);
        for (Eigen::Index s = 0; s < n; ++s) M(r, s) = hb_inner(km.dual[static_cast<std::size_t>(s)], zf, spec);
        for (Eigen::Index c = r; c < n; ++c) {
            ED(c, r) = delta_form(km.dual[static_cast<std::size_t>(r)], km.dual[static_cast<std::size_t>(c)], spec);
            ED(r, c) = std::conj(ED(c, r));
        }
    }
    op.Astar = M * op.G;
    op.A = M.adjoint() * op.G;
    op.Delta = ED * op.G;

    // L f_c expanded along f_r through the derivative data at the spec points.
    const std::vector<cplx> probes{0.0, {0.3, 0.2}, {-0.5, 0.4}, {0.1, -0.7}, {-0.6, -0.6}, {0.8, 0.1}};
    for (Eigen::Index c = 0; c < n; ++c) {
        const RationalFn lf = km.dual[static_cast<std::size_t>(c)].backward_shift();
        for (Eigen::Index r = 0; r < n; ++r) {
            const BasisIndex br = km.index[static_cast<std::size_t>(r)];
            op.L(r, c) = lf.derivative(spec.w(br.point), static_cast<std::size_t>(br.order));
        }
        double scale = 0.0;
        for (const cplx& x : probes) {
            cplx rebuilt = 0.0;
            for (Eigen::Index r = 0; r < n; ++r) rebuilt += op.L(r, c) * km.dual[static_cast<std::size_t>(r)](x);
            op.invariance_residual = std::max(op.invariance_residual, std::abs(rebuilt - lf(x)));
            scale = std::max(scale, std::abs(lf(x)));
        }
        if (op.invariance_residual > 1e-8 * std::max(1.0, scale))
            throw Error(ErrorKind::NotInvariant,
                        "backward shift of dual element " + std::to_string(c) + " leaves N (residual " +
                            std::to_string(op.invariance_residual) + ")");
    }

    op.char_A = char_poly(op.A);
    op.char_L = char_poly(op.L);
    return op;
}

/// sum_{k=0}^{order} (-1)^{order-k} C(order, k) ||z^k f||^2_{H(B)}
inline double beta_form(const SpaceSpec& spec, int order, const RationalFn& f) {
    double acc = 0.0, binom = 1.0;
    for (int k = 0; k <= order; ++k) {
        if (k > 0) binom = binom * (order - k + 1) / k;
        const double sign = (order - k) % 2 == 0 ? 1.0 : -1.0;
        acc += sign * binom * hb_norm_sq(f.times(Poly::monomial(static_cast<std::size_t>(k))), spec);
    }
    return acc;
}

/// hb_inner(z^r, z^s) for r, s < size.
inline Matrix monomial_gram(const SpaceSpec& spec, std::size_t size) {
    const auto n = static_cast<Eigen::Index>(size);
    std::vector<RationalFn> mono;
    for (std::size_t k = 0; k < size; ++k) mono.push_back(RationalFn::polynomial(Poly::monomial(k)));
    Matrix g(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index s = r; s < n; ++s) {
            g(r, s) = hb_inner(mono[static_cast<std::size_t>(r)], mono[static_cast<std::size_t>(s)], spec);
            g(s, r) = std::conj(g(r, s));
        }
    return g;
}

struct IsometryOrder {
    /// satisfied[M - 1] is true when the beta_M form vanishes on the probe space.
    std::vector<bool> satisfied;
    /// Worst relative |beta_M| entry per order.
    std::vector<double> residual;
    std::optional<int> strict_order;
    int probe_degree = 0;

    bool is_order(int m) const { return m >= 1 && m <= static_cast<int>(satisfied.size()) && satisfied[static_cast<std::size_t>(m - 1)]; }
};

inline int default_probe_degree(const SpaceSpec& spec, int max_order) {
    return spec.total_multiplicity() + 2 * max_order + 4;
}

/// The beta_M forms, polarized on every pair of monomials z^r, z^s with r, s <= probe_degree.
inline IsometryOrder isometry_order(const SpaceSpec& spec, int max_order, int probe_degree = -1) {
    if (max_order < 1) throw Error(ErrorKind::InvalidDegree, "max_order must be positive");
    if (probe_degree < 0) probe_degree = default_probe_degree(spec, max_order);
    if (probe_degree < spec.total_multiplicity() + max_order)
        throw Error(ErrorKind::InvalidDegree, "probe degree must be at least N + max_order");
    IsometryOrder out;
    out.probe_degree = probe_degree;
    const auto P = static_cast<Eigen::Index>(probe_degree) + 1;
    const Matrix g = monomial_gram(spec, static_cast<std::size_t>(P + max_order));
    for (int M = 1; M <= max_order; ++M) {
        std::vector<double> binom(static_cast<std::size_t>(M) + 1, 1.0);
        for (int k = 1; k <= M; ++k) binom[static_cast<std::size_t>(k)] = binom[static_cast<std::size_t>(k - 1)] * (M - k + 1) / k;
        double worst = 0.0;
        for (Eigen::Index r = 0; r < P; ++r)
            for (Eigen::Index s = r; s < P; ++s) {
                cplx b = 0.0;
                for (int k = 0; k <= M; ++k)
                    b += ((M - k) % 2 == 0 ? 1.0 : -1.0) * binom[static_cast<std::size_t>(k)] * g(r + k, s + k);
                worst = std::max(worst, std::abs(b) / std::sqrt(g(r, r).real() * g(s, s).real()));
            }
        out.residual.push_back(worst);
        out.satisfied.push_back(worst < 1e-8);
        if (worst < 1e-8 && !out.strict_order) out.strict_order = M;
    }
    return out;
}

/// Delta_j = P_j Delta Q_j with P_j the point-j block projection and Q_j its Gram-adjoint.
inline std::vector<Matrix> delta_decomposition(const OperatorModel& op) {
    const KernelModel& km = *op.model;
    const auto n = static_cast<Eigen::Index>(op.N);
    std::vector<Matrix> out;
    for (std::size_t j = 0; j < km.spec.size(); ++j) {
        Matrix P = Matrix::Zero(n, n);
        for (Eigen::Index r = 0; r < n; ++r)
            if (km.index[static_cast<std::size_t>(r)].point == j) P(r, r) = 1.0;
        // Delta * G^{-1} P G = defect_form * P * G, so the idempotent needs no explicit G^{-1} G product.
        out.push_back(P * op.defect_form * P * op.G);
    }
    return out;
}

/// Eigenvalues of the operator m, self-adjoint in the Gram metric g, ascending.
inline Eigen::VectorXd metric_eigenvalues(const Matrix& m, const Matrix& g) {
    if (m.rows() == 0) return {};
    const Matrix form = g * m;
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es((form + form.adjoint()) / 2.0, (g + g.adjoint()) / 2.0,
                                                         Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

/// Count of eigenvalues above 1e-10 of the largest one.
inline int metric_rank(const Matrix& m, const Matrix& g) {
    const Eigen::VectorXd ev = metric_eigenvalues(m, g);
    if (ev.size() == 0) return 0;
    const double top = ev.cwiseAbs().maxCoeff();
    int r = 0;
    for (Eigen::Index k = 0; k < ev.size(); ++k)
        if (ev(k) > 1e-10 * top) ++r;
    return r;
}

struct CrossCheck {
    RationalFn reconstructed;
    double residual = 0.0;
    bool pass = false;
};

/// The mate rebuilt from the characteristic polynomials of T* on N and of L on N, compared with the factored mate.
inline CrossCheck char_poly_crosscheck(const OperatorModel& op, const MateResult& mate) {
    CrossCheck out;
    const double a0 = mate.a(0.0).real();
    out.reconstructed = mate_from_char_polys(op.char_A.conj_coeffs(), op.char_L, a0);
    for (std::size_t k = 0; k < 64; ++k) {
        const double rad = 0.95 * std::sqrt((static_cast<double>(k) + 0.5) / 64.0);
        const cplx z = std::polar(rad, 2.399963229728653 * static_cast<double>(k));
        const cplx want = mate.a(z);
        out.residual = std::max(out.residual, std::abs(out.reconstructed(z) - want) / std::max(std::abs(want), 1e-300));
    }
    out.pass = out.residual < 1e-7;
    return out;
}

}  // namespace dbr

#endif  // DBR_OPERATOR_HPP
