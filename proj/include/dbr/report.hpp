#ifndef DBR_REPORT_HPP
#define DBR_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dirichlet.hpp"
#include "io.hpp"
#include "kernel.hpp"
#include "operator.hpp"
#include "roots.hpp"
#include "spectral.hpp"

namespace dbr {

struct Check {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    bool skipped = false;

    friend bool operator==(const Check&, const Check&) = default;
};

struct Report {
    SpaceSpec spec;
    MateResult mate;
    Matrix F;
    Matrix F_inv;
    std::vector<RationalFn> dual;
    std::vector<RationalFn> kernel;
    std::vector<RationalFn> schur;
    std::size_t rank = 0;
    std::string phase_convention;
    Poly char_A;
    Poly char_L;
    std::optional<int> strict_order;
    std::string strict_label;
    std::vector<Check> checks;
    std::vector<std::string> warnings;

    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass || c.skipped; });
    }
    const Check* find(const std::string& name) const {
        for (const Check& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

struct Options {
    /// Residual tolerance for the checks whose nominal tolerance is 1e-8.
    double tol = 1e-8;
    std::size_t samples = 512;
    /// Probe degree for the isometry-order sweep; negative means automatic.
    int degree_cap = -1;
    std::uint64_t seed = 42;
};

inline constexpr const char* kPhaseConvention =
    "each b_i is rotated so that its first nonvanishing Maclaurin coefficient is real and positive";

namespace detail {

inline cplx interior_point(std::size_t k, std::size_t count, double radius = 0.95) {
    const double rad = radius * std::sqrt((static_cast<double>(k) + 0.5) / static_cast<double>(count));
    return std::polar(rad, 2.399963229728653 * static_cast<double>(k));
}

class CheckList {
   public:
    void add(std::string name, double residual, double tolerance) {
        list.push_back({std::move(name), residual, tolerance, residual < tolerance, false});
    }
    void add_bool(std::string name, double residual, double tolerance, bool pass) {
        list.push_back({std::move(name), residual, tolerance, pass, false});
    }
    void skip(std::string name, double tolerance) { list.push_back({std::move(name), 0.0, tolerance, true, true}); }

    std::vector<Check> list;
};

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace detail

/// Everything the checks need, built once.
struct Pipeline {
    SpaceSpec input;
    SpaceSpec spec;
    bool input_strict = true;
    std::vector<std::string> warnings;
    KernelModel km;
    SchurFunction B;
    OperatorModel op;
    IsometryOrder order;
    int max_order = 0;
};

inline Pipeline run_pipeline(const SpaceSpec& input, const Options& opt) {
    Pipeline p;
    p.input = input;
    p.input_strict = input.all_strict();
    p.spec = input.reduced(&p.warnings);
    p.km = build_kernel_model(p.spec);
    for (const std::string& w : p.km.warnings) p.warnings.push_back(w);
    p.B = recover_schur(p.km);
    p.op = build_operator_model(p.km);
    p.max_order = 2 * p.spec.m_max() + 2;
    const int probe = opt.degree_cap >= 0 ? opt.degree_cap : default_probe_degree(p.spec, p.max_order);
    p.order = isometry_order(p.spec, p.max_order, probe);
    return p;
}

inline void construct_checks(const Pipeline& p, const Options& opt, detail::CheckList& out) {
    const KernelModel& km = p.km;
    const SpaceSpec& spec = p.spec;
    const MateResult& mate = km.mate;
    const OperatorModel& op = p.op;
    const double tol = opt.tol;
    const auto n = static_cast<Eigen::Index>(km.dim());

    const cplx a0 = mate.a(0.0);
    out.add_bool("mate_normalization", std::abs(a0.imag()), 1e-12, a0.real() > 0.0 && std::abs(a0.imag()) < 1e-12);
    {
        double worst = 0.0;
        for (const cplx& z : circle_points(256)) worst = std::max(worst, std::abs(mate.a(z)) - 1.0);
        out.add("mate_bounded_on_circle", std::max(worst, 0.0), 1e-10);
    }
    {
        const TrigPoly r = mate_modulus(spec);
        double worst = 0.0, hi = 0.0;
        for (const cplx& z : circle_points(kFactorSamples)) {
            worst = std::max(worst, std::abs(std::norm(mate.q(z)) - r(z)));
            hi = std::max(hi, r(z));
        }
        out.add("fejer_riesz_identity", worst / std::max(hi, 1e-300), 1e-9);
    }
    {
        double worst = 0.0;
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index t = 0; t < n; ++t) {
                const BasisIndex bt = km.index[static_cast<std::size_t>(t)];
                const cplx d = km.dual[static_cast<std::size_t>(r)].derivative(spec.w(bt.point), static_cast<std::size_t>(bt.order));
                worst = std::max(worst, std::abs(d - (r == t ? 1.0 : 0.0)));
            }
        out.add("dual_biorthogonality", worst, tol);
    }
    out.add("grammian_hermitian", detail::max_abs(km.F - km.F.adjoint()) / std::max(1.0, detail::max_abs(km.F)), 1e-10);
    {
        double lo = 1.0;
        if (n > 0) lo = Eigen::SelfAdjointEigenSolver<Matrix>((km.F + km.F.adjoint()) / 2.0).eigenvalues().minCoeff();
        out.add_bool("grammian_positive_definite", std::max(-lo, 0.0), 0.0, lo > 0.0);
    }
    {
        // <f, K_r> = f^{(i)}(w_j) on the dual basis and on monomials.
        std::vector<RationalFn> probes = km.dual;
        for (std::size_t k = 0; k <= km.dim() + 2; ++k) probes.push_back(RationalFn::polynomial(Poly::monomial(k)));
        double worst = 0.0;
        for (const RationalFn& f : probes)
            for (std::size_t r = 0; r < km.dim(); ++r) {
                const BasisIndex br = km.index[r];
                const cplx want = f.derivative(spec.w(br.point), static_cast<std::size_t>(br.order));
                worst = std::max(worst, std::abs(hb_inner(f, km.kernel[r], spec) - want) / (1.0 + std::abs(want)));
            }
        out.add("derivative_reproducing", worst, tol);
    }

    const SchurFunction& B = p.B;
    out.add("schur_vanishes_at_origin", B.origin_residual(), 1e-10);
    out.add("schur_mate_identity", B.mate_identity_residual(256), tol);
    out.add("schur_interior_contraction", B.interior_sup(64), 1.0);
    out.add_bool("schur_rank_bound", static_cast<double>(B.rank()), static_cast<double>(spec.rank_bound()),
                 static_cast<int>(B.rank()) <= spec.rank_bound());
    {
        double worst = 0.0;
        for (std::size_t k = 0; k < 64; ++k) {
            const cplx z = detail::interior_point(k, 64), w = detail::interior_point(63 - k, 64, 0.9) * cplx(0.0, 1.0);
            worst = std::max(worst, std::abs(kernel_at(km, w, z) - B.kernel(w, z)));
        }
        out.add("kernel_routes_agree", worst, tol);
    }
    if (p.input_strict) {
        const int deg_b = B.rank() == 0 ? 0 : B.components[0].den().degree();
        const int deg_q = mate.q.degree();
        const double mismatch = std::abs(deg_b - deg_q) + (B.rank() == 0 ? 0 : std::abs(deg_q - static_cast<int>(km.dim())));
        out.add_bool("mate_degree_accounting", mismatch, 0.0, mismatch == 0.0);
    } else {
        out.skip("mate_degree_accounting", 0.0);
    }

    out.add("astar_block_bidiagonal",
            detail::max_abs(op.Astar - op.Astar_structural) / std::max(1.0, detail::max_abs(op.Astar_structural)), tol);
    {
        std::mt19937_64 rng(opt.seed);
        std::normal_distribution<double> nd;
        double worst = 0.0;
        for (int trial = 0; trial < 8 && n > 0; ++trial) {
            Vector x(n), y(n);
            for (Eigen::Index k = 0; k < n; ++k) {
                x(k) = {nd(rng), nd(rng)};
                y(k) = {nd(rng), nd(rng)};
            }
            const cplx lhs = y.dot(op.G * (op.A * x));
            const cplx rhs = (op.Astar * y).dot(op.G * x);
            const double scale = std::sqrt(std::abs(x.dot(op.G * x)) * std::abs(y.dot(op.G * y)));
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(scale, 1e-300));
        }
        out.add("gram_adjoint_consistency", worst, 1e-10);
    }
    out.add("char_A_equals_p_A", max_coeff_diff(op.char_A, mate.p_A), tol);
    {
        double worst = 0.0;
        if (op.char_L.degree() > 0)
            for (const cplx& r : poly_roots(op.char_L)) worst = std::max(worst, std::abs(r));
        out.add("char_L_roots_in_disc", worst, 1.0);
    }
    {
        const CrossCheck cc = char_poly_crosscheck(op, mate);
        out.add("mate_from_characteristic_polynomials", cc.residual, 1e-7);
    }

    const std::vector<Matrix> parts = delta_decomposition(op);
    {
        Matrix sum = Matrix::Zero(n, n);
        for (const Matrix& d : parts) sum += d;
        out.add("delta_decomposition_sum", detail::max_abs(sum - op.Delta) / std::max(1.0, detail::max_abs(op.Delta)), 1e-10);
        double lo = 0.0;
        for (const Matrix& d : parts) {
            const Eigen::VectorXd ev = metric_eigenvalues(d, op.G);
            if (ev.size() > 0) lo = std::min(lo, ev.minCoeff());
        }
        out.add_bool("delta_parts_positive", std::max(-lo, 0.0), 1e-9, lo > -1e-9);
        double nil = 0.0;
        for (std::size_t j = 0; j < parts.size(); ++j) {
            const Matrix shift = op.Astar - std::conj(spec.w(j)) * Matrix::Identity(n, n);
            Matrix acc = parts[j];
            for (int k = 0; k < spec.m_max(); ++k) acc = shift * acc;
            nil = std::max(nil, detail::max_abs(acc) / std::max(1.0, detail::max_abs(parts[j])));
        }
        out.add("delta_parts_annihilated", nil, tol);
        int sum_rank = 0;
        for (const Matrix& d : parts) sum_rank += metric_rank(d, op.G);
        const int full = metric_rank(op.Delta, op.G);
        out.add_bool("delta_rank_accounting", std::abs(sum_rank - static_cast<int>(B.rank())) + std::abs(full - static_cast<int>(B.rank())),
                     0.0, sum_rank == static_cast<int>(B.rank()) && full == static_cast<int>(B.rank()));
        const bool bound = full <= static_cast<int>(op.N) && static_cast<int>(op.N) <= spec.m_max() * full;
        out.add_bool("defect_rank_bounds", static_cast<double>(full), static_cast<double>(op.N), bound);
    }
    {
        // x* Delta x > 0 for every eigenvector x of A.
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < spec.size(); ++j) {
            const Matrix shifted = op.A - spec.w(j) * Matrix::Identity(n, n);
            Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
            const Vector x = svd.matrixV().col(n - 1);
            const double form = x.dot(op.G * (op.Delta * x)).real();
            const double nrm = x.dot(op.G * x).real();
            worst = std::min(worst, form / nrm);
        }
        if (spec.empty()) worst = 1.0;
        out.add_bool("eigenvector_nondegeneracy", worst, 1e-10, worst > 1e-10);
    }

    const int top = 2 * spec.m_max();
    if (spec.empty()) {
        out.add("beta_form_vanishing", p.order.residual[0], tol);
    } else {
        out.add("beta_form_vanishing", p.order.residual[static_cast<std::size_t>(top - 1)], tol);
    }
    if (p.input_strict) {
        const int expected = spec.empty() ? 1 : top;
        const int got = p.order.strict_order.value_or(0);
        out.add_bool("strict_isometry_order", std::abs(got - expected), 0.0, got == expected);
    } else {
        out.skip("strict_isometry_order", 0.0);
    }
    {
        const int got = p.order.strict_order.value_or(0);
        out.add_bool("strict_order_even", got, 0.0, got == 1 || (got > 0 && got % 2 == 0));
    }
}

/// The randomized property suite, deterministic for a fixed seed.
inline void verify_checks(const Pipeline& p, const Options& opt, detail::CheckList& out) {
    const KernelModel& km = p.km;
    const SpaceSpec& spec = p.spec;
    const double tol = opt.tol;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto rc = [&] { return cplx(u(rng), u(rng)); };
    auto rdisc = [&](double r) {
        cplx z;
        do z = rc();
        while (std::abs(z) > 1.0);
        return z * r;
    };
    auto rpoly = [&](int d) {
        std::vector<cplx> c(static_cast<std::size_t>(d) + 1);
        for (cplx& v : c) v = rc();
        return Poly(std::move(c));
    };
    auto rrational = [&](int d, int poles) {
        std::vector<cplx> roots;
        for (int k = 0; k < poles; ++k) roots.push_back(std::polar(1.3 + (u(rng) + 1.0), 3.14159 * u(rng)));
        return RationalFn(rpoly(d), Poly::from_roots(roots));
    };

    {
        double worst = 0.0;
        std::vector<cplx> ws;
        for (int k = 0; k < 20; ++k) ws.push_back(rdisc(0.9));
        std::vector<RationalFn> sections;
        for (const cplx& w : ws) sections.push_back(kernel_section(km, w));
        for (int t = 0; t < 20; ++t) {
            const RationalFn f = RationalFn::polynomial(rpoly(8));
            for (std::size_t k = 0; k < ws.size(); ++k) {
                const cplx want = f(ws[k]);
                worst = std::max(worst, std::abs(hb_inner(f, sections[k], spec) - want) / (1.0 + std::abs(want)));
            }
        }
        out.add("reproducing_property", worst, tol);
    }
    {
        double worst = 0.0;
        for (int k = 0; k < 32; ++k) {
            const cplx z = rdisc(0.95), w = rdisc(0.95);
            worst = std::max(worst, std::abs(kernel_at(km, w, z) - std::conj(kernel_at(km, z, w))));
            worst = std::max(worst, std::abs(kernel_at(km, 0.0, z) - 1.0));
        }
        out.add("kernel_hermitian_and_normalized", worst, tol);
    }
    {
        const Eigen::Index m = 8;
        std::vector<cplx> nodes;
        for (Eigen::Index k = 0; k < m; ++k) nodes.push_back(rdisc(0.9));
        Matrix kmat(m, m);
        for (Eigen::Index r = 0; r < m; ++r)
            for (Eigen::Index c = 0; c < m; ++c)
                kmat(r, c) = kernel_at(km, nodes[static_cast<std::size_t>(c)], nodes[static_cast<std::size_t>(r)]);
        const double lo = Eigen::SelfAdjointEigenSolver<Matrix>((kmat + kmat.adjoint()) / 2.0).eigenvalues().minCoeff();
        out.add_bool("kernel_positive_semidefinite", std::max(-lo, 0.0), 1e-9, lo > -1e-9);
    }
    {
        double worst = 0.0, expans = 0.0;
        for (int k = 0; k < 10; ++k) {
            const RationalFn f = k % 2 ? rrational(3, 2) : RationalFn::polynomial(rpoly(5));
            const RationalFn g = rrational(2, 1);
            const cplx a = delta_form(f, g, spec), b = delta_form_by_shift(f, g, spec);
            worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(b)));
            expans = std::max(expans, h2_norm_sq(f) - hb_norm_sq(f, spec));
        }
        out.add("delta_form_routes_agree", worst, 1e-9);
        out.add_bool("expansive", std::max(expans, 0.0), 1e-12, expans <= 1e-12);
    }
    {
        double shift = 0.0, reduce = 0.0;
        const Poly z = Poly::monomial(1);
        for (int k = 0; k < 8; ++k) {
            const RationalFn f = rrational(3, 2);
            for (std::size_t j = 0; j < spec.size(); ++j) {
                const cplx w = spec.w(j);
                const int m = spec.m(j);
                const cplx top = f.taylor_coeffs(w, static_cast<std::size_t>(m))[static_cast<std::size_t>(m - 1)];
                const double lhs = local_dirichlet(f.times(z), w, m) - local_dirichlet(f, w, m);
                shift = std::max(shift, std::abs(lhs - std::norm(top)) / (1.0 + std::norm(top)));
                for (int kk = 1; kk < m; ++kk) {
                    const double a = local_dirichlet(f.times(Poly::linear_power(w, static_cast<std::size_t>(kk))), w, m);
                    const double b = local_dirichlet(f, w, m - kk);
                    reduce = std::max(reduce, std::abs(a - b) / (1.0 + b));
                }
            }
        }
        out.add("dirichlet_shift_recurrence", shift, 1e-9);
        out.add("dirichlet_order_reduction", reduce, 1e-9);
    }
    {
        const Poly g = rpoly(6);
        const double want = hb_norm_sq(RationalFn::polynomial(g), spec) - h2_norm_sq(RationalFn::polynomial(g));
        const double got = defect_quadrature(g, spec, opt.samples);
        out.add("quadrature_identity", std::abs(got - want) / (1.0 + want), 1e-6);
    }
    {
        double worst = 0.0;
        const Poly z = Poly::monomial(1);
        for (int k = 0; k < 4; ++k) {
            const RationalFn f = k % 2 ? rrational(2, 1) : RationalFn::polynomial(rpoly(4));
            for (int M = 1; M <= 6; ++M) {
                const double lhs = beta_form(spec, M + 1, f);
                const double rhs = beta_form(spec, M, f.times(z)) - beta_form(spec, M, f);
                worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + hb_norm_sq(f, spec)));
            }
        }
        out.add("beta_form_telescoping", worst, 1e-9);
    }
    if (p.B.rank() > 0) {
        const std::vector<cplx> b_half = p.B(0.5);
        std::vector<cplx> alpha;
        for (const cplx& v : b_half) alpha.push_back(0.3 * v);
        const SchurFunction C = mobius_normalize(p.B, alpha);
        const SchurFunction back = mobius_normalize(C, alpha);
        double alpha2 = 0.0;
        for (const cplx& v : alpha) alpha2 += std::norm(v);
        double ident = 0.0, invol = 0.0;
        for (int k = 0; k < 32; ++k) {
            const cplx z = rdisc(0.9), w = rdisc(0.9);
            const std::vector<cplx> bz = p.B(z), bw = p.B(w);
            cplx ba = 0.0, ab = 0.0;
            for (std::size_t i = 0; i < alpha.size(); ++i) {
                ba += bz[i] * std::conj(alpha[i]);
                ab += alpha[i] * std::conj(bw[i]);
            }
            const cplx lhs = C.kernel(w, z) * (1.0 - ba) * (1.0 - ab);
            ident = std::max(ident, std::abs(lhs - (1.0 - alpha2) * p.B.kernel(w, z)));
            const std::vector<cplx> bb = back(z);
            for (std::size_t i = 0; i < bz.size(); ++i) invol = std::max(invol, std::abs(bb[i] - bz[i]));
        }
        out.add("mobius_kernel_identity", ident, tol);
        out.add("mobius_involution", invol, tol);
        out.add("mobius_mate_identity", C.mate_identity_residual(256), tol);
    } else {
        out.skip("mobius_kernel_identity", tol);
        out.skip("mobius_involution", tol);
        out.skip("mobius_mate_identity", tol);
    }
}

inline Report make_report(const Pipeline& p, bool verify, const Options& opt) {
    Report r;
    r.spec = p.input;
    r.mate = p.km.mate;
    r.F = p.km.F;
    r.F_inv = p.km.F_inv;
    r.dual = p.km.dual;
    r.kernel = p.km.kernel;
    r.schur = p.B.components;
    r.rank = p.B.rank();
    r.phase_convention = kPhaseConvention;
    r.char_A = p.op.char_A;
    r.char_L = p.op.char_L;
    r.strict_order = p.order.strict_order;
    if (!r.strict_order) {
        r.strict_label = "not detected up to order " + std::to_string(p.max_order);
        r.warnings.push_back("NotDetected: no isometry order up to " + std::to_string(p.max_order));
    } else if (*r.strict_order == 1) {
        r.strict_label = "isometry";
    } else {
        r.strict_label = "strict " + std::to_string(*r.strict_order) + "-isometry";
    }
    detail::CheckList checks;
    construct_checks(p, opt, checks);
    if (verify) verify_checks(p, opt, checks);
    r.checks = std::move(checks.list);
    for (const std::string& w : p.warnings) r.warnings.push_back(w);
    return r;
}

inline Report run_construct(const SpaceSpec& spec, const Options& opt = {}) {
    return make_report(run_pipeline(spec, opt), false, opt);
}

inline Report run_verify(const SpaceSpec& spec, const Options& opt = {}) {
    return make_report(run_pipeline(spec, opt), true, opt);
}

inline json to_json(const Check& c) {
    json j = {{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}};
    if (c.skipped) j["skipped"] = true;
    return j;
}

inline json to_json(const Report& r) {
    json checks = json::array();
    for (const Check& c : r.checks) checks.push_back(to_json(c));
    json schur = {{"components", to_json(r.schur)}, {"rank", r.rank}, {"phase_convention", r.phase_convention}};
    json j = {{"spec", to_json(r.spec)},
              {"mate", to_json(r.mate)},
              {"grammian", to_json(r.F)},
              {"grammian_inverse", to_json(r.F_inv)},
              {"dual_basis", to_json(r.dual)},
              {"kernel_basis", to_json(r.kernel)},
              {"schur", std::move(schur)},
              {"char_A", to_json(r.char_A)},
              {"char_L", to_json(r.char_L)},
              {"strict_order", r.strict_order ? json(*r.strict_order) : json(nullptr)},
              {"strict_order_label", r.strict_label},
              {"checks", std::move(checks)},
              {"warnings", r.warnings},
              {"pass", r.pass()}};
    return j;
}

inline Report report_from_json(const json& j) {
    Report r;
    r.spec = spec_from_json(j.at("spec"));
    r.mate = mate_from_json(j.at("mate"));
    r.F = matrix_from_json(j.at("grammian"));
    r.F_inv = matrix_from_json(j.at("grammian_inverse"));
    r.dual = rationals_from_json(j.at("dual_basis"));
    r.kernel = rationals_from_json(j.at("kernel_basis"));
    const json& s = j.at("schur");
    r.schur = rationals_from_json(s.at("components"));
    r.rank = s.at("rank").get<std::size_t>();
    r.phase_convention = s.at("phase_convention").get<std::string>();
    r.char_A = poly_from_json(j.at("char_A"));
    r.char_L = poly_from_json(j.at("char_L"));
    if (!j.at("strict_order").is_null()) r.strict_order = j.at("strict_order").get<int>();
    r.strict_label = j.at("strict_order_label").get<std::string>();
    for (const json& c : j.at("checks"))
        r.checks.push_back({c.at("name").get<std::string>(), c.at("residual").get<double>(), c.at("tolerance").get<double>(),
                            c.at("pass").get<bool>(), c.value("skipped", false)});
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
}

}  // namespace dbr

#endif  // DBR_REPORT_HPP
