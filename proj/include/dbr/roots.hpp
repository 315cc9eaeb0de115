#ifndef DBR_ROOTS_HPP
#define DBR_ROOTS_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"

namespace dbr {

namespace detail {

// Parlett-Reinsch diagonal similarity balancing.
inline void balance(Eigen::MatrixXcd& a) {
    const Eigen::Index n = a.rows();
    constexpr double radix = 2.0;
    bool converged = false;
    while (!converged) {
        converged = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix, f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= radix * radix;
            }
            if ((c + r) / f < 0.95 * s) {
                converged = false;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

}  // namespace detail

/// Roots of p as a multiset (repeated roots appear repeatedly).
/// Balanced companion matrix, complex QR eigenvalues, then a Newton polish that is only kept when it helps.
inline std::vector<cplx> poly_roots(const Poly& p) {
    if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "poly_roots of the zero polynomial");
    std::vector<cplx> roots;
    const auto& c = p.coeffs();
    std::size_t low = 0;
    while (low < c.size() && c[low] == cplx{}) {
        roots.push_back(0.0);
        ++low;
    }
    const int n = p.degree() - static_cast<int>(low);
    if (n <= 0) return roots;

    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    const cplx lead = c.back();
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[low + static_cast<std::size_t>(i)] / lead;
    detail::balance(comp);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, /*computeEigenvectors=*/false);
    const Poly dp = p.derivative();
    for (int i = 0; i < n; ++i) {
        cplx r = solver.eigenvalues()(i);
        double res = std::abs(p(r));
        for (int it = 0; it < 3 && res > 0.0; ++it) {
            const cplx d = dp(r);
            if (d == cplx{}) break;
            const cplx cand = r - p(r) / d;
            const double cand_res = std::abs(p(cand));
            if (!(cand_res < res)) break;
            r = cand;
            res = cand_res;
        }
        roots.push_back(r);
    }
    return roots;
}

struct RootCluster {
    cplx value;
    int multiplicity;
};

/// Groups roots closer than `tol` (transitively) and reports each group's mean and size.
inline std::vector<RootCluster> cluster_roots(const std::vector<cplx>& roots, double tol = 1e-7) {
    std::vector<int> label(roots.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (label[i] >= 0) continue;
        label[i] = next;
        std::vector<std::size_t> stack{i};
        while (!stack.empty()) {
            const std::size_t a = stack.back();
            stack.pop_back();
            for (std::size_t b = 0; b < roots.size(); ++b)
                if (label[b] < 0 && std::abs(roots[a] - roots[b]) < tol) {
                    label[b] = next;
                    stack.push_back(b);
                }
        }
        ++next;
    }
    std::vector<RootCluster> out(static_cast<std::size_t>(next), RootCluster{0.0, 0});
    for (std::size_t i = 0; i < roots.size(); ++i) {
        auto& cl = out[static_cast<std::size_t>(label[i])];
        cl.value += roots[i];
        ++cl.multiplicity;
    }
    for (auto& cl : out) cl.value /= static_cast<double>(cl.multiplicity);
    return out;
}

}  // namespace dbr

#endif  // DBR_ROOTS_HPP
