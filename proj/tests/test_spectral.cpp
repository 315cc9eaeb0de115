#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dbr/roots.hpp"
#include "dbr/spectral.hpp"
#include "test_support.hpp"

using namespace dbr;
using namespace dbr::testing;

namespace {

// q equals want up to a unimodular constant.
double unimodular_distance(const Poly& q, const Poly& want) {
    const cplx ratio = q.leading() / want.leading();
    const cplx phase = ratio / std::abs(ratio);
    return max_coeff_diff(q, want * phase) / want.max_abs();
}

double max_rel_diff(const RationalFn& f, const RationalFn& g) {
    double worst = 0.0;
    for (int k = 0; k < 64; ++k) {
        const cplx z = std::polar(0.95 * std::sqrt((k + 0.5) / 64.0), 2.4 * k);
        worst = std::max(worst, std::abs(f(z) - g(z)) / std::max(std::abs(g(z)), 1e-300));
    }
    return worst;
}

}  // namespace

TEST(FejerRiesz, ExampleFactor) {
    const SpectralFactor f = fejer_riesz(TrigPoly({17.0 / 4.0, 0.0, -1.0}));
    EXPECT_LT(unimodular_distance(f.q, Poly{-2.0, 0.0, 0.5}), 1e-12);
    EXPECT_TRUE(f.warnings.empty());
}

TEST(FejerRiesz, Constant) {
    const SpectralFactor f = fejer_riesz(TrigPoly({4.0}));
    EXPECT_LT(unimodular_distance(f.q, Poly{2.0}), 1e-15);
}

TEST(FejerRiesz, RoundTripKnownFactor) {
    const Poly q0{1.0, 0.5};
    const SpectralFactor f = fejer_riesz(TrigPoly::from_modulus_squared(q0));
    EXPECT_LT(unimodular_distance(f.q, q0), 1e-12);
}

TEST(FejerRiesz, RandomInputsPlusEpsilon) {
    Rng rng(11);
    for (int t = 0; t < 40; ++t) {
        const Poly q0 = random_poly(rng, 1 + t % 6);
        TrigPoly r = TrigPoly::from_modulus_squared(q0) + TrigPoly({0.05});
        const SpectralFactor f = fejer_riesz(r);
        EXPECT_EQ(f.q.degree(), r.order());
        double hi = 0.0;
        for (const cplx& z : circle_points(512)) hi = std::max(hi, r(z));
        for (const cplx& z : circle_points(512)) EXPECT_LT(std::abs(std::norm(f.q(z)) - r(z)), 1e-9 * hi);
        for (const cplx& root : poly_roots(f.q)) EXPECT_GT(std::abs(root), 1.0);
    }
}

TEST(FejerRiesz, LiftedRootsComeInReflectedPairs) {
    Rng rng(12);
    const Poly q0 = Poly::from_roots({cplx(1.5, 0.3), cplx(-0.2, 2.5), cplx(0.0, -1.2)}, 0.7);
    const auto roots = poly_roots(TrigPoly::from_modulus_squared(q0).lifted());
    for (const cplx& r : roots) {
        double best = 1e9;
        for (const cplx& s : roots) best = std::min(best, std::abs(s - 1.0 / std::conj(r)));
        EXPECT_LT(best, 1e-6);
    }
}

TEST(FejerRiesz, DegenerateThrows) {
    // |1 - z|^2 vanishes at z = 1.
    try {
        fejer_riesz(TrigPoly::from_modulus_squared(Poly{1.0, -1.0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateFactorization);
    }
}

TEST(FejerRiesz, NearDegenerateWarns) {
    const TrigPoly r = TrigPoly::from_modulus_squared(Poly{1.0, -1.0}) + TrigPoly({1e-10});
    const SpectralFactor f = fejer_riesz(r);
    ASSERT_FALSE(f.warnings.empty());
    EXPECT_NE(f.warnings[0].find("AccuracyWarning"), std::string::npos);
}

TEST(Mate, Example) {
    const MateResult m = mate_from_spec(symmetric_pair_spec());
    EXPECT_LT(max_coeff_diff(m.p_A, Poly{-1.0, 0.0, 1.0}), 1e-15);
    EXPECT_LT(max_coeff_diff(m.q, Poly{-2.0, 0.0, 0.5}), 1e-12);
    const RationalFn want(Poly{-2.0, 0.0, 2.0}, Poly{-4.0, 0.0, 1.0});
    EXPECT_LT(max_rel_diff(m.a, want), 1e-12);
}

TEST(Mate, EmptySpec) {
    const MateResult m = mate_from_spec(SpaceSpec{});
    EXPECT_EQ(m.p_A, Poly{1.0});
    EXPECT_LT(max_coeff_diff(m.q, Poly{1.0}), 1e-15);
    EXPECT_NEAR(std::abs(m.a(0.3) - 1.0), 0.0, 1e-15);
}

TEST(Mate, SinglePointHalfWeight) {
    const SpaceSpec spec({SpacePoint{0.0, 1, {Poly{1.0 / std::sqrt(2.0)}}}});
    const MateResult m = mate_from_spec(spec);
    const RationalFn want(Poly{1.0, -1.0}, Poly{std::sqrt(2.0), -std::sqrt(2.0) / 2.0});
    EXPECT_LT(max_rel_diff(m.a, want), 1e-12);
    for (const cplx& z : circle_points(64)) EXPECT_NEAR(std::norm(m.q(z)), std::norm(m.p_A(z)) + 0.5, 1e-12);
}

TEST(Mate, InvariantsOnRandomSpecs) {
    Rng rng(13);
    for (int t = 0; t < 15; ++t) {
        const SpaceSpec spec = random_spec(rng, 1 + t % 3, 3);
        const MateResult m = mate_from_spec(spec);
        const cplx a0 = m.a(0.0);
        EXPECT_GT(a0.real(), 0.0);
        EXPECT_LT(std::abs(a0.imag()), 1e-12);
        const TrigPoly r = mate_modulus(spec);
        for (const cplx& z : circle_points(256)) {
            EXPECT_LE(std::abs(m.a(z)), 1.0 + 1e-10);
            EXPECT_NEAR(std::norm(m.a(z)) + (r(z) - std::norm(m.p_A(z))) / std::norm(m.q(z)), 1.0, 1e-9);
        }
    }
}

TEST(Mate, UnimodularWeightScalingLeavesMateUnchanged) {
    Rng rng(14);
    const SpaceSpec spec = random_spec(rng, 2, 2);
    std::vector<SpacePoint> rotated = spec.points();
    const cplx u = std::polar(1.0, 1.1);
    for (auto& p : rotated)
        for (auto& w : p.weights) w = w * u;
    const MateResult a = mate_from_spec(spec), b = mate_from_spec(SpaceSpec(rotated));
    EXPECT_LT(max_coeff_diff(a.q, b.q), 1e-10);
    EXPECT_LT(max_rel_diff(a.a, b.a), 1e-10);
}

TEST(Mate, NonStrictPointNamed) {
    const SpaceSpec spec({SpacePoint{0.0, 2, {Poly{-1.0, 1.0}}}});
    try {
        mate_from_spec(spec);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateFactorization);
        EXPECT_NE(std::string(e.what()).find("point 0"), std::string::npos);
    }
}

TEST(RankOne, Example) {
    const RankOneMate r = mate_rank_one(1.0, 1, Poly{0.0, 1.0 / std::sqrt(2.0)});
    const RationalFn b_want(Poly{0.0, 1.0}, Poly{2.0, -1.0});
    const RationalFn a_want(Poly{1.0, -1.0}, Poly{std::sqrt(2.0), -std::sqrt(2.0) / 2.0});
    for (const cplx& z : {cplx(0.1, 0.2), cplx(-0.6, 0.3), cplx(0.5, -0.5)}) {
        EXPECT_NEAR(std::abs(r.b(z)) , std::abs(b_want(z)), 1e-12);
        EXPECT_NEAR(std::abs(r.a(z) - a_want(z)), 0.0, 1e-12);
    }
    for (const cplx& z : circle_points(256)) EXPECT_NEAR(std::norm(r.b(z)) + std::norm(r.a(z)), 1.0, 1e-9);
}

TEST(RankOne, WeightFromOneParameterFamily) {
    // b = z/(2 - z): the norm weight (1 - r)^2 / r at r = 1/2 is 1/2, so p = z/sqrt(2) up to phase.
    const double r = 0.5;
    const double weight = (1.0 - r) * (1.0 - r) / r;
    EXPECT_NEAR(weight, 0.5, 1e-15);
    const RankOneMate m = mate_rank_one(1.0, 1, Poly{0.0, std::sqrt(weight)});
    for (const cplx& z : {cplx(0.2, 0.1), cplx(-0.4, 0.7)}) EXPECT_NEAR(std::abs(m.b(z)), std::abs(z / (2.0 - z)), 1e-12);
}

TEST(RankOne, RotationCovariance) {
    Rng rng(15);
    for (int m = 1; m <= 3; ++m) {
        Poly p = random_poly(rng, m, 0.7);
        p = p - Poly::constant(p(0.0));
        const cplx w = unit_from_angle(0.9);
        const RankOneMate base = mate_rank_one(1.0, m, p);
        // p_w(z) = p(conj(w) z) puts the weight's value at w where p had it at 1.
        std::vector<cplx> c = p.coeffs();
        for (std::size_t k = 0; k < c.size(); ++k) c[k] *= std::pow(std::conj(w), static_cast<double>(k));
        const RankOneMate rot = mate_rank_one(w, m, Poly(c));
        EXPECT_NEAR(rot.a(0.0).real(), base.a(0.0).real(), 1e-10);
        for (const cplx& z : {cplx(0.3, 0.1), cplx(-0.2, -0.5)})
            EXPECT_NEAR(std::abs(rot.a(w * z)), std::abs(base.a(z)), 1e-10);
    }
}

TEST(RankOne, Errors) {
    auto kind_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::NotDetected;
    };
    EXPECT_EQ(kind_of([] { mate_rank_one(1.0, 1, Poly{0.0, -1.0, 1.0}); }), ErrorKind::InvalidDegree);
    EXPECT_EQ(kind_of([] { mate_rank_one(1.0, 1, Poly{0.0, 0.0, 0.0, 1.0}); }), ErrorKind::InvalidDegree);
    EXPECT_EQ(kind_of([] { mate_rank_one(1.0, 2, Poly{0.0, -1.0, 1.0}); }), ErrorKind::NotStrict);
    EXPECT_EQ(kind_of([] { mate_rank_one(1.0, 1, Poly{0.5, 1.0}); }), ErrorKind::InvalidSpec);
}

TEST(CharPolys, Examples) {
    const RationalFn a = mate_from_char_polys(Poly{-1.0, 0.0, 1.0}, Poly{-0.25, 0.0, 1.0}, 0.5);
    EXPECT_LT(max_rel_diff(a, RationalFn(Poly{-2.0, 0.0, 2.0}, Poly{-4.0, 0.0, 1.0})), 1e-14);
    EXPECT_EQ(a(0.0), cplx(0.5));

    const Poly p{0.3, cplx(0.1, 0.2), 1.0};
    const RationalFn one = mate_from_char_polys(p, p, 1.0);
    EXPECT_NEAR(std::abs(one(cplx(0.4, 0.2)) - 1.0), 0.0, 1e-14);

    const RationalFn r = mate_from_char_polys(Poly{-1.0, 1.0}, Poly{-0.5, 1.0}, 1.0 / std::sqrt(2.0));
    const RankOneMate ro = mate_rank_one(1.0, 1, Poly{0.0, 1.0 / std::sqrt(2.0)});
    EXPECT_LT(max_rel_diff(r, ro.a), 1e-12);
}

TEST(CharPolys, InvalidSpectrum) {
    auto kind_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::NotDetected;
    };
    EXPECT_EQ(kind_of([] { mate_from_char_polys(Poly{-2.0, 1.0}, Poly{-0.5, 1.0}, 1.0); }), ErrorKind::InvalidSpectrum);
    EXPECT_EQ(kind_of([] { mate_from_char_polys(Poly{-1.0, 1.0}, Poly{-1.0, 1.0}, 1.0); }), ErrorKind::InvalidSpectrum);
    EXPECT_EQ(kind_of([] { mate_from_char_polys(Poly{-1.0, 1.0}, Poly{-0.5, 1.0}, -1.0); }), ErrorKind::InvalidSpectrum);
}

TEST(CharPolys, RoundTripFromRandomMate) {
    Rng rng(16);
    for (int t = 0; t < 10; ++t) {
        const SpaceSpec spec = random_spec(rng, 1 + t % 3, 2);
        const MateResult m = mate_from_spec(spec);
        // Roots of q outside the disc, so q's reciprocal roots lie inside.
        std::vector<cplx> alphas;
        for (const cplx& r : poly_roots(m.q)) alphas.push_back(1.0 / r);
        // On the circle conj(w) = 1/w, so prod (1 - conj(w) z) is p_A up to a constant.
        std::vector<cplx> ws;
        for (std::size_t j = 0; j < spec.size(); ++j)
            for (int k = 0; k < spec.m(j); ++k) ws.push_back(std::conj(spec.w(j)));
        const RationalFn rebuilt = mate_from_char_polys(Poly::from_roots(ws), Poly::from_roots(alphas), m.a(0.0).real());
        EXPECT_LT(max_rel_diff(rebuilt, m.a), 1e-8);
    }
}
