#include "fwopt/constraint.hpp"
#include "fwopt/errors.hpp"
#include "fwopt/linalg.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace fwopt;

namespace {

// Random point of the ball, independent of the library's LMO.
ParamPoint random_feasible(const ConstraintSet& set, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = set.radius();
    switch (set.kind()) {
    case BallKind::linf: {
        DenseVector v(set.shape().rows);
        for (double& x : v.values()) {
            x = r * (2.0 * unit(rng) - 1.0);
        }
        return v;
    }
    case BallKind::l2: {
        DenseVector v = oracle::gaussian_vector(set.shape().rows, rng);
        double n = 0.0;
        for (double x : v.values()) {
            n += x * x;
        }
        const double scale = r * unit(rng) / std::sqrt(n);
        for (double& x : v.values()) {
            x *= scale;
        }
        return v;
    }
    case BallKind::spectral: {
        const std::size_t m = set.shape().rows;
        const std::size_t n = set.shape().cols;
        const std::size_t k = std::min(m, n);
        const DenseMatrix u = oracle::random_semi_orthogonal(m, k, rng);
        const DenseMatrix v = oracle::random_semi_orthogonal(n, k, rng);
        std::vector<double> s(k);
        for (double& x : s) {
            x = r * unit(rng);
        }
        return oracle::naive_product(oracle::naive_product(u, DenseMatrix::diagonal(s, k, k)), oracle::naive_transpose(v));
    }
    }
    return {};
}

std::vector<ConstraintSet> all_kinds() {
    return {ConstraintSet::linf_ball(1.5, 8), ConstraintSet::l2_ball(0.7, 8), ConstraintSet::spectral_ball(2.0, 4, 6),
            ConstraintSet::spectral_ball(0.5, 5, 3)};
}

} // namespace

TEST(ConstraintSet, Validation) {
    EXPECT_THROW(ConstraintSet::linf_ball(0.0, 3), Error);
    EXPECT_THROW(ConstraintSet::l2_ball(-1.0, 3), Error);
    EXPECT_THROW(ConstraintSet(BallKind::spectral, 1.0, Shape::vector(3)), Error);
    EXPECT_THROW(ConstraintSet(BallKind::linf, 1.0, Shape::matrix_of(2, 2)), Error);
}

TEST(Lmo, Examples) {
    EXPECT_EQ(lmo(ConstraintSet::linf_ball(2, 3), DenseVector{1, -3, 0}), ParamPoint(DenseVector{-2, 2, 0}));
    const ParamPoint u = lmo(ConstraintSet::spectral_ball(1, 2, 2), DenseMatrix::diagonal({3, 1}));
    EXPECT_LT(oracle::frobenius_distance(u.matrix(), DenseMatrix::diagonal({-1, -1})), 1e-15);
    EXPECT_LT(max_abs_diff(lmo(ConstraintSet::l2_ball(2, 2), DenseVector{3, -4}), DenseVector{-1.2, 1.6}), 1e-15);
}

TEST(Lmo, ZeroGradientMapsToOrigin) {
    for (const auto& set : all_kinds()) {
        const ParamPoint zero = ParamPoint::zeros(set.shape());
        EXPECT_EQ(lmo(set, zero), zero);
    }
}

TEST(Lmo, ShapeMismatchThrows) {
    EXPECT_THROW(lmo(ConstraintSet::linf_ball(1, 3), DenseVector{1, 2}), DimensionError);
    EXPECT_THROW(lmo(ConstraintSet::spectral_ball(1, 2, 3), DenseMatrix(3, 2)), DimensionError);
    EXPECT_THROW(lmo(ConstraintSet::l2_ball(1, 4), DenseMatrix(2, 2)), DimensionError);
}

TEST(Lmo, LinfBeatsFeasibleSamples) {
    std::mt19937_64 rng(1);
    const auto set = ConstraintSet::linf_ball(1, 8);
    const ParamPoint g = oracle::gaussian_vector(8, rng);
    const double best = inner(lmo(set, g), g);
    for (int k = 0; k < 10000; ++k) {
        ASSERT_LE(best, inner(random_feasible(set, rng), g));
    }
}

TEST(Lmo, OptimalValueAndFeasibilityForEveryKind) {
    std::mt19937_64 rng(2);
    for (const auto& set : all_kinds()) {
        SCOPED_TRACE(to_string(set.kind()));
        for (int k = 0; k < 100; ++k) {
            const ParamPoint g = oracle::gaussian_like(set.shape(), rng);
            const ParamPoint u = lmo(set, g);
            const double target = -set.radius() * dual_norm(set, g);
            EXPECT_NEAR(inner(u, g), target, 1e-9 * std::abs(target));
            EXPECT_TRUE(contains(set, u, 1e-12));
        }
        const ParamPoint g = oracle::gaussian_like(set.shape(), rng);
        const double best = inner(lmo(set, g), g);
        for (int k = 0; k < 10000; ++k) {
            ASSERT_LE(best, inner(random_feasible(set, rng), g) + 1e-12);
        }
    }
}

TEST(Diameter, Examples) {
    EXPECT_EQ(diameter(ConstraintSet::l2_ball(3, 5)), 6.0);
    EXPECT_EQ(diameter(ConstraintSet::linf_ball(1, 4)), 4.0);
    EXPECT_NEAR(diameter(ConstraintSet::spectral_ball(1, 2, 5)), 2.0 * std::sqrt(2.0), 1e-15);
}

TEST(Diameter, SpectralBallBySampling) {
    std::mt19937_64 rng(3);
    const auto set = ConstraintSet::spectral_ball(1, 2, 5);
    const double d = diameter(set);
    double widest = 0.0;
    for (int k = 0; k < 2000; ++k) {
        const ParamPoint a = random_feasible(set, rng);
        const ParamPoint b = random_feasible(set, rng);
        ASSERT_LE(norm(a - b, NormKind::frobenius), d + 1e-12);
        // Antipodal semi-orthogonal pairs attain the bound.
        const DenseMatrix q = oracle::random_semi_orthogonal(2, 5, rng);
        widest = std::max(widest, norm(ParamPoint(q) - ParamPoint(-1.0 * ParamPoint(q)), NormKind::frobenius));
    }
    EXPECT_NEAR(widest, d, 1e-12);
}

TEST(DualNorm, Examples) {
    EXPECT_EQ(dual_norm(ConstraintSet::linf_ball(1, 3), DenseVector{1, -2, 3}), 6.0);
    EXPECT_NEAR(dual_norm(ConstraintSet::spectral_ball(1, 2, 2), DenseMatrix::diagonal({2, 1})), 3.0, 1e-15);
    EXPECT_EQ(dual_norm(ConstraintSet::l2_ball(1, 2), DenseVector{3, 4}), 5.0);
    for (const auto& set : all_kinds()) {
        EXPECT_EQ(dual_norm(set, ParamPoint::zeros(set.shape())), 0.0);
    }
    EXPECT_THROW(dual_norm(ConstraintSet::linf_ball(1, 3), DenseVector{1, 2}), DimensionError);
}

TEST(FwGap, IsotropicQuadraticOnLinfBall) {
    std::mt19937_64 rng(4);
    for (double r : {0.5, 1.0, 3.0}) {
        const auto set = ConstraintSet::linf_ball(r, 6);
        const ParamPoint x = random_feasible(set, rng);
        double l1 = 0.0;
        double l2sq = 0.0;
        for (double v : x.values()) {
            l1 += std::abs(v);
            l2sq += v * v;
        }
        const GapReport rep = fw_gap(set, x, x);
        EXPECT_NEAR(rep.gap, r * l1 + l2sq, 1e-12 * (1 + r * l1));
        // Direct maximization of <v - x, -grad> over feasible samples never exceeds the gap.
        double sampled = -INFINITY;
        for (int k = 0; k < 10000; ++k) {
            const ParamPoint v = random_feasible(set, rng);
            sampled = std::max(sampled, -inner(v - x, x));
        }
        EXPECT_LE(sampled, rep.gap + 1e-12);
        EXPECT_GT(sampled, 0.5 * rep.gap);
    }
}

TEST(FwGap, OriginAndStationary) {
    std::mt19937_64 rng(5);
    for (const auto& set : all_kinds()) {
        const ParamPoint g = oracle::gaussian_like(set.shape(), rng);
        const ParamPoint zero = ParamPoint::zeros(set.shape());
        EXPECT_NEAR(fw_gap(set, zero, g).gap, set.radius() * dual_norm(set, g), 1e-15);
        const ParamPoint x = random_feasible(set, rng);
        const GapReport rep = fw_gap(set, x, zero);
        EXPECT_EQ(rep.gap, 0.0);
        EXPECT_EQ(rep.kkt_residual, 0.0);
    }
}

TEST(FwGap, ClosedFormMatchesLmoPoint) {
    std::mt19937_64 rng(6);
    for (const auto& set : all_kinds()) {
        for (int k = 0; k < 100; ++k) {
            const ParamPoint x = random_feasible(set, rng);
            const ParamPoint g = oracle::gaussian_like(set.shape(), rng);
            const GapReport rep = fw_gap(set, x, g);
            EXPECT_NEAR(rep.gap, -inner(rep.lmo_point - x, g), 1e-10);
            EXPECT_GE(rep.gap, -1e-10);
            EXPECT_NEAR(rep.kkt_residual, rep.gap / set.radius(), 1e-10);
            EXPECT_EQ(rep.dual_norm, dual_norm(set, g));
        }
    }
}

TEST(FwGap, InfeasiblePointThrows) {
    const auto set = ConstraintSet::linf_ball(1, 2);
    EXPECT_THROW(fw_gap(set, DenseVector{1.0 + 1e-6, 0}, DenseVector{1, 1}), FeasibilityError);
    EXPECT_NO_THROW(fw_gap(set, DenseVector{1.0 + 1e-12, 0}, DenseVector{1, 1}));
    EXPECT_THROW(fw_gap(set, DenseVector{1, 0, 0}, DenseVector{1, 1}), DimensionError);
}

TEST(FwGap, KktEquivalenceOnLinearObjective) {
    // F(x) = <c, x> has constant gradient c; its minimizer over the l-inf
    // ball is x = -r sign(c).
    std::mt19937_64 rng(7);
    const double r = 2.0;
    const auto set = ConstraintSet::linf_ball(r, 10);
    for (int k = 0; k < 50; ++k) {
        const DenseVector c = oracle::gaussian_vector(10, rng);
        DenseVector star(10);
        for (std::size_t i = 0; i < 10; ++i) {
            star[i] = c[i] > 0 ? -r : r;
        }
        const GapReport at_star = fw_gap(set, star, c);
        EXPECT_NEAR(at_star.gap, 0.0, 1e-9);
        EXPECT_NEAR(at_star.kkt_residual, 0.0, 1e-9);

        DenseVector moved = star;
        moved[k % 10] *= 0.5;
        const GapReport off = fw_gap(set, moved, c);
        EXPECT_GT(off.gap, 1e-9);
        EXPECT_GT(off.kkt_residual, 1e-9);
    }
    // Interior stationary point of 0.5 ||x||^2 on the spectral ball.
    const auto spec = ConstraintSet::spectral_ball(1, 3, 3);
    const GapReport origin = fw_gap(spec, DenseMatrix(3, 3), DenseMatrix(3, 3));
    EXPECT_EQ(origin.gap, 0.0);
    EXPECT_EQ(origin.kkt_residual, 0.0);
}

TEST(Contains, Examples) {
    EXPECT_TRUE(contains(ConstraintSet::linf_ball(1, 2), DenseVector{1, -1}, 0.0));
    EXPECT_FALSE(contains(ConstraintSet::l2_ball(1, 2), DenseVector{1, 1}, 0.0));
    EXPECT_TRUE(contains(ConstraintSet::spectral_ball(2, 2, 2), DenseMatrix::diagonal({2 + 1e-12, 0}), 1e-9));
    EXPECT_FALSE(contains(ConstraintSet::spectral_ball(2, 2, 2), DenseMatrix::diagonal({2 + 1e-6, 0}), 1e-9));
}

TEST(ScaleInto, ProjectsRadially) {
    const auto set = ConstraintSet::linf_ball(1, 2);
    EXPECT_EQ(scale_into(set, DenseVector{4, -2}), ParamPoint(DenseVector{1, -0.5}));
    EXPECT_EQ(scale_into(set, DenseVector{0.5, -0.2}), ParamPoint(DenseVector{0.5, -0.2}));
    std::mt19937_64 rng(8);
    const auto spec = ConstraintSet::spectral_ball(0.3, 4, 5);
    for (int k = 0; k < 20; ++k) {
        EXPECT_TRUE(contains(spec, scale_into(spec, oracle::gaussian_matrix(4, 5, rng)), 1e-12));
    }
}
