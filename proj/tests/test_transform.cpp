#include <gtest/gtest.h>

#include "support.hpp"
#include "topsing/invariants.hpp"
#include "topsing/transform.hpp"

using namespace topsing;
using topsing::testing::P;
using topsing::testing::random_polynomial;

namespace {

bool agree_below(const SparseSeries& a, const SparseSeries& b, Precision p) {
  return a.truncated(p).with_precision(p) == b.truncated(p).with_precision(p);
}

SparseSeries lift_tail(const SparseSeries& s, std::size_t n) {
  std::vector<std::size_t> pos;
  for (std::size_t i = 1; i < n; ++i) pos.push_back(i);
  return s.relabeled(n, pos);
}

}  // namespace

TEST(CoordinateChange, ComposesInApplicationOrder) {
  SeededRng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_linear_change(3, rng);
    auto b = random_linear_change(3, rng);
    auto f = random_polynomial(rng, 3, 4, 6);
    EXPECT_EQ(apply_change(f, a.then(b)), apply_change(apply_change(f, a), b));
  }
}

TEST(CoordinateChange, LinearInverseRoundTrips) {
  SeededRng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = random_linear_change(3, rng);
    auto f = random_polynomial(rng, 3, 5, 6);
    EXPECT_EQ(apply_change(apply_change(f, c), c.inverse()), f);
  }
}

TEST(CoordinateChange, NonlinearInverseRoundTripsBelowPrecision) {
  Precision p(10);
  std::vector<SparseSeries> images{P("x1 + x2^2", 2), P("x2 + x1*x2 - x1^3", 2)};
  auto c = CoordinateChange::from_images(images, Precision::infinite());
  auto inv = c.inverse(p);
  auto f = P("x1^3 + x1*x2 - 2*x2^4", 2);
  auto back = apply_change(apply_change(f, c).with_precision(p), inv);
  EXPECT_TRUE(agree_below(back, f, p));
}

TEST(CoordinateChange, RejectsSingularLinearParts) {
  Matrix m{{Rational(1), Rational(2)}, {Rational(2), Rational(4)}};
  EXPECT_THROW(CoordinateChange::linear_change(m), UsageError);
}

TEST(Split, NodeHasNoResidual) {
  auto s = split_quadratic(P("x1*x2", 2), 2, Precision(12));
  EXPECT_TRUE(s.g.is_zero());
  ASSERT_EQ(s.lambda.size(), 2u);
  for (const auto& l : s.lambda) EXPECT_NE(l, 0);
  EXPECT_EQ(s.normal_form.size(), 2u);
}

TEST(Split, NormalFormShapeAndChangeAgree) {
  SeededRng rng(8);
  Precision p(10);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = random_linear_change(3, rng);
    auto f = apply_change(P("x1^2 + x2^3 + x2*x3^3 + x1*x2*x3", 3), c);
    auto s = split_quadratic(f, 1, p);
    ASSERT_EQ(s.lambda.size(), 1u);
    // normal form = lambda * x1^2 + g(x2, x3)
    auto expected = s.lambda[0] * SparseSeries::monomial(3, Monomial{2, 0, 0}, Rational(1)) + lift_tail(s.g, 3);
    EXPECT_TRUE(agree_below(s.normal_form, expected, s.g.precision()));
    EXPECT_TRUE(agree_below(apply_change(f, s.change), s.normal_form, s.g.precision()));
    EXPECT_TRUE(s.g.order().at_least_certainly(3));
  }
}

TEST(Split, RankMismatchIsAnInvariantViolation) {
  EXPECT_THROW(split_quadratic(P("x1^2 + x2^2", 2), 1, Precision(12)), InvariantViolation);
  EXPECT_THROW(split_quadratic(P("x1^3", 1), 1, Precision(12)), UsageError);
}

TEST(Split, AgreesAcrossPrecisions) {
  SeededRng rng(9);
  auto f = apply_change(P("x1^2 + x2^3 + x3^6", 3), random_linear_change(3, rng));
  auto lo = split_quadratic(f, 1, Precision(10));
  auto hi = split_quadratic(f, 1, Precision(16));
  EXPECT_TRUE(agree_below(lo.g, hi.g, Precision(10)));
}

TEST(Depress, ReferenceExamples) {
  auto c1 = depress_cubic(P("x1^3 + x2^4", 2), Precision(12));
  EXPECT_TRUE(c1.g3.is_zero());
  EXPECT_TRUE(c1.g4.agrees_with(P("x1^4", 1)));
  auto c2 = depress_cubic(P("x1^3 + x1*x2^3", 2), Precision(12));
  EXPECT_TRUE(c2.g3.agrees_with(P("x1^3", 1)));
  EXPECT_TRUE(c2.g4.is_zero());
}

TEST(Depress, ExactCubicPolynomialsStayExact) {
  auto c = depress_cubic(P("x1^3 + 3*x1^2*x2 + x2^5", 2), Precision(12));
  EXPECT_TRUE(c.g3.is_exact());
  EXPECT_TRUE(c.g4.is_exact());
  // z -> z - x2: z^3 + 3 z^2 x2 becomes z^3 - 3 z x2^2 + 2 x2^3
  EXPECT_EQ(c.g3, P("-3*x1^2", 1));
  EXPECT_EQ(c.g4, P("2*x1^3 + x1^5", 1));
}

TEST(Depress, NormalFormIdentityHoldsBelowPrecision) {
  SeededRng rng(10);
  for (int trial = 0; trial < 8; ++trial) {
    auto g = random_polynomial(rng, 3, 7, 12, 4) + P("x1^3 + x1*x2^2 - x2*x3^2", 3);
    Precision p(11);
    auto c = depress_cubic(g.with_precision(p), p);
    auto lhs = apply_change(g.with_precision(p), c.change);
    auto z = SparseSeries::variable(3, 0);
    auto rhs = c.unit * (z * z * z + z * lift_tail(c.g3, 3) + lift_tail(c.g4, 3));
    Precision q = min(lhs.precision(), rhs.precision());
    EXPECT_TRUE(agree_below(lhs, rhs, q)) << "trial " << trial;
  }
}

TEST(Depress, ResultIsStableUnderExtraPrecision) {
  SeededRng rng(12);
  auto f = apply_change(P("x1^2 + x2^3 + x3^6", 3), random_linear_change(3, rng));
  auto g = split_quadratic(f, 1, Precision(24)).g;
  auto lo = depress_cubic(g.truncated(Precision(12)).with_precision(Precision(12)), Precision(12));
  auto hi = depress_cubic(g, Precision(24));
  EXPECT_TRUE(agree_below(lo.g3, hi.g3, lo.g3.precision()));
  EXPECT_TRUE(agree_below(lo.g4, hi.g4, lo.g4.precision()));
}

TEST(Depress, NeedsRotationWithoutACubeTerm) {
  EXPECT_THROW(depress_cubic(P("x1^2*x2 + x2^3", 2), Precision(12)), NeedsRotation);
  auto [h, change] = regularize_cubic(P("x1^2*x2 + x2^3", 2), 0);
  EXPECT_NE(h.coefficient(Monomial{3, 0}), 0);
  EXPECT_EQ(apply_change(P("x1^2*x2 + x2^3", 2), change), h);
}

TEST(HyperplaneCut, GenericCutOfA1DropsOneRank) {
  SeededRng rng(14);
  auto f = P("x1^2 + x2^2 + x3^2 + x4^2", 4);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Rational> lambda;
    for (int i = 0; i < 4; ++i) lambda.push_back(Rational(static_cast<long>(rng.uniform(1, 5))));
    auto cut = hyperplane_cut(f, lambda, 3);
    EXPECT_EQ(cut.num_vars(), 3u);
    EXPECT_EQ(essential_rank(cut), 3u);
  }
}

TEST(HyperplaneCut, EliminatesTheChosenVariable) {
  // x3 = -(x1 + x2)
  auto cut = hyperplane_cut(P("x1*x3 + x2", 3), {Rational(1), Rational(1), Rational(1)}, 2);
  EXPECT_EQ(cut, P("-x1^2 - x1*x2 + x2", 2));
  EXPECT_THROW(hyperplane_cut(P("x1", 2), {Rational(1), Rational(0)}, 1), UsageError);
}
