#include <gtest/gtest.h>

#include "support.hpp"
#include "topsing/groebner.hpp"
#include "topsing/jets.hpp"

using namespace topsing;
using topsing::testing::P;
using topsing::testing::random_polynomial;

namespace {

// Oracle: substitute x_i = sum_n X_{i,n} t^n with t as one more variable and
// read off the coefficient of t^k.
std::vector<SparseSeries> taylor_by_substitution(const SparseSeries& f, unsigned m) {
  const std::size_t base = f.num_vars();
  const std::size_t nv = base * (m + 1);
  const std::size_t t = nv;
  std::vector<SparseSeries> images;
  for (std::size_t i = 0; i < base; ++i) {
    std::vector<SparseSeries::Term> terms;
    for (unsigned n = 0; n <= m; ++n) {
      Monomial mono(nv + 1);
      mono.set(n * base + i, 1);
      mono.set(t, n);
      terms.emplace_back(mono, Rational(1));
    }
    images.push_back(SparseSeries::from_terms(nv + 1, std::move(terms)));
  }
  SparseSeries g = substitute(f, images);
  std::vector<std::vector<SparseSeries::Term>> by_power(m + 1);
  for (const auto& [mono, c] : g.terms()) {
    if (mono[t] > m) continue;
    Monomial r(nv);
    for (std::size_t v = 0; v < nv; ++v) r.set(v, mono[v]);
    by_power[mono[t]].emplace_back(r, c);
  }
  std::vector<SparseSeries> out;
  for (auto& terms : by_power) out.push_back(SparseSeries::from_terms(nv, std::move(terms)));
  return out;
}

int jet_dim(const std::string& f, std::size_t n, unsigned m) {
  auto j = jet_ideal_at_origin({P(f, n)}, m);
  return ideal_dimension(j.generators, j.num_vars());
}

}  // namespace

TEST(JetNames, IndexingConventions) {
  EXPECT_EQ(origin_jet_index(3, 0, 1), 0u);
  EXPECT_EQ(origin_jet_index(3, 2, 2), 5u);
  EXPECT_EQ(origin_jet_name(3, 5), "X_3_2");
  EXPECT_EQ(full_jet_name(3, 5), "X_3_1");
  EXPECT_EQ(origin_level_weights(2, 3), (std::vector<unsigned>{1, 1, 2, 2, 3, 3}));
}

TEST(Taylor, NodeCoefficients) {
  auto fs = taylor_coefficients(P("x1*x2", 2), 2);
  ASSERT_EQ(fs.size(), 3u);
  // full index n*N + i: X_{1,0}=0, X_{2,0}=1, X_{1,1}=2, X_{2,1}=3, ...
  auto X = [](std::size_t idx) { return SparseSeries::variable(6, idx); };
  EXPECT_EQ(fs[0], X(0) * X(1));
  EXPECT_EQ(fs[1], X(0) * X(3) + X(2) * X(1));
  EXPECT_EQ(fs[2], X(0) * X(5) + X(2) * X(3) + X(4) * X(1));
}

TEST(Taylor, MatchesSubstitutionOracle) {
  SeededRng rng(61);
  for (int trial = 0; trial < 12; ++trial) {
    auto f = random_polynomial(rng, 2, 4, 5);
    unsigned m = static_cast<unsigned>(rng.uniform(1, 4));
    EXPECT_EQ(taylor_coefficients(f, m), taylor_by_substitution(f, m)) << format_polynomial(f);
  }
}

TEST(Taylor, LeibnizRule) {
  SeededRng rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = random_polynomial(rng, 2, 3, 4);
    auto g = random_polynomial(rng, 2, 3, 4);
    const unsigned m = 3;
    auto F = taylor_coefficients(f, m), G = taylor_coefficients(g, m), FG = taylor_coefficients(f * g, m);
    for (unsigned k = 0; k <= m; ++k) {
      SparseSeries sum(F[0].num_vars());
      for (unsigned a = 0; a <= k; ++a) sum = sum + F[a] * G[k - a];
      EXPECT_EQ(FG[k], sum);
    }
  }
}

TEST(JetIdeal, NodeAtLevelThree) {
  auto j = jet_ideal_at_origin({P("x1*x2", 2)}, 3);
  EXPECT_EQ(j.num_vars(), 6u);
  EXPECT_EQ(j.generator_levels, (std::vector<unsigned>{2, 3}));
  auto v = [](std::size_t i, unsigned n) { return SparseSeries::variable(6, origin_jet_index(2, i, n)); };
  EXPECT_EQ(j.generators[0], v(0, 1) * v(1, 1));
  EXPECT_EQ(j.generators[1], v(0, 1) * v(1, 2) + v(0, 2) * v(1, 1));
}

TEST(JetIdeal, OriginRestrictionOfTaylorCoefficients) {
  SeededRng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = random_polynomial(rng, 2, 4, 5, 1);
    if (f.is_zero()) continue;
    const unsigned m = 3;
    auto full = taylor_coefficients(f, m);
    auto j = jet_ideal_at_origin({f}, m);
    // set X_{i,0} = 0 and shift indices down by one level
    std::vector<SparseSeries> images;
    for (std::size_t idx = 0; idx < 2 * (m + 1); ++idx)
      images.push_back(idx < 2 || idx >= 2 * (m + 1) ? SparseSeries(2 * m) : SparseSeries::variable(2 * m, idx - 2));
    std::vector<SparseSeries> expected;
    for (unsigned n = 1; n <= m; ++n) {
      auto r = substitute(full[n], images);
      if (!r.is_zero()) expected.push_back(r);
    }
    EXPECT_EQ(j.generators, expected);
  }
}

TEST(JetIdeal, RejectsNonVanishingEquations) {
  EXPECT_THROW(jet_ideal_at_origin({P("1 + x1", 1)}, 2), UsageError);
  EXPECT_THROW(jet_ideal_at_origin({P("x1", 1)}, 0), UsageError);
  EXPECT_THROW(jet_ideal_at_origin({P("x1*x2*x3", 3)}, 30), UsageError);
}

TEST(JetDimension, ReferenceValues) {
  for (unsigned m = 1; m <= 6; ++m) EXPECT_EQ(jet_dim("x1*x2", 2, m), static_cast<int>(m + 1)) << m;
  EXPECT_EQ(jet_dim("x1^2 + x2^3", 2, 4), 5);
  EXPECT_EQ(jet_dim("x1^2 + x2^3", 2, 5), 7);
  for (unsigned m = 1; m <= 4; ++m) EXPECT_EQ(jet_dim("x1^2 + x2^2 + x3^2", 3, m), static_cast<int>(2 * m + 1));
}

TEST(JetDimension, SmoothGermHasNoDefect) {
  // x1 = 0 in three variables: dim of X^0_m is 2m
  for (unsigned m = 1; m <= 4; ++m) EXPECT_EQ(jet_dim("x1 + x2*x3", 3, m), static_cast<int>(2 * m));
}

TEST(JetDimension, IndependentOfTheMonomialOrder) {
  for (const char* f : {"x1*x2", "x1^2 + x2^3", "x1^2 - x2^2*x3"}) {
    std::size_t n = std::string(f).find("x3") != std::string::npos ? 3 : 2;
    auto j = jet_ideal_at_origin({P(f, n)}, 3);
    int g = ideal_dimension(j.generators, j.num_vars(), MonomialOrder::grevlex());
    int w = ideal_dimension(j.generators, j.num_vars(), MonomialOrder::weighted(origin_level_weights(n, 3)));
    EXPECT_EQ(g, w) << f;
  }
}

TEST(Jacobian, PartialDerivatives) {
  auto j = jacobian_ideal(P("x1^2 + x2^3*x3", 3));
  ASSERT_EQ(j.size(), 3u);
  EXPECT_EQ(j[0], P("2*x1", 3));
  EXPECT_EQ(j[1], P("3*x2^2*x3", 3));
  EXPECT_EQ(j[2], P("x2^3", 3));
}
