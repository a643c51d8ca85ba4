#include <gtest/gtest.h>

#include "support.hpp"
#include "topsing/parser.hpp"

using namespace topsing;
using topsing::testing::random_polynomial;

TEST(Parser, ReadsTheGrammar) {
  auto f = parse_polynomial("x1^2 - x2^2*x3", 3);
  EXPECT_EQ(f.num_vars(), 3u);
  EXPECT_EQ(f.coefficient(Monomial{2, 0, 0}), Rational(1));
  EXPECT_EQ(f.coefficient(Monomial{0, 2, 1}), Rational(-1));
  EXPECT_EQ(f.size(), 2u);
}

TEST(Parser, RationalCoefficientsAndParentheses) {
  auto f = parse_polynomial("1/2*x1 + (x1 + x2)^2 - 3/4", 2);
  EXPECT_EQ(f.coefficient(Monomial{1, 0}), Rational(1, 2));
  EXPECT_EQ(f.coefficient(Monomial{1, 1}), Rational(2));
  EXPECT_EQ(f.constant_term(), Rational(-3, 4));
}

TEST(Parser, WhitespaceIsInsignificant) {
  EXPECT_EQ(parse_polynomial(" x1 *x2+\tx3 ^ 3 ", 3), parse_polynomial("x1*x2+x3^3", 3));
}

TEST(Parser, InfersTheVariableCount) {
  EXPECT_EQ(parse_polynomial("x1 + x4").num_vars(), 4u);
}

TEST(Parser, ImplicitMultiplicationIsRejected) {
  EXPECT_THROW(parse_polynomial("2x1", 1), ParseError);
  EXPECT_THROW(parse_polynomial("x1 x2", 2), ParseError);
  EXPECT_THROW(parse_polynomial("(x1)(x2)", 2), ParseError);
}

TEST(Parser, ErrorsCarryLocationAndToken) {
  try {
    parse_polynomial("x1^2 +\n  x2 * * x1", 2);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 8u);
    EXPECT_EQ(e.token(), "*");
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Parser, RejectsBadInput) {
  EXPECT_THROW(parse_polynomial("", 1), ParseError);
  EXPECT_THROW(parse_polynomial("x1 +", 1), ParseError);
  EXPECT_THROW(parse_polynomial("x0", 1), ParseError);
  EXPECT_THROW(parse_polynomial("x3", 2), ParseError);
  EXPECT_THROW(parse_polynomial("y1", 1), ParseError);
  EXPECT_THROW(parse_polynomial("x1^-1", 1), ParseError);
  EXPECT_THROW(parse_polynomial("x1/x2", 2), ParseError);
  EXPECT_THROW(parse_polynomial("(x1 + x2", 2), ParseError);
  EXPECT_THROW(parse_polynomial("1/0", 1), ParseError);
}

TEST(Parser, FormatsCanonically) {
  EXPECT_EQ(format_polynomial(parse_polynomial("x3 + x1*x2 - 2*x1^2", 3)), "-2*x1^2 + x1*x2 + x3");
  EXPECT_EQ(format_polynomial(parse_polynomial("-x1", 1)), "-x1");
  EXPECT_EQ(format_polynomial(parse_polynomial("1/2", 1)), "1/2");
  EXPECT_EQ(format_polynomial(SparseSeries(2)), "0");
}

TEST(Parser, FormatThenParseRoundTrips) {
  SeededRng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto f = random_polynomial(rng, 4, 6, 7);
    EXPECT_EQ(parse_polynomial(format_polynomial(f), 4), f) << format_polynomial(f);
  }
}

TEST(Parser, CustomVariableNames) {
  auto f = parse_polynomial("x1*x2", 2);
  EXPECT_EQ(format_polynomial(f, [](std::size_t i) { return "y" + std::to_string(i); }), "y0*y1");
}
