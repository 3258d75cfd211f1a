#include <gtest/gtest.h>

#include <random>

#include "cpwlkit/cpwl.hpp"
#include "cpwlkit/decompose.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace {

using namespace cpwlkit::decompose;
using cpwlkit::cpwl::AffineTerm;
using cpwlkit::cpwl::enumerate_pieces;
using cpwlkit::cpwl::parse_expr;
using cpwlkit::cpwl::RationalSampler;
using cpwlkit::cpwl::to_string;
using cpwlkit::testing::grid;

MaxTerm term_of(const char* text) { return parse_expr(text).summands()[0].term; }

void expect_same_function(const MaxTerm& m, const CpwlExpr& e, std::uint64_t seed, int samples) {
  RationalSampler sampler(seed);
  for (int s = 0; s < samples; ++s) {
    const RatVector x = sampler.point(m.dim());
    ASSERT_EQ(m(x), e(x)) << "at " << x;
  }
}

TEST(RadonSubset, TieGoesToSmallerSide) {
  const auto r = radon_subset(term_of("max(0, x1, 2*x1)"));
  EXPECT_EQ(r.U, (std::vector<std::size_t>{1}));
  EXPECT_EQ(r.lambda_U, (std::vector<Rational>{1}));
  EXPECT_EQ(r.rest, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(r.lambda_rest, (std::vector<Rational>{Rational(1, 2), Rational(1, 2)}));
}

TEST(RadonSubset, OffsetSumsDecideTheSide) {
  // b-sums: 1 on the singleton side, 0 on the other.
  const auto r = radon_subset(term_of("max(0, x1 + 1, 2*x1)"));
  EXPECT_EQ(r.U, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(r.rest, (std::vector<std::size_t>{1}));
}

TEST(RadonSubset, DuplicateGradients) {
  // Terms x1 + 1 and x1 share a gradient; the smaller offset forms U.
  const auto m = term_of("max(x1 + 1, x1, 0)");
  const auto r = radon_subset(m);
  ASSERT_EQ(r.U.size(), 1u);
  EXPECT_EQ(m[r.U[0]], (AffineTerm{RatVector{1}, 0}));
}

TEST(RadonSubset, RequiresEnoughTerms) {
  EXPECT_THROW(radon_subset(term_of("max(0, x1)")), cpwlkit::ContractError);
}

TEST(OneStep, ThreeTermsInOneDimension) {
  const MaxTerm m = term_of("max(0, x1, 2*x1)");
  const CpwlExpr e = one_step(m);
  EXPECT_EQ(to_string(e), "1*max(0, 2*x1)");
  for (const auto& x : grid(1, -5, 5, Rational(1, 3))) EXPECT_EQ(m(x), e(x));
}

TEST(OneStep, SquareGradientsGiveTwoOddOneEven) {
  // Gradients at the unit square corners; dependence (1,-1,-1,1).
  const MaxTerm m = term_of("max(0, x1 + 1, x2 + 1, x1 + x2)");
  const auto r = radon_subset(m);
  ASSERT_EQ(r.U.size(), 2u);
  const CpwlExpr e = one_step(m);
  int plus = 0, minus = 0;
  for (const auto& s : e.summands()) {
    EXPECT_LE(s.term.size(), 3u);
    (s.coeff == Rational(1) ? plus : minus)++;
  }
  EXPECT_EQ(plus, 2);
  EXPECT_EQ(minus, 1);
  expect_same_function(m, e, 1, 200);
}

TEST(OneStep, SingletonRadonSideKeepsPMinusOneTerms) {
  std::mt19937_64 rng(61);
  int seen = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const MaxTerm m = cpwlkit::testing::random_max_term(rng, n, n + 2);
    if (radon_subset(m).U.size() != 1) continue;
    ++seen;
    for (const auto& s : one_step(m).summands()) EXPECT_EQ(s.term.size(), n + 1);
  }
  EXPECT_GT(seen, 5);
}

TEST(OneStep, PointwiseIdentityProperty) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const MaxTerm m = cpwlkit::testing::random_max_term(rng, n, n + 2 + trial % 3);
    const CpwlExpr e = one_step(m);
    for (const auto& s : e.summands()) {
      ASSERT_LT(s.term.size(), m.size());
      ASSERT_TRUE(s.coeff == Rational(1) || s.coeff == Rational(-1));
    }
    for (std::uint64_t seed : {1u, 2u}) expect_same_function(m, e, seed + trial, 500);
  }
}

TEST(OneStep, EvenAndOddPolytopesCoincide) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 1 + trial % 2;
    const MaxTerm m = cpwlkit::testing::random_max_term(rng, n, n + 2 + trial % 2);
    const auto [even, odd] = cpwlkit::testing::even_odd_polytopes(m);
    ASSERT_EQ(even, odd) << "trial " << trial;
  }
}

TEST(Reduce, AlreadyTerminalAfterOneStep) {
  const auto d = reduce_to_nplus1(term_of("max(0, x1, 2*x1)"));
  ASSERT_EQ(d.coefficients.size(), 1u);
  EXPECT_EQ(d.coefficients.begin()->first, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(d.coefficients.begin()->second, Rational(1));
  EXPECT_EQ(to_string(d.expr), "1*max(0, 2*x1)");
  EXPECT_EQ(cpwlkit::decompose::coefficients_json(d).dump(), R"([{"coeff":"1","subset":[1,3]}])");
  EXPECT_EQ(d.steps, 1u);
}

TEST(Reduce, SmallTermUnchanged) {
  const MaxTerm m = term_of("max(0, x1, x2)");
  const auto d = reduce_to_nplus1(m);
  EXPECT_EQ(d.expr, CpwlExpr(m));
  EXPECT_EQ(d.steps, 0u);
}

TEST(Reduce, RandomTermsProperty) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const std::size_t p = n == 2 ? 5 : n + 2 + trial % 3;
    const MaxTerm m = cpwlkit::testing::random_max_term(rng, n, p);
    const auto d = reduce_to_nplus1(m);
    for (const auto& [S, c] : d.coefficients) {
      ASSERT_LE(S.size(), n + 1);
      ASSERT_TRUE(c.is_integer());
    }
    for (const auto& s : d.expr.summands())
      for (const auto& t : s.term.terms())
        ASSERT_TRUE(std::find(m.terms().begin(), m.terms().end(), t) != m.terms().end());
    expect_same_function(m, d.expr, 100 + trial, 500);
  }
}

TEST(SplitBySign, Examples) {
  const CpwlExpr f = parse_expr("1*max(0, 1*x1 + -1*x2) + 1*max(0, 1*x2) + -1*max(0, -1*x2)");
  const auto [g, h] = split_by_sign(f);
  EXPECT_EQ(g, parse_expr("max(0, x1 - x2) + max(0, x2)"));
  EXPECT_EQ(h, parse_expr("max(0, -x2)", 2));
  EXPECT_EQ(g - h, f);
  const auto [g2, h2] = split_by_sign(parse_expr("max(x1) + 2*max(0, x2)"));
  EXPECT_TRUE(h2.is_zero());
  const auto [g3, h3] = split_by_sign(parse_expr("-2*max(x1, x2)"));
  EXPECT_TRUE(g3.is_zero());
  EXPECT_EQ(h3, parse_expr("2*max(x1, x2)"));
}

TEST(Convexify, ConvexInput) {
  const CpwlExpr f = parse_expr("max(0, x1)");
  const auto [g, h] = convexify(f, enumerate_pieces(f));
  EXPECT_EQ(h, f);
  EXPECT_EQ(g, parse_expr("2*max(0, x1)"));
}

TEST(Convexify, ConcaveInput) {
  const CpwlExpr f = parse_expr("-1*max(0, x1)");
  // Pieces of f are 0 and -x1, so h = max{0, -x1} and g = f + h = -x1.
  const auto [g, h] = convexify(f, enumerate_pieces(f));
  EXPECT_EQ(h, parse_expr("max(0, -x1)"));
  EXPECT_EQ(g, f + h);
  for (const auto& x : grid(1, -3, 3, Rational(1, 2))) EXPECT_EQ(g(x), -x[0]);
  EXPECT_TRUE(cpwlkit::cpwl::check_convex_sampled(g, 1000, 0).convex);
  EXPECT_TRUE(cpwlkit::cpwl::check_convex_sampled(h, 1000, 0).convex);
  // With the pieces {0, x1} supplied instead, g cancels to the zero expression.
  const auto [g2, h2] = convexify(f, {AffineTerm::constant(1, 0), AffineTerm::variable(1, 0)});
  EXPECT_TRUE(g2.is_zero());
  EXPECT_EQ(h2, parse_expr("max(0, x1)"));
}

TEST(Convexify, AbsoluteValueDifference) {
  // f = max{0,x} - max{0,-x} = x; g must be convex on a whole grid.
  const CpwlExpr f = parse_expr("max(0, x1) - max(0, -x1)");
  const auto [g, h] = convexify(f, enumerate_pieces(f));
  EXPECT_TRUE(cpwlkit::cpwl::check_convex_sampled(g, 2000, 3).convex);
  EXPECT_TRUE(cpwlkit::testing::midpoint_convex_on(g, grid(1, -4, 4, Rational(1, 4))));
}

TEST(Convexify, PairCountAndEmptyPieces) {
  const CpwlExpr f = parse_expr("max(0, x1, x2) - max(x1, x2) + max(x1 - 1, -x2)");
  const auto pieces = enumerate_pieces(f);
  const auto [g, h] = convexify(f, pieces);
  EXPECT_LE(h.summands().size(), pieces.size() * (pieces.size() - 1) / 2);
  EXPECT_THROW(convexify(f, {}), cpwlkit::ContractError);
}

TEST(Convexify, RandomNonconvexProperty) {
  std::mt19937_64 rng(79);
  int nonconvex = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 2;
    const CpwlExpr f = cpwlkit::testing::random_expr(rng, n, 3, 3);
    if (cpwlkit::cpwl::check_convex_sampled(f, 500, trial).convex) continue;
    ++nonconvex;
    const auto pieces = enumerate_pieces(f);
    const auto [g, h] = convexify(f, pieces);
    EXPECT_TRUE(cpwlkit::cpwl::check_convex_sampled(g, 2000, trial).convex) << to_string(f);
    EXPECT_TRUE(cpwlkit::cpwl::check_convex_sampled(h, 2000, trial).convex) << to_string(f);
    RationalSampler sampler(trial);
    for (int s = 0; s < 200; ++s) {
      const RatVector x = sampler.point(n);
      ASSERT_EQ(f(x), g(x) - h(x));
    }
    // Piece count bound for h on small instances.
    const std::size_t p = pieces.size();
    std::size_t bound = 1;
    for (std::size_t i = 0; i < 2 * n; ++i) bound *= p;
    EXPECT_LE(enumerate_pieces(h).size(), bound);
  }
  EXPECT_GT(nonconvex, 5);
}

}  // namespace
