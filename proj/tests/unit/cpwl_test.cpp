#include <gtest/gtest.h>

#include <set>

#include "cpwlkit/cpwl.hpp"
#include "support/generators.hpp"

namespace {

using namespace cpwlkit::cpwl;
using cpwlkit::testing::grid;
using cpwlkit::testing::random_expr;

const char* kGadget = "1*max(0, 1*x1 + -1*x2) + 1*max(0, 1*x2) + -1*max(0, -1*x2)";

TEST(Eval, GadgetComputesMaxOfTwo) {
  const CpwlExpr f = parse_expr(kGadget);
  EXPECT_EQ(f.dim(), 2u);
  EXPECT_EQ(eval(f, RatVector{3, 5}), Rational(5));
  for (const auto& x : grid(2, -3, 3, Rational(1, 2))) EXPECT_EQ(f(x), max(x[0], x[1]));
}

TEST(Eval, EmptyExpressionIsZero) {
  const CpwlExpr zero(3);
  EXPECT_EQ(eval(zero, RatVector{1, 2, 3}), Rational(0));
  EXPECT_EQ(to_string(zero), "0");
  EXPECT_EQ(parse_expr("0", 3), zero);
}

TEST(Eval, AllTermsNegative) {
  const CpwlExpr f = parse_expr("1*max(0, x1, x2, x3, x4)");
  EXPECT_EQ(eval(f, RatVector{-1, -2, -3, -4}), Rational(0));
}

TEST(Eval, DimensionMismatchThrows) {
  EXPECT_THROW(eval(parse_expr(kGadget), RatVector{1}), cpwlkit::ContractError);
}

TEST(Canonical, DuplicatesMergedAndZerosDropped) {
  const CpwlExpr f = parse_expr("2*max(x1, x1, 0) + -2*max(0, x1) + 1/2*max(x2)");
  EXPECT_EQ(to_string(f), "1/2*max(1*x2)");
  const MaxTerm m = parse_expr("max(x1, 0, x1)").summands()[0].term;
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(to_string(m), "max(0, 1*x1)");
}

TEST(Canonical, Idempotent) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const CpwlExpr f = random_expr(rng, 1 + i % 3, 4, 4);
    EXPECT_EQ(canonicalize(canonicalize(f)), canonicalize(f));
    EXPECT_EQ(canonicalize(f), f);
  }
}

TEST(Text, PrintsGrammarForm) {
  const CpwlExpr f = parse_expr("3/2*max(0, 1*x1 + -1*x2 + 1/2) + -1*max(1*x2)");
  EXPECT_EQ(to_string(f), "3/2*max(0, 1*x1 + -1*x2 + 1/2) + -1*max(1*x2)");
  EXPECT_EQ(eval(f, RatVector{1, 0}), Rational(9, 4));
}

TEST(Text, AcceptsLooseSpellings) {
  const CpwlExpr f = parse_expr("  max(x1 - x2 + 1/2, 0)\n  - 2 * max(-x2)  # comment\n");
  EXPECT_EQ(to_string(f), "-2*max(-1*x2) + 1*max(0, 1*x1 + -1*x2 + 1/2)");
}

TEST(Text, ErrorsCarryPosition) {
  try {
    parse_expr("1*max(0, x1)\n + 2*mix(x1)");
    FAIL() << "expected ParseError";
  } catch (const cpwlkit::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 6u);
  }
  EXPECT_THROW(parse_expr(""), cpwlkit::ParseError);
  EXPECT_THROW(parse_expr("max()"), cpwlkit::ParseError);
  EXPECT_THROW(parse_expr("max(x0)"), cpwlkit::ParseError);
  EXPECT_THROW(parse_expr("max(x3)", 2), cpwlkit::ParseError);
  EXPECT_THROW(parse_expr("1/0*max(x1)"), cpwlkit::ParseError);
}

TEST(Text, RoundTripProperty) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + i % 4;
    const CpwlExpr f = random_expr(rng, n, 5, 5);
    EXPECT_EQ(parse_expr(to_string(f), n), f);
    EXPECT_EQ(expr_from_json(nlohmann::json(f)), f);
    EXPECT_EQ(expr_from_json(nlohmann::json::parse(nlohmann::json(f).dump())), f);
  }
}

TEST(Eval, PositiveHomogeneityProperty) {
  std::mt19937_64 rng(29);
  RationalSampler sampler(1);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + i % 3;
    const CpwlExpr f = random_expr(rng, n, 4, 4, /*homogeneous=*/true);
    for (int s = 0; s < 10; ++s) {
      const RatVector x = sampler.point(n);
      const Rational lambda = abs(sampler.scalar());
      ASSERT_EQ(f(lambda * x), lambda * f(x));
    }
  }
}

// Oracle: at a generic random point every max has a unique maximizer, and
// the combined affine function of those maximizers is a piece. For
// homogeneous expressions every region is a cone and gets hit.
std::set<AffineTerm> sampled_pieces(const CpwlExpr& f, std::size_t samples, std::uint64_t seed) {
  RationalSampler sampler(seed);
  std::set<AffineTerm> out;
  for (std::size_t s = 0; s < samples; ++s) {
    const RatVector x = sampler.point(f.dim());
    AffineTerm piece = AffineTerm::constant(f.dim(), 0);
    bool generic = true;
    for (const auto& [c, m] : f.summands()) {
      std::size_t arg = 0, ties = 0;
      for (std::size_t j = 0; j < m.size(); ++j) {
        if (m[j](x) > m[arg](x)) {
          arg = j;
          ties = 0;
        } else if (j != arg && m[j](x) == m[arg](x)) {
          ++ties;
        }
      }
      generic = generic && ties == 0;
      piece += c * m[arg];
    }
    if (generic) out.insert(piece);
  }
  return out;
}

TEST(Pieces, ReluHasTwoPieces) {
  const auto pieces = enumerate_pieces(parse_expr("1*max(0, x1)"));
  ASSERT_EQ(pieces.size(), 2u);
  EXPECT_EQ(pieces[0], AffineTerm::constant(1, 0));
  EXPECT_EQ(pieces[1], AffineTerm::variable(1, 0));
}

TEST(Pieces, GadgetPiecesAreTheCoordinates) {
  const CpwlExpr f = parse_expr(kGadget);
  const auto pieces = enumerate_pieces(f);
  EXPECT_EQ(std::set<AffineTerm>(pieces.begin(), pieces.end()),
            (std::set<AffineTerm>{AffineTerm::variable(2, 0), AffineTerm::variable(2, 1)}));
  EXPECT_EQ(std::set<AffineTerm>(pieces.begin(), pieces.end()), sampled_pieces(f, 2000, 3));
}

TEST(Pieces, MinLikeResidual) {
  const CpwlExpr f = parse_expr("1*max(0, x1, x2) + -1*max(x1, x2)");
  const auto pieces = enumerate_pieces(f);
  const std::set<AffineTerm> expected{AffineTerm::constant(2, 0), -1 * AffineTerm::variable(2, 0),
                                      -1 * AffineTerm::variable(2, 1)};
  EXPECT_EQ(std::set<AffineTerm>(pieces.begin(), pieces.end()), expected);
  // Grid oracle: every value is attained by an enumerated piece.
  for (const auto& x : grid(2, -5, 5, Rational(10, 9))) {
    const Rational v = f(x);
    EXPECT_TRUE(std::any_of(pieces.begin(), pieces.end(), [&](const AffineTerm& p) { return p(x) == v; }));
  }
}

TEST(Pieces, FarAwayKinkIsFound) {
  // Kink at x1 = 1000 with small coefficients.
  const auto pieces = enumerate_pieces(parse_expr("1*max(0, 1/1000*x1 + -1)"));
  EXPECT_EQ(pieces.size(), 2u);
}

TEST(Pieces, RandomHomogeneousMatchSampledOracle) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 1 + i % 2;
    const CpwlExpr f = random_expr(rng, n, 3, 3, /*homogeneous=*/true);
    const auto pieces = enumerate_pieces(f);
    const auto sampled = sampled_pieces(f, 3000, 100 + i);
    // Every sampled piece is enumerated; enumerated pieces cover all samples.
    for (const auto& p : sampled) ASSERT_TRUE(std::binary_search(pieces.begin(), pieces.end(), p));
    RationalSampler sampler(7);
    for (int s = 0; s < 100; ++s) {
      const RatVector x = sampler.point(n);
      const Rational v = f(x);
      ASSERT_TRUE(std::any_of(pieces.begin(), pieces.end(), [&](const AffineTerm& p) { return p(x) == v; }));
    }
  }
}

TEST(Pieces, MaxTermPieceCountAtMostTermCount) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 50; ++i) {
    const auto m = cpwlkit::testing::random_max_term(rng, 1 + i % 3, 1 + i % 6);
    const CpwlExpr f(m);
    const auto pieces = enumerate_pieces(f);
    ASSERT_LE(pieces.size(), m.size());
    // For a convex function the max over pieces is the function.
    RationalSampler sampler(i);
    for (int s = 0; s < 20; ++s) {
      const RatVector x = sampler.point(f.dim());
      Rational best = pieces[0](x);
      for (const auto& p : pieces) best = max(best, p(x));
      ASSERT_EQ(best, f(x));
    }
  }
}

TEST(Convexity, ReluIsConvex) {
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    EXPECT_TRUE(check_convex_sampled(parse_expr("1*max(0, x1)"), 1000, seed).convex);
}

TEST(Convexity, NegatedReluHasWitness) {
  const CpwlExpr f = parse_expr("-1*max(0, x1)");
  const auto report = check_convex_sampled(f, 1000, 0);
  ASSERT_FALSE(report.convex);
  ASSERT_TRUE(report.witness.has_value());
  const auto& [x, y] = *report.witness;
  EXPECT_LT(x[0] * y[0], Rational(0));  // straddles the kink
  EXPECT_GT(2 * f(Rational(1, 2) * (x + y)), f(x) + f(y));
}

TEST(Convexity, TrialsMustBePositive) {
  EXPECT_THROW(check_convex_sampled(parse_expr("max(x1)"), 0, 0), cpwlkit::ContractError);
}

}  // namespace
