#include <gtest/gtest.h>

#include <random>

#include "cpwlkit/linalg.hpp"

namespace {

using namespace cpwlkit::linalg;

TEST(SolveLinear, IdentityGivesUniqueSolution) {
  const auto res = solve_linear(RatMatrix::identity(2), RatVector{1, 2});
  ASSERT_TRUE(std::holds_alternative<UniqueSolution>(res));
  EXPECT_EQ(std::get<UniqueSolution>(res).x, (RatVector{1, 2}));
}

TEST(SolveLinear, UnderdeterminedGivesKernel) {
  const auto res = solve_linear(RatMatrix{{1, 1}}, RatVector{0});
  ASSERT_TRUE(std::holds_alternative<ParametricSolution>(res));
  const auto& p = std::get<ParametricSolution>(res);
  ASSERT_EQ(p.kernel.size(), 1u);
  EXPECT_EQ(p.kernel[0], (RatVector{1, -1}));
}

TEST(SolveLinear, ProportionalRowsInconsistent) {
  const auto res = solve_linear(RatMatrix{{1, 2}, {2, 4}}, RatVector{1, 3});
  EXPECT_TRUE(std::holds_alternative<Inconsistent>(res));
}

TEST(SolveLinear, DimensionMismatchThrows) {
  EXPECT_THROW(solve_linear(RatMatrix::identity(2), RatVector{1}), cpwlkit::ContractError);
}

TEST(SolveLinear, RandomSystemsSatisfyEquations) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> entry(-3, 3);
  std::uniform_int_distribution<int> shape(1, 5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = shape(rng), n = shape(rng);
    RatMatrix a(m, n);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < n; ++c) a(r, c) = Rational(entry(rng), 1 + (entry(rng) + 3) % 3);
    // Consistent right-hand side from a random point, except every 4th trial.
    RatVector x0(n);
    for (auto& v : x0) v = entry(rng);
    RatVector b = a * x0;
    if (trial % 4 == 0) b[0] += 1;
    const auto res = solve_linear(a, b);
    if (const auto* u = std::get_if<UniqueSolution>(&res)) {
      ASSERT_EQ(a * u->x, b);
      ASSERT_EQ(rank(a), n);
    } else if (const auto* p = std::get_if<ParametricSolution>(&res)) {
      ASSERT_EQ(a * p->particular, b);
      ASSERT_EQ(p->kernel.size(), n - rank(a));
      for (const auto& k : p->kernel) {
        ASSERT_FALSE(k.is_zero());
        ASSERT_TRUE((a * k).is_zero());
      }
    } else {
      ASSERT_EQ(trial % 4, 0) << "consistent system reported inconsistent";
    }
  }
}

TEST(Rank, SmallCases) {
  EXPECT_EQ(rank(RatMatrix{{1, 2}, {2, 4}}), 1u);
  EXPECT_EQ(rank(RatMatrix::identity(4)), 4u);
  EXPECT_EQ(rank(RatMatrix(3, 3)), 0u);
}

// Independent oracle for the dependence values below: the coefficients are
// the kernel of the lifted point matrix computed by solve_linear.
TEST(AffineDependence, CollinearPointsInDimensionOne) {
  const auto dep = affine_dependence({RatVector{0}, RatVector{1}, RatVector{2}});
  EXPECT_EQ(dep.support, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(dep.lambda, (std::vector<Rational>{1, -2, 1}));
  // Oracle: kernel of [[0,1,2],[1,1,1]].
  const auto k = solve_linear(RatMatrix{{0, 1, 2}, {1, 1, 1}}, RatVector{0, 0});
  const auto& kernel = std::get<ParametricSolution>(k).kernel;
  ASSERT_EQ(kernel.size(), 1u);
  EXPECT_EQ(kernel[0], (RatVector{1, -2, 1}));
}

TEST(AffineDependence, Parallelogram) {
  const auto dep = affine_dependence({RatVector{0, 0}, RatVector{1, 0}, RatVector{0, 1}, RatVector{1, 1}});
  EXPECT_EQ(dep.support, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(dep.lambda, (std::vector<Rational>{1, -1, -1, 1}));
}

TEST(AffineDependence, DuplicatePointGivesPair) {
  const std::vector<RatVector> pts{RatVector::unit(2, 0), RatVector::unit(2, 1), RatVector::unit(2, 0),
                                   RatVector{5, 5}};
  const auto dep = affine_dependence(pts);
  EXPECT_EQ(dep.support, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(dep.lambda, (std::vector<Rational>{1, -1}));
}

TEST(AffineDependence, RequiresNPlusTwoPoints) {
  EXPECT_THROW(affine_dependence({RatVector{0, 0}, RatVector{1, 0}, RatVector{0, 1}}), cpwlkit::ContractError);
}

TEST(AffineDependence, RandomPointsProperty) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coord(-4, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const std::size_t p = n + 2 + trial % 3;
    std::vector<RatVector> pts(p, RatVector(n));
    for (auto& v : pts)
      for (auto& x : v) x = Rational(coord(rng), 1 + trial % 2);
    const auto dep = affine_dependence(pts);
    ASSERT_FALSE(dep.support.empty());
    ASSERT_LE(dep.support.size(), n + 2);
    Rational sum;
    RatVector combo(n);
    for (std::size_t i = 0; i < dep.support.size(); ++i) {
      ASSERT_FALSE(dep.lambda[i].is_zero());
      sum += dep.lambda[i];
      combo += dep.lambda[i] * pts[dep.support[i]];
    }
    ASSERT_TRUE(sum.is_zero());
    ASSERT_TRUE(combo.is_zero());
    ASSERT_GT(dep.lambda[0], Rational(0));
  }
}

}  // namespace
