#include <gtest/gtest.h>

#include <random>

#include "cpwlkit/linalg.hpp"

namespace {

using namespace cpwlkit::linalg;

VariableBounds nonneg() { return {Rational(0), std::nullopt}; }
VariableBounds free_var() { return {std::nullopt, std::nullopt}; }

void expect_optimal_certificate(const LpProblem& p, const LpResult& r) {
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_TRUE(satisfies(p, r.x));
  EXPECT_EQ(dot(p.objective, r.x), r.value);
  const auto bound = dual_bound(p, r.duals);
  ASSERT_TRUE(bound.has_value());
  EXPECT_EQ(*bound, r.value);
}

TEST(LpMax, SingleVariableUpperBound) {
  LpProblem p{RatVector{1}, RatMatrix{{1}, {1}}, {Sense::LessEqual, Sense::GreaterEqual}, RatVector{3, 0},
              {free_var()}};
  const auto r = lp_max(p);
  expect_optimal_certificate(p, r);
  EXPECT_EQ(r.value, Rational(3));
}

TEST(LpMax, SimplexFace) {
  LpProblem p{RatVector{1, 1}, RatMatrix{{1, 1}}, {Sense::LessEqual}, RatVector{1}, {nonneg(), nonneg()}};
  const auto r = lp_max(p);
  expect_optimal_certificate(p, r);
  EXPECT_EQ(r.value, Rational(1));
}

TEST(LpMax, UnboundedGivesRay) {
  LpProblem p{RatVector{1, 0}, RatMatrix{{-1, 1}}, {Sense::LessEqual}, RatVector{1}, {nonneg(), nonneg()}};
  const auto r = lp_max(p);
  ASSERT_EQ(r.status, LpStatus::Unbounded);
  EXPECT_TRUE(satisfies(p, r.x));
  EXPECT_TRUE(is_improving_ray(p, r.ray));
}

TEST(LpMax, InfeasibleGivesFarkas) {
  LpProblem p{RatVector{1}, RatMatrix{{1}, {1}}, {Sense::LessEqual, Sense::GreaterEqual}, RatVector{0, 1},
              {free_var()}};
  const auto r = lp_max(p);
  ASSERT_EQ(r.status, LpStatus::Infeasible);
  EXPECT_TRUE(is_farkas_certificate(p, r.farkas));
}

TEST(LpMax, EqualityRows) {
  // max x + 2y  s.t.  x + y = 2, x - y >= -1/2, x,y >= 0  ->  x = 3/4, y = 5/4.
  LpProblem p{RatVector{1, 2}, RatMatrix{{1, 1}, {1, -1}}, {Sense::Equal, Sense::GreaterEqual},
              RatVector{2, Rational(-1, 2)}, {nonneg(), nonneg()}};
  const auto r = lp_max(p);
  expect_optimal_certificate(p, r);
  EXPECT_EQ(r.x, (RatVector{Rational(3, 4), Rational(5, 4)}));
  EXPECT_EQ(r.value, Rational(13, 4));
}

TEST(LpMax, NoRows) {
  LpProblem p{RatVector{-1, 2}, RatMatrix(0, 2), {}, RatVector{}, {{Rational(-1), Rational(1)}, {Rational(0), Rational(5)}}};
  const auto r = lp_max(p);
  expect_optimal_certificate(p, r);
  EXPECT_EQ(r.value, Rational(11));
}

TEST(LpMax, MalformedProblemThrows) {
  LpProblem p{RatVector{1, 1}, RatMatrix{{1}}, {Sense::LessEqual}, RatVector{1}, {nonneg(), nonneg()}};
  EXPECT_THROW(lp_max(p), cpwlkit::ContractError);
}

// Brute-force oracle: every vertex of a bounded LP is the unique solution of
// n tight constraints taken from rows and finite variable bounds.
std::optional<Rational> brute_force_max(const LpProblem& p) {
  const std::size_t n = p.num_vars();
  std::vector<std::pair<RatVector, Rational>> planes;
  for (std::size_t i = 0; i < p.num_rows(); ++i) planes.emplace_back(p.constraints.row(i), p.rhs[i]);
  for (std::size_t j = 0; j < n; ++j) {
    if (p.bounds[j].lower) planes.emplace_back(RatVector::unit(n, j), *p.bounds[j].lower);
    if (p.bounds[j].upper) planes.emplace_back(RatVector::unit(n, j), *p.bounds[j].upper);
  }
  std::optional<Rational> best;
  const std::size_t k = planes.size();
  std::vector<std::size_t> pick(n);
  for (std::size_t i = 0; i < n; ++i) pick[i] = i;
  if (k < n) return best;
  for (;;) {
    RatMatrix a(n, n);
    RatVector b(n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) a(r, c) = planes[pick[r]].first[c];
      b[r] = planes[pick[r]].second;
    }
    const auto sol = solve_linear(a, b);
    if (const auto* u = std::get_if<UniqueSolution>(&sol); u && satisfies(p, u->x)) {
      const Rational v = dot(p.objective, u->x);
      if (!best || v > *best) best = v;
    }
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == k - n + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t t = i; t < n; ++t) pick[t] = pick[t - 1] + 1;
  }
  return best;
}

LpProblem random_boxed_lp(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> sense(0, 2);
  LpProblem p;
  p.objective = RatVector(n);
  for (auto& c : p.objective) c = coef(rng);
  p.constraints = RatMatrix(m, n);
  p.rhs = RatVector(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) p.constraints(i, j) = Rational(coef(rng), 1 + (coef(rng) + 5) % 2);
    p.rhs[i] = coef(rng);
    const int s = sense(rng);
    p.senses.push_back(s == 0 ? Sense::LessEqual : s == 1 ? Sense::GreaterEqual : Sense::Equal);
    if (p.senses.back() == Sense::Equal && (i + n) % 3 != 0) p.senses.back() = Sense::LessEqual;
  }
  for (std::size_t j = 0; j < n; ++j) p.bounds.push_back({Rational(-3 - coef(rng) % 2), Rational(4)});
  return p;
}

TEST(LpMax, RandomBoxedLpsMatchVertexEnumeration) {
  std::mt19937_64 rng(2024);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 3, m = 1 + trial % 4;
    const LpProblem p = random_boxed_lp(rng, n, m);
    const auto oracle = brute_force_max(p);
    for (const auto rule : {PivotRule::Bland, PivotRule::Largest}) {
      SimplexEngine engine(p, rule);
      const auto r = engine.solve();
      if (oracle) {
        expect_optimal_certificate(p, r);
        ASSERT_EQ(r.value, *oracle) << "trial " << trial;
      } else {
        ASSERT_EQ(r.status, LpStatus::Infeasible) << "trial " << trial;
        ASSERT_TRUE(is_farkas_certificate(p, r.farkas)) << "trial " << trial;
      }
    }
    (oracle ? optimal : infeasible)++;
  }
  EXPECT_GT(optimal, 50);
  EXPECT_GT(infeasible, 10);
}

TEST(LpMax, RandomUnboundedLpsGiveRays) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> coef(-4, 4);
  int unbounded = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 2, m = 1 + trial % 3;
    LpProblem p;
    p.objective = RatVector(n);
    for (auto& c : p.objective) c = coef(rng);
    p.constraints = RatMatrix(m, n);
    p.rhs = RatVector(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) p.constraints(i, j) = coef(rng);
      p.rhs[i] = coef(rng) + 4;
      p.senses.push_back(Sense::LessEqual);
    }
    for (std::size_t j = 0; j < n; ++j) p.bounds.push_back(j == 0 ? free_var() : nonneg());
    const auto r = lp_max(p);
    ASSERT_NE(r.status, LpStatus::Infeasible);  // x = 0 is feasible
    if (r.status == LpStatus::Unbounded) {
      ++unbounded;
      ASSERT_TRUE(satisfies(p, r.x));
      ASSERT_TRUE(is_improving_ray(p, r.ray)) << "trial " << trial;
    } else {
      expect_optimal_certificate(p, r);
    }
  }
  EXPECT_GT(unbounded, 20);
}

TEST(SimplexEngine, DualSimplexAfterBoundChangeMatchesColdSolve) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> pick(-3, 4);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 2, m = 2 + trial % 3;
    LpProblem p = random_boxed_lp(rng, n, m);
    SimplexEngine warm(p);
    if (warm.solve().status != LpStatus::Optimal) continue;
    // Tighten one variable twice, as a branch-and-bound dive would.
    for (int step = 0; step < 2; ++step) {
      const std::size_t j = (trial + step) % n;
      Rational lo = *p.bounds[j].lower, up = *p.bounds[j].upper;
      const Rational cut = pick(rng);
      if (step == 0) {
        up = max(lo, min(up, cut));
      } else {
        lo = min(up, max(lo, cut));
      }
      p.bounds[j] = {lo, up};
      warm.set_bounds(j, lo, up);
      const auto status = warm.dual_simplex();
      const auto cold = lp_max(p);
      if (cold.status == LpStatus::Infeasible) {
        ASSERT_EQ(status, LpStatus::Infeasible) << "trial " << trial;
        break;
      }
      ASSERT_EQ(status, LpStatus::Optimal) << "trial " << trial;
      ASSERT_EQ(warm.objective_value(), cold.value) << "trial " << trial;
      ASSERT_TRUE(satisfies(p, warm.structural_values()));
      ++checked;
    }
  }
  EXPECT_GT(checked, 50);
}

}  // namespace
