#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "cpwlkit/cpwl/expr.hpp"
#include "cpwlkit/cpwl/sampling.hpp"
#include "cpwlkit/error.hpp"
#include "cpwlkit/linalg/simplex.hpp"

namespace cpwlkit::cpwl {

namespace detail {

/// max t  s.t.  (a_sel - a_j)^T x - t >= b_j - b_sel  for every chosen
/// summand and every other term j,  t <= 1,  x free. The chosen terms are
/// simultaneously strictly maximal on an open set iff the optimum is > 0.
inline bool selection_is_full_dimensional(const CpwlExpr& expr, const std::vector<std::size_t>& chosen) {
  using namespace linalg;
  const std::size_t n = expr.dim();
  std::size_t rows = 0;
  for (std::size_t k = 0; k < chosen.size(); ++k) rows += expr.summands()[k].term.size() - 1;
  if (rows == 0) return true;

  LpProblem lp;
  lp.objective = RatVector::unit(n + 1, n);
  lp.constraints = RatMatrix(rows, n + 1);
  lp.rhs = RatVector(rows);
  lp.senses.assign(rows, Sense::GreaterEqual);
  lp.bounds.assign(n + 1, VariableBounds{});
  lp.bounds[n].upper = Rational(1);
  std::size_t r = 0;
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    const auto& terms = expr.summands()[k].term.terms();
    const AffineTerm& sel = terms[chosen[k]];
    for (std::size_t j = 0; j < terms.size(); ++j) {
      if (j == chosen[k]) continue;
      for (std::size_t i = 0; i < n; ++i) lp.constraints(r, i) = sel.a[i] - terms[j].a[i];
      lp.constraints(r, n) = -1;
      lp.rhs[r] = terms[j].b - sel.b;
      ++r;
    }
  }
  const LpResult res = lp_max(lp);
  return res.status == LpStatus::Optimal && res.value.sign() > 0;
}

}  // namespace detail

/// Affine pieces of expr: for every selection of one term per summand whose
/// region of simultaneous maximality is full-dimensional, the combined
/// affine function sum_k coeff_k * selected_k. Sorted and deduplicated.
/// Partial selections with an empty region are pruned.
inline std::vector<AffineTerm> enumerate_pieces(const CpwlExpr& expr) {
  std::set<AffineTerm> pieces;
  std::vector<std::size_t> chosen;
  const auto& summands = expr.summands();

  auto recurse = [&](auto&& self, AffineTerm partial) -> void {
    const std::size_t k = chosen.size();
    if (k == summands.size()) {
      pieces.insert(std::move(partial));
      return;
    }
    for (std::size_t j = 0; j < summands[k].term.size(); ++j) {
      chosen.push_back(j);
      if (summands[k].term.size() == 1 || detail::selection_is_full_dimensional(expr, chosen))
        self(self, partial + summands[k].coeff * summands[k].term[j]);
      chosen.pop_back();
    }
  };
  recurse(recurse, AffineTerm::constant(expr.dim(), Rational()));
  return {pieces.begin(), pieces.end()};
}

struct ConvexityReport {
  bool convex = true;
  // On failure: points x, y with 2 f((x+y)/2) > f(x) + f(y).
  std::optional<std::pair<RatVector, RatVector>> witness;
};

/// Midpoint-convexity test on `trials` seeded random pairs. A violation is
/// a proof of nonconvexity; passing is only evidence of convexity.
inline ConvexityReport check_convex_sampled(const CpwlExpr& expr, std::size_t trials, std::uint64_t seed) {
  require(trials >= 1, "check_convex_sampled: trials must be at least 1");
  RationalSampler sampler(seed);
  const Rational half(1, 2);
  for (std::size_t t = 0; t < trials; ++t) {
    RatVector x = sampler.point(expr.dim());
    RatVector y = sampler.point(expr.dim());
    const RatVector m = half * (x + y);
    if (expr(m) * 2 > expr(x) + expr(y)) return {false, std::pair{std::move(x), std::move(y)}};
  }
  return {};
}

}  // namespace cpwlkit::cpwl
