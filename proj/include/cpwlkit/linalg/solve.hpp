#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "cpwlkit/error.hpp"
#include "cpwlkit/linalg/matrix.hpp"

namespace cpwlkit::linalg {

struct UniqueSolution {
  RatVector x;
};

/// Solution set x = particular + span(kernel).
struct ParametricSolution {
  RatVector particular;
  std::vector<RatVector> kernel;
};

struct Inconsistent {};

using SolveResult = std::variant<UniqueSolution, ParametricSolution, Inconsistent>;

namespace detail {

/// Result of Gauss-Jordan elimination with full pivoting on [A | b].
struct Echelon {
  RatMatrix reduced;                   // rows x (cols + 1), pivot block is the identity
  std::vector<std::size_t> col_order;  // col_order[k] = original column at position k
  std::size_t rank = 0;
};

inline Echelon eliminate(const RatMatrix& a, const RatVector* b) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Echelon e{RatMatrix(m, n + 1), {}, 0};
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) e.reduced(r, c) = a(r, c);
    if (b) e.reduced(r, n) = (*b)[r];
  }
  e.col_order.resize(n);
  for (std::size_t c = 0; c < n; ++c) e.col_order[c] = c;

  auto& t = e.reduced;
  auto swap_cols = [&](std::size_t c1, std::size_t c2) {
    if (c1 == c2) return;
    for (std::size_t r = 0; r < m; ++r) std::swap(t(r, c1), t(r, c2));
    std::swap(e.col_order[c1], e.col_order[c2]);
  };
  auto swap_rows = [&](std::size_t r1, std::size_t r2) {
    if (r1 == r2) return;
    for (std::size_t c = 0; c <= n; ++c) std::swap(t(r1, c), t(r2, c));
  };

  std::size_t k = 0;
  while (k < m && k < n) {
    // Full pivoting: any nonzero entry of the trailing block; prefer the one
    // with the smallest numerator/denominator to limit growth.
    std::optional<std::pair<std::size_t, std::size_t>> pivot;
    bool unit_pivot = false;
    for (std::size_t r = k; r < m && !unit_pivot; ++r)
      for (std::size_t c = k; c < n; ++c) {
        const Rational& x = t(r, c);
        if (x.is_zero()) continue;
        if (x == 1 || x == -1) {
          pivot = {r, c};
          unit_pivot = true;
          break;
        }
        if (!pivot || (x.is_small() && !t(pivot->first, pivot->second).is_small())) pivot = {r, c};
      }
    if (!pivot) break;
    swap_rows(k, pivot->first);
    swap_cols(k, pivot->second);
    const Rational inv = t(k, k).reciprocal();
    for (std::size_t c = k; c <= n; ++c)
      if (!t(k, c).is_zero()) t(k, c) *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == k || t(r, k).is_zero()) continue;
      const Rational factor = t(r, k);
      for (std::size_t c = k; c <= n; ++c)
        if (!t(k, c).is_zero()) t(r, c) -= factor * t(k, c);
    }
    ++k;
  }
  e.rank = k;
  return e;
}

inline void normalize_sign(RatVector& v) {
  for (const auto& x : v) {
    if (x.is_zero()) continue;
    if (x.sign() < 0) v = -v;
    return;
  }
}

}  // namespace detail

/// Solves A x = b exactly by Gauss-Jordan elimination with full pivoting.
/// Kernel basis vectors have their first nonzero entry positive.
inline SolveResult solve_linear(const RatMatrix& a, const RatVector& b) {
  require(a.rows() == b.size(), "solve_linear: A has " + std::to_string(a.rows()) + " rows but b has " +
                                    std::to_string(b.size()) + " entries");
  const std::size_t n = a.cols();
  const auto e = detail::eliminate(a, &b);
  for (std::size_t r = e.rank; r < a.rows(); ++r)
    if (!e.reduced(r, n).is_zero()) return Inconsistent{};

  RatVector particular(n);
  for (std::size_t k = 0; k < e.rank; ++k) particular[e.col_order[k]] = e.reduced(k, n);
  if (e.rank == n) return UniqueSolution{std::move(particular)};

  std::vector<RatVector> kernel;
  for (std::size_t f = e.rank; f < n; ++f) {
    RatVector v(n);
    v[e.col_order[f]] = 1;
    for (std::size_t k = 0; k < e.rank; ++k) v[e.col_order[k]] = -e.reduced(k, f);
    detail::normalize_sign(v);
    kernel.push_back(std::move(v));
  }
  return ParametricSolution{std::move(particular), std::move(kernel)};
}

inline std::size_t rank(const RatMatrix& a) { return detail::eliminate(a, nullptr).rank; }

struct AffineDependence {
  std::vector<std::size_t> support;  // increasing point indices
  std::vector<Rational> lambda;      // one coefficient per support index
};

/// Finds an affine dependence sum(lambda_i) = 0, sum(lambda_i * p_i) = 0
/// among at least n+2 points of R^n. Points are inserted one at a time; the
/// first point affinely dependent on its predecessors yields the
/// certificate, so the support is minimal for that prefix. The first
/// nonzero coefficient is positive.
inline AffineDependence affine_dependence(const std::vector<RatVector>& points) {
  require(!points.empty(), "affine_dependence: no points");
  const std::size_t n = points.front().size();
  require(points.size() >= n + 2, "affine_dependence: need at least n+2 = " + std::to_string(n + 2) +
                                      " points, got " + std::to_string(points.size()));
  struct Stored {
    RatVector lifted;
    RatVector combo;
    std::size_t pivot;
  };
  std::vector<Stored> basis;
  const std::size_t p = points.size();
  for (std::size_t k = 0; k < p; ++k) {
    require(points[k].size() == n, "affine_dependence: points of mixed dimension");
    RatVector v(n + 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = points[k][i];
    v[n] = 1;
    RatVector combo = RatVector::unit(p, k);
    for (const auto& s : basis) {
      if (v[s.pivot].is_zero()) continue;
      const Rational factor = v[s.pivot];
      for (std::size_t i = 0; i <= n; ++i)
        if (!s.lifted[i].is_zero()) v[i] -= factor * s.lifted[i];
      for (std::size_t i = 0; i <= k; ++i)
        if (!s.combo[i].is_zero()) combo[i] -= factor * s.combo[i];
    }
    std::optional<std::size_t> pivot;
    for (std::size_t i = 0; i <= n; ++i)
      if (!v[i].is_zero()) {
        pivot = i;
        break;
      }
    if (!pivot) {
      detail::normalize_sign(combo);
      AffineDependence dep;
      for (std::size_t i = 0; i <= k; ++i)
        if (!combo[i].is_zero()) {
          dep.support.push_back(i);
          dep.lambda.push_back(combo[i]);
        }
      return dep;
    }
    const Rational inv = v[*pivot].reciprocal();
    v *= inv;
    combo *= inv;
    basis.push_back({std::move(v), std::move(combo), *pivot});
  }
  // Unreachable: n+2 lifted vectors in R^{n+1} are always dependent.
  throw ContractError("affine_dependence: internal error, no dependence found");
}

}  // namespace cpwlkit::linalg
