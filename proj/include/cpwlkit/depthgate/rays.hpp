#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpwlkit/error.hpp"
#include "cpwlkit/linalg/matrix.hpp"
#include "cpwlkit/linalg/solve.hpp"

namespace cpwlkit::depthgate {

using linalg::Rational;
using linalg::RatMatrix;
using linalg::RatVector;

/// Sorted subset of {0, ..., n}; index 0 stands for the constant coordinate
/// x_0 = 0.
using Subset = std::vector<int>;

/// Size first, then lexicographic.
inline bool subset_less(const Subset& a, const Subset& b) {
  return a.size() != b.size() ? a.size() < b.size() : a < b;
}

inline std::string to_string(const Subset& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

/// Compact label used in variable names: the digits of the subset.
inline std::string label(const Subset& s) {
  std::string out;
  for (int i : s) out += std::to_string(i);
  return out;
}

/// All subsets of {0..n} in size-then-lex order, optionally skipping the
/// empty and full sets.
inline std::vector<Subset> subsets_of(std::size_t n, bool proper) {
  const std::size_t full = std::size_t{1} << (n + 1);
  std::vector<Subset> out;
  for (std::size_t mask = 0; mask < full; ++mask) {
    if (proper && (mask == 0 || mask == full - 1)) continue;
    Subset s;
    for (std::size_t i = 0; i <= n; ++i)
      if (mask >> i & 1) s.push_back(static_cast<int>(i));
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), subset_less);
  return out;
}

inline bool is_proper_subset(const Subset& a, const Subset& b) {
  return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline Subset complement(const Subset& s, std::size_t n) {
  Subset out;
  for (int i = 0; i <= static_cast<int>(n); ++i)
    if (!std::binary_search(s.begin(), s.end(), i)) out.push_back(i);
  return out;
}

/// Generators r_S of the rays of the arrangement {x_i = x_j, 0 <= i < j <= n}.
struct RaySet {
  std::size_t n = 0;
  std::vector<Subset> subsets;
  std::vector<RatVector> vectors;

  std::size_t size() const { return subsets.size(); }

  std::size_t index_of(const Subset& s) const {
    const auto it = std::lower_bound(subsets.begin(), subsets.end(), s, subset_less);
    require(it != subsets.end() && *it == s, "RaySet: no ray for subset " + to_string(s));
    return static_cast<std::size_t>(it - subsets.begin());
  }
  const RatVector& operator[](const Subset& s) const { return vectors[index_of(s)]; }
};

/// r_S = 1 on the complement of S when 0 is in S, otherwise -1 on S.
inline RatVector ray_of(const Subset& s, std::size_t n) {
  RatVector r(n);
  const bool has_zero = !s.empty() && s.front() == 0;
  if (has_zero) {
    for (int i : complement(s, n)) r[static_cast<std::size_t>(i - 1)] = 1;
  } else {
    for (int i : s) r[static_cast<std::size_t>(i - 1)] = -1;
  }
  return r;
}

inline RaySet rays(std::size_t n = 4) {
  require(n >= 1, "rays: dimension must be positive");
  RaySet out;
  out.n = n;
  out.subsets = subsets_of(n, /*proper=*/true);
  for (const auto& s : out.subsets) out.vectors.push_back(ray_of(s, n));
  return out;
}

/// g_M(x) = max_{i in M} x_i with x_0 = 0.
inline Rational g_value(const Subset& M, const RatVector& x) {
  require(!M.empty(), "g_value: empty index set");
  auto coord = [&](int i) { return i == 0 ? Rational() : x[static_cast<std::size_t>(i - 1)]; };
  Rational best = coord(M.front());
  for (int i : M) best = linalg::max(best, coord(i));
  return best;
}

/// Values of the basis functions g_M (M not in {{}, {0}}) on all rays.
/// values(f, r) = g_{functions[f]}(r_{rays.subsets[r]}).
struct BasisTable {
  RaySet ray_set;
  std::vector<Subset> functions;
  RatMatrix values;
  std::vector<std::size_t> small;    // |M| <= 2: outputs of one hidden layer
  std::vector<std::size_t> all_but_full;  // every M except {0..n}

  std::size_t index_of(const Subset& M) const {
    const auto it = std::lower_bound(functions.begin(), functions.end(), M, subset_less);
    require(it != functions.end() && *it == M, "BasisTable: no basis function for " + to_string(M));
    return static_cast<std::size_t>(it - functions.begin());
  }
};

using SubsetValues = std::map<Subset, Rational>;

inline BasisTable basis_table(std::size_t n = 4) {
  BasisTable t;
  t.ray_set = rays(n);
  for (auto& M : subsets_of(n, /*proper=*/false))
    if (!M.empty() && M != Subset{0}) t.functions.push_back(std::move(M));
  t.values = RatMatrix(t.functions.size(), t.ray_set.size());
  for (std::size_t f = 0; f < t.functions.size(); ++f) {
    for (std::size_t r = 0; r < t.ray_set.size(); ++r) t.values(f, r) = g_value(t.functions[f], t.ray_set.vectors[r]);
    if (t.functions[f].size() <= 2) t.small.push_back(f);
    if (t.functions[f].size() != n + 1) t.all_but_full.push_back(f);
  }
  require(linalg::rank(t.values) == t.functions.size(), "basis_table: evaluation table is singular");
  return t;
}

/// Row f of the table as a value per ray subset.
inline SubsetValues column_values(const BasisTable& t, std::size_t f) {
  SubsetValues out;
  for (std::size_t r = 0; r < t.ray_set.size(); ++r) out[t.ray_set.subsets[r]] = t.values(f, r);
  return out;
}

/// Values per ray of sum_f coeffs[f] * g_{functions[f]}.
inline SubsetValues combination_values(const BasisTable& t, const std::vector<std::pair<std::size_t, Rational>>& coeffs) {
  SubsetValues out;
  for (std::size_t r = 0; r < t.ray_set.size(); ++r) {
    Rational v;
    for (const auto& [f, c] : coeffs) v += c * t.values(f, r);
    out[t.ray_set.subsets[r]] = v;
  }
  return out;
}

namespace detail {

inline void require_complete(const SubsetValues& values, const RaySet& R, const char* op) {
  for (const auto& s : R.subsets)
    require(values.count(s) == 1, std::string(op) + ": missing value for subset " + to_string(s));
  require(values.size() == R.size(), std::string(op) + ": values given for subsets that are not rays");
}

}  // namespace detail

/// sum over rays of (-1)^|S| g(r_S).
inline Rational phi(const SubsetValues& values, std::size_t n = 4) {
  const RaySet R = rays(n);
  detail::require_complete(values, R, "phi");
  Rational total;
  for (const auto& s : R.subsets) {
    if (s.size() % 2 == 0)
      total += values.at(s);
    else
      total -= values.at(s);
  }
  return total;
}

/// Pairs S strictly inside S', both proper nonempty subsets of {0..n}.
inline std::vector<std::pair<Subset, Subset>> nested_pairs(std::size_t n = 4) {
  const auto subsets = subsets_of(n, /*proper=*/true);
  std::vector<std::pair<Subset, Subset>> out;
  for (const auto& s : subsets)
    for (const auto& t : subsets)
      if (is_proper_subset(s, t)) out.emplace_back(s, t);
  return out;
}

struct ConformityReport {
  bool conforming = true;
  std::optional<std::pair<Subset, Subset>> violation;
};

/// relu(g) keeps the breakpoints of g iff no nested pair of rays carries
/// nonzero values of opposite sign.
inline ConformityReport conforming_check(const SubsetValues& values, std::size_t n = 4) {
  detail::require_complete(values, rays(n), "conforming_check");
  for (const auto& [s, t] : nested_pairs(n)) {
    const int a = values.at(s).sign();
    const int b = values.at(t).sign();
    if (a * b < 0) return {false, std::make_pair(s, t)};
  }
  return {};
}

}  // namespace cpwlkit::depthgate
