#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cpwlkit/cpwl/expr.hpp"
#include "cpwlkit/error.hpp"
#include "cpwlkit/linalg/solve.hpp"

namespace cpwlkit::decompose {

using cpwl::CpwlExpr;
using cpwl::MaxTerm;
using linalg::Rational;
using linalg::RatVector;

/// Radon split of the gradient points of a max term. Indices refer to the
/// canonical term order. Both weight lists are nonnegative and sum to 1, and
/// sum(lambda_U * a_U) = sum(lambda_rest * a_rest).
struct RadonSubset {
  std::vector<std::size_t> U;
  std::vector<Rational> lambda_U;
  std::vector<std::size_t> rest;
  std::vector<Rational> lambda_rest;
};

inline RadonSubset radon_subset(const MaxTerm& term) {
  const std::size_t n = term.dim(), p = term.size();
  require(p > n + 1, "radon_subset: needs more than n+1 = " + std::to_string(n + 1) + " terms, got " +
                         std::to_string(p));
  std::vector<RatVector> points;
  points.reserve(p);
  for (const auto& t : term.terms()) points.push_back(t.a);
  const auto dep = linalg::affine_dependence(points);

  struct Side {
    std::vector<std::size_t> idx;
    std::vector<Rational> w;
    Rational b_sum;
  };
  Side pos, neg;
  Rational total;
  for (std::size_t k = 0; k < dep.support.size(); ++k) {
    const Rational& l = dep.lambda[k];
    if (l.sign() > 0) {
      pos.idx.push_back(dep.support[k]);
      pos.w.push_back(l);
      total += l;
    } else if (l.sign() < 0) {
      neg.idx.push_back(dep.support[k]);
      neg.w.push_back(-l);
    }
  }
  // Both sides carry the same total weight since sum(lambda) = 0.
  for (Side* s : {&pos, &neg})
    for (std::size_t k = 0; k < s->idx.size(); ++k) {
      s->w[k] /= total;
      s->b_sum += s->w[k] * term[s->idx[k]].b;
    }

  bool pick_pos;
  if (pos.b_sum != neg.b_sum)
    pick_pos = pos.b_sum < neg.b_sum;
  else if (pos.idx.size() != neg.idx.size())
    pick_pos = pos.idx.size() < neg.idx.size();
  else
    pick_pos = pos.idx.front() < neg.idx.front();
  Side& u = pick_pos ? pos : neg;
  Side& r = pick_pos ? neg : pos;
  return {std::move(u.idx), std::move(u.w), std::move(r.idx), std::move(r.w)};
}

namespace detail {

/// Calls visit(W, sign) for every nonempty W subset of U with sign +1 for odd
/// |W| and -1 for even |W|, where the full max equals
/// sum_W sign * max over [p] \ W.
template <class Visit>
void for_each_radon_term(const MaxTerm& term, Visit&& visit) {
  const RadonSubset radon = radon_subset(term);
  const std::size_t u = radon.U.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << u); ++mask) {
    std::vector<bool> removed(term.size(), false);
    int count = 0;
    for (std::size_t k = 0; k < u; ++k)
      if (mask >> k & 1) {
        removed[radon.U[k]] = true;
        ++count;
      }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < term.size(); ++i)
      if (!removed[i]) keep.push_back(i);
    visit(keep, count % 2 == 1 ? 1 : -1);
  }
}

}  // namespace detail

/// One application of the even/odd identity: the full max as a signed sum of
/// maxes over proper subsets of the terms.
inline CpwlExpr one_step(const MaxTerm& term) {
  std::vector<cpwl::Summand> out;
  detail::for_each_radon_term(term, [&](const std::vector<std::size_t>& keep, int sign) {
    out.push_back({Rational(sign), term.subset(keep)});
  });
  return CpwlExpr(term.dim(), std::move(out));
}

/// sum over S of c_S * max_{i in S}(term_i), with |S| <= n+1 and integer c_S.
/// Subsets hold 0-based indices into the canonical term order.
struct Decomposition {
  CpwlExpr expr;
  std::map<std::vector<std::size_t>, Rational> coefficients;
  std::size_t steps = 0;     // one_step applications
  Rational max_abs_coeff;    // largest |c_S| in the result
};

inline Decomposition reduce_to_nplus1(const MaxTerm& term) {
  const std::size_t limit = term.dim() + 1;
  std::vector<std::size_t> all(term.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

  // Pending subsets that still have too many terms, largest first.
  auto larger_first = [](const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
    return x.size() != y.size() ? x.size() > y.size() : x < y;
  };
  std::map<std::vector<std::size_t>, Rational, decltype(larger_first)> pending(larger_first);
  Decomposition result{CpwlExpr(term.dim()), {}, 0, Rational()};
  auto add = [&](std::vector<std::size_t> subset, const Rational& c) {
    auto& target = subset.size() > limit ? pending[subset] : result.coefficients[subset];
    target += c;
  };
  add(all, Rational(1));

  while (!pending.empty()) {
    auto it = pending.begin();
    const std::vector<std::size_t> S = it->first;
    const Rational c = it->second;
    pending.erase(it);
    if (c.is_zero()) continue;
    ++result.steps;
    detail::for_each_radon_term(term.subset(S), [&](const std::vector<std::size_t>& keep, int sign) {
      std::vector<std::size_t> mapped;
      mapped.reserve(keep.size());
      for (std::size_t k : keep) mapped.push_back(S[k]);
      add(std::move(mapped), sign * c);
    });
  }

  std::erase_if(result.coefficients, [](const auto& kv) { return kv.second.is_zero(); });
  std::vector<cpwl::Summand> summands;
  for (const auto& [S, c] : result.coefficients) {
    summands.push_back({c, term.subset(S)});
    result.max_abs_coeff = linalg::max(result.max_abs_coeff, abs(c));
  }
  result.expr = CpwlExpr(term.dim(), std::move(summands));
  return result;
}

/// Sidecar form: [{"subset": [1-based indices], "coeff": "c"}, ...].
inline nlohmann::json coefficients_json(const Decomposition& d) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [S, c] : d.coefficients) {
    nlohmann::json subset = nlohmann::json::array();
    for (std::size_t i : S) subset.push_back(i + 1);
    out.push_back({{"subset", subset}, {"coeff", c.str()}});
  }
  return out;
}

}  // namespace cpwlkit::decompose
