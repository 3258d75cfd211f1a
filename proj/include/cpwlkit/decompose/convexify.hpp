#pragma once

#include <utility>
#include <vector>

#include "cpwlkit/cpwl/expr.hpp"
#include "cpwlkit/error.hpp"

namespace cpwlkit::decompose {

/// f = g - h with g and h convex.
struct ConvexSplit {
  cpwl::CpwlExpr g;
  cpwl::CpwlExpr h;
};

/// h = sum over pairs i < j of max{piece_i, piece_j}, g = f + h. With the
/// affine pieces of f (or a superset) both g and h are convex.
inline ConvexSplit convexify(const cpwl::CpwlExpr& f, const std::vector<cpwl::AffineTerm>& pieces) {
  require(!pieces.empty(), "convexify: empty piece list");
  for (const auto& p : pieces) require(p.dim() == f.dim(), "convexify: piece dimension differs from expression");
  std::vector<cpwl::Summand> pairs;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j)
      pairs.push_back({linalg::Rational(1), cpwl::MaxTerm({pieces[i], pieces[j]})});
  cpwl::CpwlExpr h(f.dim(), std::move(pairs));
  return {f + h, std::move(h)};
}

/// Positive-coefficient summands go to g, negated negative ones to h.
inline ConvexSplit split_by_sign(const cpwl::CpwlExpr& f) {
  std::vector<cpwl::Summand> pos, neg;
  for (const auto& s : f.summands()) {
    if (s.coeff.sign() > 0)
      pos.push_back(s);
    else
      neg.push_back({-s.coeff, s.term});
  }
  return {cpwl::CpwlExpr(f.dim(), std::move(pos)), cpwl::CpwlExpr(f.dim(), std::move(neg))};
}

}  // namespace cpwlkit::decompose
