#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cpwlkit/compile/max_tree.hpp"
#include "cpwlkit/compile/network.hpp"
#include "cpwlkit/cpwl/expr.hpp"
#include "cpwlkit/cpwl/pieces.hpp"
#include "cpwlkit/decompose/convexify.hpp"
#include "cpwlkit/decompose/reduce.hpp"
#include "cpwlkit/error.hpp"

namespace cpwlkit::compile {

/// One max tree per summand, side by side, combined by the output layer.
inline ReluNetwork compile_expr(const cpwl::CpwlExpr& expr) {
  std::vector<std::vector<cpwl::AffineTerm>> lanes;
  std::vector<Rational> coeffs;
  for (const auto& s : expr.summands()) {
    lanes.push_back(s.term.terms());
    coeffs.push_back(s.coeff);
  }
  return compile_lanes(expr.dim(), lanes, coeffs);
}

enum class SplitRoute : std::uint8_t {
  BySign,     // f = (positive summands) - (negated negative summands)
  Convexify,  // f = g - h with h the pairwise max over the pieces of f
};

/// Expression with every max term reduced to at most n+1 affine terms.
inline cpwl::CpwlExpr reduce_expr(const cpwl::CpwlExpr& f) {
  cpwl::CpwlExpr out(f.dim());
  for (const auto& s : f.summands()) out += s.coeff * decompose::reduce_to_nplus1(s.term).expr;
  return out;
}

/// The function of `expr` as a signed sum of maxes over at most n+1 terms.
inline cpwl::CpwlExpr min_depth_form(const cpwl::CpwlExpr& expr, SplitRoute route = SplitRoute::BySign) {
  if (route == SplitRoute::BySign) {
    const auto [g, h] = decompose::split_by_sign(expr);
    return reduce_expr(g) - reduce_expr(h);
  }
  const auto [g, h] = decompose::convexify(expr, cpwl::enumerate_pieces(expr));
  // g and h are convex, hence each equals the max over its own pieces.
  auto as_max = [](const cpwl::CpwlExpr& e) {
    return decompose::reduce_to_nplus1(cpwl::MaxTerm(cpwl::enumerate_pieces(e))).expr;
  };
  return as_max(g) - as_max(h);
}

/// Network of hidden depth at most ceil(log2(n+1)) computing expr.
inline ReluNetwork compile_min_depth(const cpwl::CpwlExpr& expr, SplitRoute route = SplitRoute::BySign) {
  ReluNetwork net = compile_expr(min_depth_form(expr, route));
  require(net.hidden_depth() <= ceil_log2(expr.dim() + 1),
          "compile_min_depth: produced " + std::to_string(net.hidden_depth()) + " hidden layers, bound is " +
              std::to_string(ceil_log2(expr.dim() + 1)));
  return net;
}

struct Witness {
  cpwl::CpwlExpr expr;
  ReluNetwork net;
};

/// f(x) = max{0, x_1, ..., x_{n-3}, max{x_{n-2}, x_{n-1}} + max{0, x_n}}
/// for n = 2^k >= 4, and a network with k hidden layers: the first layer
/// computes the n/2 values max{0,x_1}, max{x_{2i},x_{2i+1}} (i <= n/2 - 2)
/// and max{x_{n-2},x_{n-1}} + max{0,x_n}; a max tree of depth k-1 follows.
inline Witness richer_witness(std::size_t n) {
  require(n >= 4 && (n & (n - 1)) == 0, "richer_witness: n must be a power of two >= 4, got " + std::to_string(n));
  auto x = [n](std::size_t i) { return cpwl::AffineTerm::variable(n, i - 1); };
  std::vector<cpwl::AffineTerm> terms{cpwl::AffineTerm::constant(n, 0)};
  for (std::size_t i = 1; i + 3 <= n; ++i) terms.push_back(x(i));
  terms.push_back(x(n - 2));
  terms.push_back(x(n - 1));
  terms.push_back(x(n - 2) + x(n));
  terms.push_back(x(n - 1) + x(n));
  cpwl::CpwlExpr expr(cpwl::MaxTerm(std::move(terms)));

  LayeredBuilder builder(n);
  LayeredBuilder::LayerDraft first;
  auto input = [n](std::size_t i) { return LinearForm{RatVector::unit(n, i - 1), Rational()}; };
  auto minus = [](const LinearForm& u, const LinearForm& v) { return LinearForm{u.w - v.w, u.c - v.c}; };
  auto negate = [](const LinearForm& v) { return LinearForm{-v.w, -v.c}; };
  // Each value: list of (neuron, weight) over the first hidden layer.
  std::vector<std::vector<std::pair<std::size_t, int>>> values;
  values.push_back({{first.add(input(1)), 1}});
  auto gadget = [&](std::size_t a, std::size_t b) {
    return std::vector<std::pair<std::size_t, int>>{{first.add(minus(input(a), input(b))), 1},
                                                    {first.add(input(b)), 1},
                                                    {first.add(negate(input(b))), -1}};
  };
  for (std::size_t i = 1; i + 2 <= n / 2; ++i) values.push_back(gadget(2 * i, 2 * i + 1));
  auto last = gadget(n - 2, n - 1);
  last.push_back({first.add(input(n)), 1});
  values.push_back(std::move(last));
  builder.commit(first);

  std::vector<std::vector<LinearForm>> lanes(1);
  for (const auto& sparse : values) {
    LinearForm f{RatVector(builder.top_width()), Rational()};
    for (const auto& [idx, w] : sparse) f.w[idx] = w;
    lanes[0].push_back(std::move(f));
  }
  const std::size_t k = ceil_log2(n);
  for (std::size_t level = 0; level + 1 < k; ++level) builder.max_level(lanes);
  return {std::move(expr), builder.finish(lanes[0].front())};
}

}  // namespace cpwlkit::compile
