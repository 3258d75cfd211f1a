#pragma once

#include <utility>
#include <vector>

#include "cpwlkit/compile/network.hpp"
#include "cpwlkit/error.hpp"
#include "cpwlkit/geometry/pointset.hpp"

namespace cpwlkit::geometry {

/// Pair (P, Q) of Newton polytopes with f = h_P - h_Q, where h_X is the
/// support function of X.
struct NewtonPair {
  PointSet P;
  PointSet Q;
};

namespace detail {

/// sum_j w_j (G_j - H_j) split into (positive part, negative part) Newton
/// polytopes, with |w| scaling moved to the side given by the sign.
inline NewtonPair combine(const std::vector<NewtonPair>& inputs, const linalg::RatMatrix& A, std::size_t row,
                          std::size_t dim) {
  PointSet g = PointSet::singleton(RatVector(dim));
  PointSet h = g;
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    const Rational& w = A(row, j);
    if (w.is_zero()) continue;
    const Rational s = abs(w);
    const auto& [Gj, Hj] = inputs[j];
    if (w.sign() > 0) {
      g = minkowski_sum(g, scale(Gj, s));
      h = minkowski_sum(h, scale(Hj, s));
    } else {
      g = minkowski_sum(g, scale(Hj, s));
      h = minkowski_sum(h, scale(Gj, s));
    }
  }
  return {std::move(g), std::move(h)};
}

}  // namespace detail

/// Newton polytopes of a convex-difference representation of a bias-free
/// network. Inputs start as x_j = h_{e_j} - h_{0}; every neuron computes
/// max{0, g - h} = max{g, h} - h, i.e. (conv(G u H), H); the output layer
/// splits by weight sign. Sets are pruned after every neuron.
inline NewtonPair newton_pair_of_network(const compile::ReluNetwork& net) {
  require(compile::is_bias_free(net), "newton_pair_of_network: network has nonzero biases (homogenize first)");
  const std::size_t n = net.input_dim();
  std::vector<NewtonPair> current;
  for (std::size_t j = 0; j < n; ++j)
    current.push_back({PointSet::singleton(RatVector::unit(n, j)), PointSet::singleton(RatVector(n))});
  for (const auto& layer : net.hidden()) {
    std::vector<NewtonPair> next;
    next.reserve(layer.width());
    for (std::size_t i = 0; i < layer.width(); ++i) {
      auto [g, h] = detail::combine(current, layer.A, i, n);
      next.push_back({conv_union(g, h), std::move(h)});
    }
    current = std::move(next);
  }
  return detail::combine(current, net.out_A(), 0, n);
}

}  // namespace cpwlkit::geometry
