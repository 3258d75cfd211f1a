#pragma once

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cpwlkit/error.hpp"
#include "cpwlkit/linalg/json.hpp"
#include "cpwlkit/linalg/matrix.hpp"

namespace cpwlkit::compile {

using linalg::Rational;
using linalg::RatMatrix;
using linalg::RatVector;

struct Layer {
  RatMatrix A;
  RatVector b;

  std::size_t width() const { return A.rows(); }
  friend bool operator==(const Layer&, const Layer&) = default;
};

/// x -> out_A * relu(A_k ... relu(A_1 x + b_1) ... + b_k) + out_b, with a
/// single output neuron.
class ReluNetwork {
 public:
  ReluNetwork() = default;
  ReluNetwork(std::size_t input_dim, std::vector<Layer> hidden, RatMatrix out_A, Rational out_b = Rational())
      : input_dim_(input_dim), hidden_(std::move(hidden)), out_A_(std::move(out_A)), out_b_(std::move(out_b)) {
    std::size_t prev = input_dim_;
    for (std::size_t l = 0; l < hidden_.size(); ++l) {
      const auto& layer = hidden_[l];
      require(layer.A.cols() == prev, "ReluNetwork: layer " + std::to_string(l + 1) + " expects " +
                                          std::to_string(layer.A.cols()) + " inputs, previous layer has " +
                                          std::to_string(prev));
      require(layer.b.size() == layer.A.rows(), "ReluNetwork: bias size differs from layer width in layer " +
                                                    std::to_string(l + 1));
      prev = layer.A.rows();
    }
    require(out_A_.rows() == 1, "ReluNetwork: output layer must have exactly one row");
    require(out_A_.cols() == prev, "ReluNetwork: output layer expects " + std::to_string(out_A_.cols()) +
                                       " inputs, last hidden layer has " + std::to_string(prev));
  }

  std::size_t input_dim() const { return input_dim_; }
  const std::vector<Layer>& hidden() const { return hidden_; }
  const RatMatrix& out_A() const { return out_A_; }
  const Rational& out_b() const { return out_b_; }
  std::size_t hidden_depth() const { return hidden_.size(); }

  friend bool operator==(const ReluNetwork&, const ReluNetwork&) = default;

 private:
  std::size_t input_dim_ = 0;
  std::vector<Layer> hidden_;
  RatMatrix out_A_{1, 0};
  Rational out_b_;
};

inline RatVector relu(RatVector v) {
  for (auto& x : v)
    if (x.sign() < 0) x = 0;
  return v;
}

inline Rational eval_network(const ReluNetwork& net, const RatVector& x) {
  require(x.size() == net.input_dim(), "eval_network: input has dimension " + std::to_string(x.size()) +
                                           ", network expects " + std::to_string(net.input_dim()));
  RatVector v = x;
  for (const auto& layer : net.hidden()) v = relu(layer.A * v + layer.b);
  return (net.out_A() * v)[0] + net.out_b();
}

/// Same weights, all biases (including the output bias) set to zero.
inline ReluNetwork homogenize(const ReluNetwork& net) {
  std::vector<Layer> hidden = net.hidden();
  for (auto& layer : hidden) layer.b = RatVector(layer.b.size());
  return ReluNetwork(net.input_dim(), std::move(hidden), net.out_A());
}

inline bool is_bias_free(const ReluNetwork& net) {
  if (!net.out_b().is_zero()) return false;
  return std::all_of(net.hidden().begin(), net.hidden().end(), [](const Layer& l) { return l.b.is_zero(); });
}

struct NetworkStats {
  std::size_t depth = 1;
  std::size_t width = 0;
  std::size_t size = 0;

  friend bool operator==(const NetworkStats&, const NetworkStats&) = default;
};

inline NetworkStats network_stats(const ReluNetwork& net) {
  NetworkStats s;
  s.depth = net.hidden_depth() + 1;
  for (const auto& layer : net.hidden()) {
    s.width = std::max(s.width, layer.width());
    s.size += layer.width();
  }
  return s;
}

// JSON: {"input_dim": n, "layers": [{"A": [[..]], "b": [..]}], "out": {"A": [[..]], "b": ".."}}

inline void to_json(nlohmann::json& j, const ReluNetwork& net) {
  j = nlohmann::json::object();
  j["input_dim"] = net.input_dim();
  j["layers"] = nlohmann::json::array();
  for (const auto& layer : net.hidden()) j["layers"].push_back({{"A", layer.A}, {"b", layer.b}});
  j["out"] = {{"A", net.out_A()}, {"b", net.out_b()}};
}

inline ReluNetwork network_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("layers") || !j.contains("out"))
    throw ParseError("network JSON needs \"layers\" and \"out\"", 0, 0);
  std::vector<Layer> hidden;
  std::size_t prev = 0;
  bool have_prev = j.contains("input_dim");
  if (have_prev) prev = j.at("input_dim").get<std::size_t>();
  for (const auto& l : j.at("layers")) {
    RatMatrix A = linalg::matrix_from_json(l.at("A"), prev);
    if (!have_prev) {
      prev = A.cols();
      have_prev = true;
    }
    const std::size_t width = A.rows();
    RatVector b = l.contains("b") ? l.at("b").get<RatVector>() : RatVector(width);
    hidden.push_back({std::move(A), std::move(b)});
    prev = width;
  }
  const auto& out = j.at("out");
  RatMatrix out_A = linalg::matrix_from_json(out.at("A"), prev);
  Rational out_b = out.contains("b") ? out.at("b").get<Rational>() : Rational();
  std::size_t input_dim = j.contains("input_dim") ? j.at("input_dim").get<std::size_t>()
                          : hidden.empty()        ? out_A.cols()
                                                  : hidden.front().A.cols();
  try {
    return ReluNetwork(input_dim, std::move(hidden), std::move(out_A), std::move(out_b));
  } catch (const ContractError& e) {
    throw ParseError(e.what(), 0, 0);
  }
}

/// Graphviz rendering of the layered graph: neurons as nodes labeled with
/// their bias, arcs labeled with nonzero weights.
inline std::string to_dot(const ReluNetwork& net) {
  std::ostringstream os;
  os << "digraph relu_network {\n  rankdir=LR;\n  node [shape=circle];\n";
  auto name = [](std::size_t layer, std::size_t i) { return "n" + std::to_string(layer) + "_" + std::to_string(i); };
  os << "  subgraph cluster_0 { label=\"input\"; color=none;";
  for (std::size_t i = 0; i < net.input_dim(); ++i) os << ' ' << name(0, i) << " [label=\"x" << i + 1 << "\"];";
  os << " }\n";
  auto edges = [&](const RatMatrix& A, std::size_t from, std::size_t to) {
    for (std::size_t r = 0; r < A.rows(); ++r)
      for (std::size_t c = 0; c < A.cols(); ++c)
        if (!A(r, c).is_zero())
          os << "  " << name(from, c) << " -> " << name(to, r) << " [label=\"" << A(r, c) << "\"];\n";
  };
  for (std::size_t l = 0; l < net.hidden().size(); ++l) {
    const auto& layer = net.hidden()[l];
    os << "  subgraph cluster_" << l + 1 << " { label=\"hidden " << l + 1 << "\"; color=none;";
    for (std::size_t i = 0; i < layer.width(); ++i) {
      os << ' ' << name(l + 1, i) << " [label=\"relu";
      if (!layer.b[i].is_zero()) os << "\\n" << layer.b[i];
      os << "\"];";
    }
    os << " }\n";
    edges(layer.A, l, l + 1);
  }
  const std::size_t k = net.hidden().size() + 1;
  os << "  " << name(k, 0) << " [label=\"y";
  if (!net.out_b().is_zero()) os << "\\n" << net.out_b();
  os << "\", shape=doublecircle];\n";
  edges(net.out_A(), k - 1, k);
  os << "}\n";
  return os.str();
}

}  // namespace cpwlkit::compile
