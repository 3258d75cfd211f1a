#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cpwlkit/compile/network.hpp"
#include "cpwlkit/cpwl/expr.hpp"
#include "cpwlkit/error.hpp"

namespace cpwlkit::compile {

/// w^T u + c, where u are the units of the current top layer (the inputs
/// before any hidden layer exists).
struct LinearForm {
  RatVector w;
  Rational c;
};

/// Hidden layers under construction plus the values they carry, grouped in
/// lanes; every lane is reduced to its maximum by the two-input gadget
///   max{u, v} = relu(u - v) + relu(v) - relu(-v).
class LayeredBuilder {
 public:
  explicit LayeredBuilder(std::size_t input_dim) : input_dim_(input_dim), top_width_(input_dim) {}

  std::size_t top_width() const { return top_width_; }

  /// Starts a new hidden layer whose neurons are relu(form) for the given
  /// forms over the current top layer. Returns the index of the first one.
  class LayerDraft {
   public:
    std::size_t add(const LinearForm& f) {
      rows_.push_back(f);
      return rows_.size() - 1;
    }
    std::size_t size() const { return rows_.size(); }

   private:
    friend class LayeredBuilder;
    std::vector<LinearForm> rows_;
  };

  void commit(const LayerDraft& draft) {
    Layer layer{RatMatrix(draft.rows_.size(), top_width_), RatVector(draft.rows_.size())};
    for (std::size_t r = 0; r < draft.rows_.size(); ++r) {
      require(draft.rows_[r].w.size() == top_width_, "LayeredBuilder: form over the wrong layer");
      for (std::size_t c = 0; c < top_width_; ++c) layer.A(r, c) = draft.rows_[r].w[c];
      layer.b[r] = draft.rows_[r].c;
    }
    top_width_ = draft.rows_.size();
    hidden_.push_back(std::move(layer));
  }

  /// One gadget level for every lane: values are paired left to right, an
  /// unpaired last value goes through relu(w) - relu(-w). Lanes already
  /// holding one value are forwarded the same way.
  void max_level(std::vector<std::vector<LinearForm>>& lanes) {
    LayerDraft draft;
    // Sparse results: (neuron index, weight) lists, sized once the layer is known.
    std::vector<std::vector<std::vector<std::pair<std::size_t, int>>>> results(lanes.size());
    for (std::size_t l = 0; l < lanes.size(); ++l) {
      const auto& vals = lanes[l];
      for (std::size_t i = 0; i + 1 < vals.size(); i += 2) {
        const LinearForm& u = vals[i];
        const LinearForm& v = vals[i + 1];
        const std::size_t r1 = draft.add({u.w - v.w, u.c - v.c});
        const std::size_t r2 = draft.add(v);
        const std::size_t r3 = draft.add({-v.w, -v.c});
        results[l].push_back({{r1, 1}, {r2, 1}, {r3, -1}});
      }
      if (vals.size() % 2 == 1) {
        const LinearForm& w = vals.back();
        const std::size_t r1 = draft.add(w);
        const std::size_t r2 = draft.add({-w.w, -w.c});
        results[l].push_back({{r1, 1}, {r2, -1}});
      }
    }
    commit(draft);
    for (std::size_t l = 0; l < lanes.size(); ++l) {
      lanes[l].clear();
      for (const auto& sparse : results[l]) {
        LinearForm f{RatVector(top_width_), Rational()};
        for (const auto& [idx, weight] : sparse) f.w[idx] = weight;
        lanes[l].push_back(std::move(f));
      }
    }
  }

  ReluNetwork finish(const LinearForm& output) const {
    require(output.w.size() == top_width_, "LayeredBuilder: output form over the wrong layer");
    RatMatrix out(1, top_width_);
    for (std::size_t c = 0; c < top_width_; ++c) out(0, c) = output.w[c];
    return ReluNetwork(input_dim_, hidden_, std::move(out), output.c);
  }

 private:
  std::size_t input_dim_;
  std::size_t top_width_;
  std::vector<Layer> hidden_;
};

inline std::size_t ceil_log2(std::size_t p) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < p) ++k;
  return k;
}

inline LinearForm form_of(const cpwl::AffineTerm& t) { return {t.a, t.b}; }

/// Networks computing sum_j coeffs[j] * max(lanes[j]) with all lanes reduced
/// in parallel; hidden depth ceil(log2(max lane size)).
inline ReluNetwork compile_lanes(std::size_t input_dim, const std::vector<std::vector<cpwl::AffineTerm>>& lanes,
                                 const std::vector<Rational>& coeffs) {
  require(lanes.size() == coeffs.size(), "compile_lanes: one coefficient per lane required");
  LayeredBuilder builder(input_dim);
  std::vector<std::vector<LinearForm>> values;
  std::size_t depth = 0;
  for (const auto& lane : lanes) {
    require(!lane.empty(), "compile_lanes: empty lane");
    std::vector<LinearForm> forms;
    for (const auto& t : lane) {
      require(t.dim() == input_dim, "compile_lanes: affine term dimension differs from input dimension");
      forms.push_back(form_of(t));
    }
    values.push_back(std::move(forms));
    depth = std::max(depth, ceil_log2(lane.size()));
  }
  for (std::size_t level = 0; level < depth; ++level) builder.max_level(values);
  LinearForm out{RatVector(builder.top_width()), Rational()};
  for (std::size_t j = 0; j < values.size(); ++j) {
    out.w += coeffs[j] * values[j].front().w;
    out.c += coeffs[j] * values[j].front().c;
  }
  return builder.finish(out);
}

/// Binary tree of max gadgets over p affine terms; ceil(log2 p) hidden
/// layers, adjacent linear maps fused.
inline ReluNetwork max_tree(const std::vector<cpwl::AffineTerm>& terms) {
  require(!terms.empty(), "max_tree: empty term list");
  return compile_lanes(terms.front().dim(), {terms}, {Rational(1)});
}

}  // namespace cpwlkit::compile
