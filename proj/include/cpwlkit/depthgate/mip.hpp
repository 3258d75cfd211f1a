#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cpwlkit/depthgate/rays.hpp"
#include "cpwlkit/error.hpp"
#include "cpwlkit/linalg/simplex.hpp"

namespace cpwlkit::depthgate {

using linalg::Sense;

enum class VarKind : std::uint8_t { Continuous, Binary };

struct MipVariable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  std::optional<Rational> lower;
  std::optional<Rational> upper;
};

using LinearTerms = std::vector<std::pair<std::size_t, Rational>>;

struct MipConstraint {
  std::string name;
  LinearTerms terms;
  Sense sense = Sense::LessEqual;
  Rational rhs;
};

struct MipModel {
  std::string name = "MODEL";
  std::vector<MipVariable> variables;
  std::vector<MipConstraint> constraints;
  LinearTerms objective;
  bool maximize = true;

  std::size_t add_variable(MipVariable v) {
    variables.push_back(std::move(v));
    return variables.size() - 1;
  }

  std::size_t count(VarKind kind) const {
    std::size_t c = 0;
    for (const auto& v : variables) c += v.kind == kind;
    return c;
  }

  std::size_t inequality_count() const {
    std::size_t c = 0;
    for (const auto& r : constraints) c += r.sense != Sense::Equal;
    return c;
  }

  std::optional<std::size_t> find_variable(const std::string& n) const {
    for (std::size_t j = 0; j < variables.size(); ++j)
      if (variables[j].name == n) return j;
    return std::nullopt;
  }

  void validate() const {
    std::set<std::string> names;
    for (const auto& v : variables) {
      require(names.insert(v.name).second, "MipModel: duplicate variable name " + v.name);
      require(!(v.lower && v.upper && *v.upper < *v.lower), "MipModel: empty bounds on " + v.name);
      if (v.kind == VarKind::Binary)
        require(v.lower && v.upper && *v.lower == Rational(0) && *v.upper == Rational(1),
                "MipModel: binary variable " + v.name + " must have bounds [0, 1]");
    }
    auto check_terms = [&](const LinearTerms& terms, const std::string& where) {
      for (const auto& [j, c] : terms) require(j < variables.size(), "MipModel: " + where + " references an undeclared variable");
    };
    for (const auto& r : constraints) check_terms(r.terms, "constraint " + r.name);
    check_terms(objective, "objective");
  }

  /// LP relaxation in maximization form (binaries relaxed to [0, 1]).
  linalg::LpProblem relaxation() const {
    validate();
    linalg::LpProblem lp;
    const std::size_t n = variables.size();
    lp.objective = RatVector(n);
    for (const auto& [j, c] : objective) lp.objective[j] += maximize ? c : -c;
    lp.constraints = RatMatrix(constraints.size(), n);
    lp.rhs = RatVector(constraints.size());
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      for (const auto& [j, c] : constraints[i].terms) lp.constraints(i, j) += c;
      lp.senses.push_back(constraints[i].sense);
      lp.rhs[i] = constraints[i].rhs;
    }
    for (const auto& v : variables) lp.bounds.push_back({v.lower, v.upper});
    return lp;
  }

  Rational objective_value(const RatVector& x) const {
    Rational v;
    for (const auto& [j, c] : objective) v += c * x[j];
    return v;
  }

  /// Bounds, rows and integrality all hold exactly.
  bool is_feasible(const RatVector& x) const {
    if (x.size() != variables.size()) return false;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (variables[j].kind == VarKind::Binary && !x[j].is_integer()) return false;
    return linalg::satisfies(relaxation(), x);
  }
};

/// Structure shared by the full model and its low-dimensional analog: which
/// basis functions feed the neuron and where each variable lives.
struct ConformityMip {
  MipModel model;
  BasisTable table;
  std::vector<std::size_t> inputs;   // basis rows with a coefficient variable
  std::vector<std::size_t> a_vars;   // parallel to inputs
  std::vector<std::size_t> z_vars;   // parallel to table.ray_set.subsets
  std::vector<std::size_t> y_vars;
  Rational big_m;
};

/// One second-layer neuron relu(sum_M a_M g_M) over the rays, with
/// big-M ReLU rows per ray and conformity rows per nested pair; maximizes
/// sum (-1)^|S| y_S.
inline ConformityMip build_conformity_mip(std::size_t n, const std::vector<Subset>& input_functions, Rational big_m,
                                          std::string name) {
  ConformityMip m;
  m.table = basis_table(n);
  m.big_m = big_m;
  MipModel& model = m.model;
  model.name = std::move(name);
  const auto& subsets = m.table.ray_set.subsets;

  for (const auto& M : input_functions) {
    m.inputs.push_back(m.table.index_of(M));
    m.a_vars.push_back(model.add_variable({"a_" + label(M), VarKind::Continuous, Rational(-1), Rational(1)}));
  }
  for (const auto& S : subsets)
    m.z_vars.push_back(model.add_variable({"z_" + label(S), VarKind::Binary, Rational(0), Rational(1)}));
  for (const auto& S : subsets)
    m.y_vars.push_back(model.add_variable({"y_" + label(S), VarKind::Continuous, std::nullopt, std::nullopt}));

  // sum_M a_M g_M(r_S) as terms, plus extra terms appended.
  auto activation = [&](std::size_t r, LinearTerms extra) {
    LinearTerms t;
    for (std::size_t k = 0; k < m.inputs.size(); ++k) {
      const Rational& g = m.table.values(m.inputs[k], r);
      if (!g.is_zero()) t.emplace_back(m.a_vars[k], g);
    }
    t.insert(t.end(), extra.begin(), extra.end());
    return t;
  };
  auto negated = [](LinearTerms t) {
    for (auto& [j, c] : t) c = -c;
    return t;
  };

  for (std::size_t r = 0; r < subsets.size(); ++r) {
    const std::string l = label(subsets[r]);
    const std::size_t y = m.y_vars[r], z = m.z_vars[r];
    model.constraints.push_back({"P" + l, {{y, Rational(1)}}, Sense::GreaterEqual, Rational(0)});
    model.constraints.push_back(
        {"G" + l, negated(activation(r, {{y, Rational(-1)}})), Sense::GreaterEqual, Rational(0)});
    model.constraints.push_back({"U" + l, {{y, Rational(1)}, {z, -big_m}}, Sense::LessEqual, Rational(0)});
    model.constraints.push_back(
        {"L" + l, negated(activation(r, {{y, Rational(-1)}, {z, -big_m}})), Sense::LessEqual, big_m});
  }

  std::size_t pair_no = 0;
  for (const auto& [S, T] : nested_pairs(n)) {
    ++pair_no;
    const std::size_t rs = m.table.ray_set.index_of(S), rt = m.table.ray_set.index_of(T);
    std::string id = std::to_string(pair_no);
    id.insert(0, id.size() < 3 ? 3 - id.size() : 0, '0');
    model.constraints.push_back({"C" + id + "A", activation(rs, {{m.z_vars[rt], -big_m}}), Sense::GreaterEqual, -big_m});
    model.constraints.push_back({"C" + id + "B", activation(rt, {{m.z_vars[rs], -big_m}}), Sense::GreaterEqual, -big_m});
  }

  for (std::size_t r = 0; r < subsets.size(); ++r)
    model.objective.emplace_back(m.y_vars[r], subsets[r].size() % 2 == 0 ? Rational(1) : Rational(-1));
  model.validate();
  return m;
}

/// Inputs of the full model: the 14 basis functions with |M| <= 2.
inline ConformityMip build_mip_structured() {
  const BasisTable t = basis_table(4);
  std::vector<Subset> inputs;
  for (std::size_t f : t.small) inputs.push_back(t.functions[f]);
  return build_conformity_mip(4, inputs, Rational(15), "DEPTHMIP");
}

inline MipModel build_mip() { return build_mip_structured().model; }

/// Planar analog: linear inputs g_{1}, g_{2} only; |activation| <= 2.
inline ConformityMip build_mip_analog_2d_structured() {
  return build_conformity_mip(2, {{1}, {2}}, Rational(3), "ANALOG2D");
}

inline MipModel build_mip_analog_2d() { return build_mip_analog_2d_structured().model; }

}  // namespace cpwlkit::depthgate
