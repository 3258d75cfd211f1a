#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "cpwlkit/depthgate/bnb.hpp"
#include "cpwlkit/depthgate/mip.hpp"
#include "cpwlkit/depthgate/rays.hpp"
#include "cpwlkit/error.hpp"
#include "cpwlkit/linalg/solve.hpp"

namespace cpwlkit::depthgate {

/// The second-layer neuron described by a solution: input coefficients, its
/// pre-activation and output on every ray, and phi of the output.
struct DecodedNeuron {
  std::vector<Rational> a;
  SubsetValues activation;
  SubsetValues output;
  Rational phi_value;
};

inline SubsetValues activation_of(const ConformityMip& m, const std::vector<Rational>& a) {
  require(a.size() == m.inputs.size(), "activation_of: expected " + std::to_string(m.inputs.size()) + " coefficients");
  std::vector<std::pair<std::size_t, Rational>> coeffs;
  for (std::size_t k = 0; k < a.size(); ++k) coeffs.emplace_back(m.inputs[k], a[k]);
  return combination_values(m.table, coeffs);
}

/// Checks that x is a consistent neuron: |activation| < big-M, y = relu of
/// the activation exactly, z agrees with the activation sign, the
/// activation is conforming and the objective equals phi(y).
inline DecodedNeuron decode_and_verify(const ConformityMip& m, const RatVector& x) {
  require(x.size() == m.model.variables.size(), "decode_and_verify: solution has the wrong length");
  DecodedNeuron d;
  for (std::size_t v : m.a_vars) d.a.push_back(x[v]);
  d.activation = activation_of(m, d.a);
  const auto& subsets = m.table.ray_set.subsets;
  for (std::size_t r = 0; r < subsets.size(); ++r) {
    const Subset& S = subsets[r];
    const Rational& g = d.activation.at(S);
    require(abs(g) < m.big_m, "decode_and_verify: activation at " + to_string(S) + " exceeds the big-M range");
    const Rational y = linalg::max(Rational(), g);
    require(x[m.y_vars[r]] == y, "decode_and_verify: y at " + to_string(S) + " is " + x[m.y_vars[r]].str() +
                                     ", relu of the activation is " + y.str());
    const Rational& z = x[m.z_vars[r]];
    require(z == Rational(0) || z == Rational(1), "decode_and_verify: z at " + to_string(S) + " is not binary");
    require(z == Rational(1) ? g.sign() >= 0 : g.sign() <= 0,
            "decode_and_verify: z at " + to_string(S) + " disagrees with the activation sign");
    d.output[S] = y;
  }
  const auto report = conforming_check(d.activation, m.table.ray_set.n);
  require(report.conforming, "decode_and_verify: activation is not conforming at " +
                                 (report.violation ? to_string(report.violation->first) + " < " +
                                                         to_string(report.violation->second)
                                                   : std::string()));
  d.phi_value = phi(d.output, m.table.ray_set.n);
  require(d.phi_value == m.model.objective_value(x), "decode_and_verify: objective differs from phi of the output");
  return d;
}

/// Solution for coefficients a with y = relu(activation) and z = 1 exactly
/// where the activation is positive. Feasibility is left to the caller.
inline RatVector encode(const ConformityMip& m, const std::vector<Rational>& a) {
  const SubsetValues g = activation_of(m, a);
  RatVector x(m.model.variables.size());
  for (std::size_t k = 0; k < a.size(); ++k) x[m.a_vars[k]] = a[k];
  const auto& subsets = m.table.ray_set.subsets;
  for (std::size_t r = 0; r < subsets.size(); ++r) {
    const Rational& v = g.at(subsets[r]);
    x[m.y_vars[r]] = linalg::max(Rational(), v);
    x[m.z_vars[r]] = v.sign() > 0 ? 1 : 0;
  }
  return x;
}

/// Coefficients of x -> g(-x) for g = sum a_M g_M, i.e. the first layer with
/// all weights negated. Since -r_S = r_{complement of S}, the activation on
/// each ray is read off the complementary ray.
inline std::vector<Rational> reflect(const ConformityMip& m, const std::vector<Rational>& a) {
  const SubsetValues g = activation_of(m, a);
  const auto& R = m.table.ray_set;
  RatMatrix sys(R.size(), m.inputs.size());
  RatVector rhs(R.size());
  for (std::size_t r = 0; r < R.size(); ++r) {
    for (std::size_t k = 0; k < m.inputs.size(); ++k) sys(r, k) = m.table.values(m.inputs[k], r);
    rhs[r] = g.at(complement(R.subsets[r], R.n));
  }
  const auto sol = linalg::solve_linear(sys, rhs);
  const auto* unique = std::get_if<linalg::UniqueSolution>(&sol);
  require(unique != nullptr, "reflect: reflected activation is not a unique combination of the inputs");
  return std::vector<Rational>(unique->x.begin(), unique->x.end());
}

/// solve_mip followed by decode_and_verify of the incumbent.
inline MipResult solve_conformity_mip(const ConformityMip& m, const MipOptions& options = {},
                                      const BnbState* resume = nullptr) {
  MipResult r = solve_mip(m.model, options, resume);
  if (r.incumbent_value) decode_and_verify(m, r.incumbent);
  return r;
}

}  // namespace cpwlkit::depthgate
