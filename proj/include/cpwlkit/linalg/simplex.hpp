#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpwlkit/error.hpp"
#include "cpwlkit/linalg/matrix.hpp"

namespace cpwlkit::linalg {

enum class Sense : std::uint8_t { LessEqual, Equal, GreaterEqual };

/// Missing lower/upper bound means -inf/+inf.
struct VariableBounds {
  std::optional<Rational> lower;
  std::optional<Rational> upper;
};

/// maximize objective^T x  s.t.  constraints x (senses) rhs,  bounds on x.
struct LpProblem {
  RatVector objective;
  RatMatrix constraints;
  std::vector<Sense> senses;
  RatVector rhs;
  std::vector<VariableBounds> bounds;

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return rhs.size(); }

  void validate() const {
    require(constraints.cols() == objective.size() || constraints.rows() == 0,
            "LpProblem: constraint matrix has " + std::to_string(constraints.cols()) + " columns, expected " +
                std::to_string(objective.size()));
    require(constraints.rows() == rhs.size(), "LpProblem: constraint rows and rhs size differ");
    require(senses.size() == rhs.size(), "LpProblem: senses and rhs size differ");
    require(bounds.size() == objective.size(), "LpProblem: one bounds entry per variable required");
    for (std::size_t j = 0; j < bounds.size(); ++j) {
      const auto& b = bounds[j];
      require(!(b.lower && b.upper && *b.upper < *b.lower),
              "LpProblem: variable " + std::to_string(j) + " has lower bound above upper bound");
    }
  }
};

enum class LpStatus : std::uint8_t { Optimal, Unbounded, Infeasible };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::Infeasible: return "infeasible";
  }
  return "?";
}

/// Optimal: value, x (basic optimal solution) and duals (row multipliers,
/// >= 0 on <= rows, <= 0 on >= rows) whose dual_bound equals value.
/// Unbounded: x feasible and ray an improving recession direction.
/// Infeasible: farkas row multipliers, see is_farkas_certificate.
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  RatVector x;
  RatVector duals;
  RatVector ray;
  RatVector farkas;
};

// ---------------------------------------------------------------------------
// Certificate checks. These only use the problem data, never solver state.

inline bool satisfies(const LpProblem& p, const RatVector& x) {
  if (x.size() != p.num_vars()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (p.bounds[j].lower && x[j] < *p.bounds[j].lower) return false;
    if (p.bounds[j].upper && x[j] > *p.bounds[j].upper) return false;
  }
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    Rational lhs;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (!p.constraints(i, j).is_zero() && !x[j].is_zero()) lhs += p.constraints(i, j) * x[j];
    switch (p.senses[i]) {
      case Sense::LessEqual:
        if (lhs > p.rhs[i]) return false;
        break;
      case Sense::GreaterEqual:
        if (lhs < p.rhs[i]) return false;
        break;
      case Sense::Equal:
        if (lhs != p.rhs[i]) return false;
        break;
    }
  }
  return true;
}

inline bool is_improving_ray(const LpProblem& p, const RatVector& ray) {
  if (ray.size() != p.num_vars()) return false;
  for (std::size_t j = 0; j < ray.size(); ++j) {
    if (p.bounds[j].lower && ray[j].sign() < 0) return false;
    if (p.bounds[j].upper && ray[j].sign() > 0) return false;
  }
  const RatVector ad = p.constraints.rows() ? p.constraints * ray : RatVector();
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    const int s = ad[i].sign();
    if (p.senses[i] == Sense::LessEqual && s > 0) return false;
    if (p.senses[i] == Sense::GreaterEqual && s < 0) return false;
    if (p.senses[i] == Sense::Equal && s != 0) return false;
  }
  return dot(p.objective, ray).sign() > 0;
}

namespace detail {

inline bool row_multiplier_signs_ok(const LpProblem& p, const RatVector& y) {
  if (y.size() != p.num_rows()) return false;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (p.senses[i] == Sense::LessEqual && y[i].sign() < 0) return false;
    if (p.senses[i] == Sense::GreaterEqual && y[i].sign() > 0) return false;
  }
  return true;
}

inline RatVector transposed_times(const LpProblem& p, const RatVector& y) {
  RatVector out(p.num_vars());
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    if (y[i].is_zero()) continue;
    for (std::size_t j = 0; j < p.num_vars(); ++j)
      if (!p.constraints(i, j).is_zero()) out[j] += y[i] * p.constraints(i, j);
  }
  return out;
}

}  // namespace detail

/// Weak-duality bound y^T rhs + max over the variable box of (c - A^T y)^T x.
/// Returns nullopt when y has invalid signs or the box maximum is infinite.
inline std::optional<Rational> dual_bound(const LpProblem& p, const RatVector& y) {
  if (!detail::row_multiplier_signs_ok(p, y)) return std::nullopt;
  RatVector reduced = p.objective - detail::transposed_times(p, y);
  Rational bound = dot(y, p.rhs);
  for (std::size_t j = 0; j < reduced.size(); ++j) {
    const int s = reduced[j].sign();
    if (s > 0) {
      if (!p.bounds[j].upper) return std::nullopt;
      bound += reduced[j] * *p.bounds[j].upper;
    } else if (s < 0) {
      if (!p.bounds[j].lower) return std::nullopt;
      bound += reduced[j] * *p.bounds[j].lower;
    }
  }
  return bound;
}

/// y proves infeasibility when its signs are valid and
/// min over the variable box of (A^T y)^T x exceeds y^T rhs.
inline bool is_farkas_certificate(const LpProblem& p, const RatVector& y) {
  if (!detail::row_multiplier_signs_ok(p, y)) return false;
  const RatVector combined = detail::transposed_times(p, y);
  Rational box_min;
  for (std::size_t j = 0; j < combined.size(); ++j) {
    const int s = combined[j].sign();
    if (s > 0) {
      if (!p.bounds[j].lower) return false;
      box_min += combined[j] * *p.bounds[j].lower;
    } else if (s < 0) {
      if (!p.bounds[j].upper) return false;
      box_min += combined[j] * *p.bounds[j].upper;
    }
  }
  return box_min > dot(y, p.rhs);
}

// ---------------------------------------------------------------------------

enum class PivotRule : std::uint8_t {
  Bland,         // smallest eligible index; guarantees termination
  Largest,       // largest reduced cost / infeasibility, Bland on ties
};

/// Dense-tableau bounded-variable simplex over exact rationals.
///
/// Computational form: every row i gets a logical variable s_i = A_i x
/// whose bounds encode the row sense, so the equations are A x - s = 0 and
/// every variable lives in a (possibly infinite) box. The tableau T keeps
/// the identity on the basic columns: x_B(r) = -sum_{k nonbasic} T(r,k) x_k.
/// Rows violated by the starting point receive an artificial variable for
/// phase 1; after phase 1 artificials are fixed at zero.
class SimplexEngine {
 public:
  enum class Position : std::uint8_t { Basic, AtLower, AtUpper, Free };

  explicit SimplexEngine(const LpProblem& problem, PivotRule rule = PivotRule::Bland)
      : m_(problem.num_rows()), n_(problem.num_vars()), rule_(rule) {
    problem.validate();
    // Starting point of the structurals: the point of the box closest to 0.
    std::vector<Rational> x0(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      const auto& b = problem.bounds[j];
      if (b.lower && b.lower->sign() > 0)
        x0[j] = *b.lower;
      else if (b.upper && b.upper->sign() < 0)
        x0[j] = *b.upper;
    }
    std::vector<Rational> activity(m_);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (!problem.constraints(i, j).is_zero() && !x0[j].is_zero())
          activity[i] += problem.constraints(i, j) * x0[j];

    auto row_lower = [&](std::size_t i) -> std::optional<Rational> {
      return problem.senses[i] == Sense::LessEqual ? std::nullopt : std::optional<Rational>(problem.rhs[i]);
    };
    auto row_upper = [&](std::size_t i) -> std::optional<Rational> {
      return problem.senses[i] == Sense::GreaterEqual ? std::nullopt : std::optional<Rational>(problem.rhs[i]);
    };

    std::vector<std::size_t> violated;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto lo = row_lower(i);
      const auto up = row_upper(i);
      if ((lo && activity[i] < *lo) || (up && activity[i] > *up)) violated.push_back(i);
    }
    first_artificial_ = n_ + m_;
    cols_ = n_ + m_ + violated.size();
    t_.assign(m_ * cols_, Rational());
    d_.assign(cols_, Rational());
    lo_.assign(cols_, std::nullopt);
    up_.assign(cols_, std::nullopt);
    val_.assign(cols_, Rational());
    pos_.assign(cols_, Position::Free);
    row_of_.assign(cols_, -1);
    basis_.assign(m_, 0);
    phase1_cost_.assign(cols_, Rational());
    phase2_cost_.assign(cols_, Rational());

    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = problem.bounds[j].lower;
      up_[j] = problem.bounds[j].upper;
      val_[j] = x0[j];
      // Strictly inside the box counts as free (nonbasic, off its bounds).
      pos_[j] = lo_[j] && x0[j] == *lo_[j]   ? Position::AtLower
                : up_[j] && x0[j] == *up_[j] ? Position::AtUpper
                                             : Position::Free;
      phase2_cost_[j] = problem.objective[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j)
        if (!problem.constraints(i, j).is_zero()) at(i, j) = -problem.constraints(i, j);
      const std::size_t s = n_ + i;
      at(i, s) = 1;
      lo_[s] = row_lower(i);
      up_[s] = row_upper(i);
      make_basic(i, s);
      val_[s] = activity[i];
    }
    for (std::size_t k = 0; k < violated.size(); ++k) {
      const std::size_t i = violated[k];
      const std::size_t s = n_ + i;
      const std::size_t w = first_artificial_ + k;
      // Logical leaves to the violated bound, artificial absorbs the gap.
      const bool above = up_[s] && activity[i] > *up_[s];
      row_of_[s] = -1;
      pos_[s] = above ? Position::AtUpper : Position::AtLower;
      val_[s] = above ? *up_[s] : *lo_[s];
      at(i, w) = 1;
      make_basic(i, w);
      val_[w] = activity[i] - val_[s];
      if (above) {
        lo_[w] = Rational(0);
        phase1_cost_[w] = -1;
      } else {
        up_[w] = Rational(0);
        phase1_cost_[w] = 1;
      }
    }
  }

  std::size_t num_rows() const { return m_; }
  std::size_t num_structural() const { return n_; }
  std::size_t iterations() const { return iterations_; }

  /// Two-phase primal simplex from the construction state.
  LpResult solve() {
    LpResult result;
    if (first_artificial_ < cols_) {
      set_costs(phase1_cost_);
      const auto status = primal_loop();
      // Phase 1 is bounded above by zero, so status is Optimal.
      (void)status;
      if (objective_value().sign() < 0) {
        result.status = LpStatus::Infeasible;
        result.farkas = RatVector(m_);
        for (std::size_t i = 0; i < m_; ++i) result.farkas[i] = d_[n_ + i];
        return result;
      }
      retire_artificials();
    }
    set_costs(phase2_cost_);
    std::size_t entering = 0;
    int direction = 0;
    const auto status = primal_loop(&entering, &direction);
    result.status = status;
    result.x = structural_values();
    if (status == LpStatus::Unbounded) {
      result.ray = RatVector(n_);
      if (entering < n_) result.ray[entering] = direction;
      for (std::size_t r = 0; r < m_; ++r)
        if (basis_[r] < n_ && !at(r, entering).is_zero()) result.ray[basis_[r]] = -at(r, entering) * direction;
      return result;
    }
    result.value = objective_value();
    result.duals = RatVector(m_);
    for (std::size_t i = 0; i < m_; ++i) result.duals[i] = d_[n_ + i];
    return result;
  }

  // -- Warm-start interface used by branch-and-bound ----------------------

  /// Changes the bounds of a structural variable. A nonbasic variable is
  /// moved to the bound matching the sign of its reduced cost so that dual
  /// feasibility is preserved; basic values are updated accordingly.
  void set_bounds(std::size_t j, std::optional<Rational> lower, std::optional<Rational> upper) {
    require(j < n_, "SimplexEngine::set_bounds: not a structural variable");
    require(!(lower && upper && *upper < *lower), "SimplexEngine::set_bounds: empty interval");
    lo_[j] = std::move(lower);
    up_[j] = std::move(upper);
    if (pos_[j] == Position::Basic) return;
    Position target;
    const int s = d_[j].sign();
    if (lo_[j] && up_[j] && *lo_[j] == *up_[j])
      target = Position::AtLower;
    else if (s > 0)
      target = up_[j] ? Position::AtUpper : Position::Free;
    else if (s < 0)
      target = lo_[j] ? Position::AtLower : Position::Free;
    else
      target = lo_[j] ? Position::AtLower : up_[j] ? Position::AtUpper : Position::Free;
    require(target != Position::Free || (!lo_[j] && !up_[j]) || s == 0,
            "SimplexEngine::set_bounds: bound change breaks dual feasibility");
    Rational target_value = target == Position::AtLower ? *lo_[j] : target == Position::AtUpper ? *up_[j] : Rational();
    move_nonbasic(j, target_value);
    pos_[j] = target;
  }

  std::optional<Rational> lower(std::size_t j) const { return lo_[j]; }
  std::optional<Rational> upper(std::size_t j) const { return up_[j]; }

  /// Restores primal feasibility by the dual simplex method. Requires the
  /// current basis to be dual feasible (e.g. an optimal basis whose bounds
  /// were then changed). Returns Optimal or Infeasible.
  LpStatus dual_simplex() {
    for (;;) {
      std::optional<std::size_t> leave_row;
      Rational worst;
      for (std::size_t r = 0; r < m_; ++r) {
        const std::size_t b = basis_[r];
        Rational gap;
        if (lo_[b] && val_[b] < *lo_[b])
          gap = *lo_[b] - val_[b];
        else if (up_[b] && val_[b] > *up_[b])
          gap = val_[b] - *up_[b];
        else
          continue;
        if (rule_ == PivotRule::Bland) {
          if (!leave_row || b < basis_[*leave_row]) leave_row = r;
        } else if (!leave_row || gap > worst || (gap == worst && b < basis_[*leave_row])) {
          leave_row = r;
          worst = gap;
        }
      }
      if (!leave_row) return LpStatus::Optimal;
      const std::size_t r = *leave_row;
      const std::size_t leaving = basis_[r];
      const bool increase = lo_[leaving] && val_[leaving] < *lo_[leaving];
      const Rational target = increase ? *lo_[leaving] : *up_[leaving];

      std::optional<std::size_t> entering;
      Rational best_ratio;
      for (std::size_t k = 0; k < cols_; ++k) {
        if (pos_[k] == Position::Basic || is_fixed(k)) continue;
        const Rational& a = at(r, k);
        if (a.is_zero()) continue;
        // x_B(r) changes by -a per unit increase of x_k.
        const bool k_must_increase = increase ? a.sign() < 0 : a.sign() > 0;
        const bool can = k_must_increase ? (pos_[k] == Position::AtLower || pos_[k] == Position::Free)
                                         : (pos_[k] == Position::AtUpper || pos_[k] == Position::Free);
        if (!can) continue;
        Rational ratio = abs(d_[k] / a);
        if (!entering || ratio < best_ratio) {
          entering = k;
          best_ratio = std::move(ratio);
        }
      }
      if (!entering) {
        infeasible_row_ = r;
        return LpStatus::Infeasible;
      }
      const std::size_t k = *entering;
      const Rational step = (target - val_[leaving]) / (-at(r, k));
      shift_nonbasic(k, step);
      val_[leaving] = target;
      pivot(r, k);
      pos_[leaving] = increase ? Position::AtLower : Position::AtUpper;
      ++iterations_;
    }
  }

  Rational objective_value() const {
    Rational z;
    for (std::size_t j = 0; j < cols_; ++j)
      if (!cost_[j].is_zero() && !val_[j].is_zero()) z += cost_[j] * val_[j];
    return z;
  }

  RatVector structural_values() const {
    RatVector x(n_);
    for (std::size_t j = 0; j < n_; ++j) x[j] = val_[j];
    return x;
  }

  bool is_basic(std::size_t j) const { return pos_[j] == Position::Basic; }

 private:
  Rational& at(std::size_t r, std::size_t c) { return t_[r * cols_ + c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return t_[r * cols_ + c]; }

  bool is_fixed(std::size_t j) const { return lo_[j] && up_[j] && *lo_[j] == *up_[j]; }

  void make_basic(std::size_t r, std::size_t j) {
    basis_[r] = j;
    row_of_[j] = static_cast<std::ptrdiff_t>(r);
    pos_[j] = Position::Basic;
  }

  void set_costs(const std::vector<Rational>& cost) {
    cost_ = cost;
    d_ = cost;
    for (std::size_t r = 0; r < m_; ++r) {
      const Rational& cb = cost_[basis_[r]];
      if (cb.is_zero()) continue;
      for (std::size_t k = 0; k < cols_; ++k)
        if (!at(r, k).is_zero()) d_[k] -= cb * at(r, k);
    }
  }

  void shift_nonbasic(std::size_t k, const Rational& step) {
    if (step.is_zero()) return;
    val_[k] += step;
    for (std::size_t i = 0; i < m_; ++i)
      if (!at(i, k).is_zero()) val_[basis_[i]] -= at(i, k) * step;
  }

  void move_nonbasic(std::size_t k, const Rational& value) { shift_nonbasic(k, value - val_[k]); }

  void pivot(std::size_t r, std::size_t k) {
    const Rational inv = at(r, k).reciprocal();
    nz_.clear();
    for (std::size_t c = 0; c < cols_; ++c) {
      Rational& x = at(r, c);
      if (x.is_zero()) continue;
      x *= inv;
      nz_.push_back(c);
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const Rational f = at(i, k);
      if (f.is_zero()) continue;
      Rational* row = &t_[i * cols_];
      const Rational* prow = &t_[r * cols_];
      for (std::size_t c : nz_) row[c] -= f * prow[c];
    }
    if (!d_[k].is_zero()) {
      const Rational f = d_[k];
      for (std::size_t c : nz_) d_[c] -= f * at(r, c);
    }
    const std::size_t leaving = basis_[r];
    row_of_[leaving] = -1;
    make_basic(r, k);
  }

  /// Primal simplex for max cost_^T x from a primal feasible basis.
  LpStatus primal_loop(std::size_t* unbounded_col = nullptr, int* unbounded_dir = nullptr) {
    for (;;) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (pos_[j] == Position::Basic || is_fixed(j)) continue;
        const int s = d_[j].sign();
        if (s == 0) continue;
        const bool ok = s > 0 ? pos_[j] != Position::AtUpper : pos_[j] != Position::AtLower;
        if (!ok) continue;
        if (rule_ == PivotRule::Bland) {
          entering = j;
          break;
        }
        if (!entering || abs(d_[j]) > abs(d_[*entering])) entering = j;
      }
      if (!entering) return LpStatus::Optimal;
      const std::size_t j = *entering;
      const int dir = d_[j].sign();

      // Ratio test; ties go to the smallest variable index.
      std::optional<Rational> best;
      std::optional<std::size_t> leave_row;  // nullopt with best set = bound flip
      std::size_t best_var = 0;
      bool flip = false;
      auto consider = [&](Rational limit, std::size_t var, std::optional<std::size_t> row) {
        if (!best || limit < *best || (limit == *best && var < best_var)) {
          best = std::move(limit);
          best_var = var;
          leave_row = row;
          flip = !row.has_value();
        }
      };
      if (dir > 0 && up_[j]) consider(*up_[j] - val_[j], j, std::nullopt);
      if (dir < 0 && lo_[j]) consider(val_[j] - *lo_[j], j, std::nullopt);
      for (std::size_t r = 0; r < m_; ++r) {
        const Rational& a = at(r, j);
        if (a.is_zero()) continue;
        const std::size_t b = basis_[r];
        const int rate_sign = -a.sign() * dir;
        if (rate_sign > 0 && up_[b]) consider((*up_[b] - val_[b]) / abs(a), b, r);
        if (rate_sign < 0 && lo_[b]) consider((val_[b] - *lo_[b]) / abs(a), b, r);
      }
      ++iterations_;
      if (!best) {
        if (unbounded_col) *unbounded_col = j;
        if (unbounded_dir) *unbounded_dir = dir;
        return LpStatus::Unbounded;
      }
      const Rational step = dir > 0 ? *best : -*best;
      if (flip) {
        shift_nonbasic(j, step);
        pos_[j] = dir > 0 ? Position::AtUpper : Position::AtLower;
        val_[j] = dir > 0 ? *up_[j] : *lo_[j];
        continue;
      }
      const std::size_t r = *leave_row;
      const std::size_t leaving = basis_[r];
      shift_nonbasic(j, step);
      const bool hits_upper = -at(r, j).sign() * dir > 0;
      val_[leaving] = hits_upper ? *up_[leaving] : *lo_[leaving];
      pivot(r, j);
      pos_[leaving] = hits_upper ? Position::AtUpper : Position::AtLower;
    }
  }

  /// Fixes artificials at zero and drives basic ones out of the basis where
  /// a non-artificial replacement exists (degenerate pivots).
  void retire_artificials() {
    for (std::size_t w = first_artificial_; w < cols_; ++w) {
      lo_[w] = Rational(0);
      up_[w] = Rational(0);
      phase1_cost_[w] = 0;
      if (pos_[w] != Position::Basic) {
        pos_[w] = Position::AtLower;
        continue;
      }
      const std::size_t r = static_cast<std::size_t>(row_of_[w]);
      for (std::size_t k = 0; k < first_artificial_; ++k) {
        if (pos_[k] == Position::Basic || at(r, k).is_zero()) continue;
        pivot(r, k);
        pos_[w] = Position::AtLower;
        break;
      }
    }
  }

  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::size_t cols_ = 0;
  std::size_t first_artificial_ = 0;
  PivotRule rule_ = PivotRule::Bland;
  std::vector<Rational> t_;
  std::vector<Rational> d_;
  std::vector<Rational> cost_;
  std::vector<Rational> phase1_cost_;
  std::vector<Rational> phase2_cost_;
  std::vector<std::optional<Rational>> lo_;
  std::vector<std::optional<Rational>> up_;
  std::vector<Rational> val_;
  std::vector<Position> pos_;
  std::vector<std::ptrdiff_t> row_of_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nz_;
  std::size_t iterations_ = 0;
  std::optional<std::size_t> infeasible_row_;
};

/// Exact LP maximization with Bland's anti-cycling rule.
inline LpResult lp_max(const LpProblem& problem) {
  SimplexEngine engine(problem, PivotRule::Bland);
  return engine.solve();
}

}  // namespace cpwlkit::linalg
