#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cpwlkit/cpwl/expr.hpp"
#include "cpwlkit/error.hpp"
#include "cpwlkit/linalg/json.hpp"
#include "cpwlkit/linalg/simplex.hpp"

namespace cpwlkit::geometry {

using linalg::Rational;
using linalg::RatVector;

/// Finite point set in V-representation, sorted and deduplicated. When
/// `extended` is set the polyhedron is conv(points) + cone(-e_dim), i.e. the
/// last coordinate carries an implicit downward recession ray.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dim, bool extended, std::vector<RatVector> points)
      : dim_(dim), extended_(extended), points_(std::move(points)) {
    require(!extended_ || dim_ >= 1, "PointSet: an extended set needs at least the offset coordinate");
    for (const auto& p : points_)
      require(p.size() == dim_, "PointSet: point of dimension " + std::to_string(p.size()) + " in set of dimension " +
                                    std::to_string(dim_));
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
  }

  static PointSet singleton(RatVector p, bool extended = false) {
    const std::size_t n = p.size();
    return PointSet(n, extended, {std::move(p)});
  }

  std::size_t dim() const { return dim_; }
  bool extended() const { return extended_; }
  const std::vector<RatVector>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_ = 0;
  bool extended_ = false;
  std::vector<RatVector> points_;
};

/// Coefficient points of a max term: a_i, or (a_i, b_i) when extended.
inline PointSet newton_of(const cpwl::MaxTerm& term, bool extended) {
  std::vector<RatVector> pts;
  for (const auto& t : term.terms()) {
    if (!extended) {
      require(t.b.is_zero(), "newton_of: non-homogeneous term needs the extended polyhedron");
      pts.push_back(t.a);
    } else {
      std::vector<Rational> v(t.a.begin(), t.a.end());
      v.push_back(t.b);
      pts.emplace_back(std::move(v));
    }
  }
  return PointSet(term.dim() + (extended ? 1 : 0), extended, std::move(pts));
}

/// max over P of c^T p; nullopt (unbounded) when P is extended and the last
/// coordinate of c is negative.
inline std::optional<Rational> support_eval(const PointSet& P, const RatVector& c) {
  require(c.size() == P.dim(), "support_eval: direction has dimension " + std::to_string(c.size()) +
                                   ", set has " + std::to_string(P.dim()));
  require(!P.empty(), "support_eval: empty point set");
  if (P.extended() && c[P.dim() - 1].sign() < 0) return std::nullopt;
  Rational best = linalg::dot(c, P.points().front());
  for (const auto& p : P.points()) best = linalg::max(best, linalg::dot(c, p));
  return best;
}

namespace detail {

/// Is v in conv(others) (+ cone(-e_last) when extended)? Exact LP feasibility.
inline bool in_hull(const RatVector& v, const std::vector<const RatVector*>& others, bool extended) {
  using namespace linalg;
  const std::size_t n = v.size();
  if (others.empty()) return false;
  const std::size_t vars = others.size() + (extended ? 1 : 0);
  LpProblem lp;
  lp.objective = RatVector(vars);
  lp.constraints = RatMatrix(n + 1, vars);
  lp.rhs = RatVector(n + 1);
  lp.senses.assign(n + 1, Sense::Equal);
  lp.bounds.assign(vars, VariableBounds{Rational(0), std::nullopt});
  for (std::size_t j = 0; j < others.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) lp.constraints(i, j) = (*others[j])[i];
    lp.constraints(n, j) = 1;
  }
  if (extended) lp.constraints(n - 1, vars - 1) = -1;
  for (std::size_t i = 0; i < n; ++i) lp.rhs[i] = v[i];
  lp.rhs[n] = 1;
  return lp_max(lp).status != LpStatus::Infeasible;
}

}  // namespace detail

/// Vertex set: drops every point that is a convex combination of the others
/// (plus the recession ray for extended sets).
inline PointSet prune_vertices(const PointSet& P) {
  std::vector<RatVector> kept = P.points();
  for (std::size_t i = kept.size(); i-- > 0;) {
    std::vector<const RatVector*> others;
    for (std::size_t j = 0; j < kept.size(); ++j)
      if (j != i) others.push_back(&kept[j]);
    if (detail::in_hull(kept[i], others, P.extended())) kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return PointSet(P.dim(), P.extended(), std::move(kept));
}

inline void require_compatible(const PointSet& P, const PointSet& Q, const char* op) {
  require(P.dim() == Q.dim(), std::string(op) + ": dimension mismatch (" + std::to_string(P.dim()) + " vs " +
                                  std::to_string(Q.dim()) + ")");
  require(P.extended() == Q.extended(), std::string(op) + ": mixing extended and plain point sets");
}

inline PointSet minkowski_sum(const PointSet& P, const PointSet& Q) {
  require_compatible(P, Q, "minkowski_sum");
  std::vector<RatVector> sums;
  sums.reserve(P.size() * Q.size());
  for (const auto& p : P.points())
    for (const auto& q : Q.points()) sums.push_back(p + q);
  return prune_vertices(PointSet(P.dim(), P.extended(), std::move(sums)));
}

inline PointSet conv_union(const PointSet& P, const PointSet& Q) {
  require_compatible(P, Q, "conv_union");
  std::vector<RatVector> all = P.points();
  all.insert(all.end(), Q.points().begin(), Q.points().end());
  return prune_vertices(PointSet(P.dim(), P.extended(), std::move(all)));
}

/// s * P for s >= 0.
inline PointSet scale(const PointSet& P, const Rational& s) {
  require(s.sign() >= 0, "scale: negative factor");
  std::vector<RatVector> pts;
  for (const auto& p : P.points()) pts.push_back(s * p);
  return PointSet(P.dim(), P.extended(), std::move(pts));
}

/// Invariance under p -> 2c - p with c the centroid of the points.
inline bool check_central_symmetry(const PointSet& P) {
  if (P.size() <= 1) return true;
  RatVector sum(P.dim());
  for (const auto& p : P.points()) sum += p;
  const RatVector twice_c = Rational(2, static_cast<std::int64_t>(P.size())) * sum;
  for (const auto& p : P.points())
    if (!std::binary_search(P.points().begin(), P.points().end(), twice_c - p)) return false;
  return true;
}

// JSON: {"dim": n, "extended": bool, "points": [[...]]}

inline void to_json(nlohmann::json& j, const PointSet& P) {
  j = {{"dim", P.dim()}, {"extended", P.extended()}, {"points", nlohmann::json::array()}};
  for (const auto& p : P.points()) j["points"].push_back(p);
}

inline PointSet pointset_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("points"))
    throw ParseError("point set JSON needs \"dim\" and \"points\"", 0, 0);
  const auto n = j.at("dim").get<std::size_t>();
  const bool extended = j.value("extended", false);
  std::vector<RatVector> pts;
  for (const auto& p : j.at("points")) {
    pts.push_back(p.get<RatVector>());
    if (pts.back().size() != n) throw ParseError("point dimension does not match \"dim\"", 0, 0);
  }
  return PointSet(n, extended, std::move(pts));
}

}  // namespace cpwlkit::geometry
