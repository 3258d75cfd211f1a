#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cpwlkit/error.hpp"
#include "cpwlkit/linalg/matrix.hpp"

namespace cpwlkit::cpwl {

using linalg::Rational;
using linalg::RatVector;

/// x -> a^T x + b
struct AffineTerm {
  RatVector a;
  Rational b;

  std::size_t dim() const { return a.size(); }

  Rational operator()(const RatVector& x) const { return linalg::dot(a, x) + b; }

  static AffineTerm constant(std::size_t dim, Rational value) { return {RatVector(dim), std::move(value)}; }
  static AffineTerm variable(std::size_t dim, std::size_t i) { return {RatVector::unit(dim, i), Rational()}; }

  AffineTerm& operator+=(const AffineTerm& o) {
    a += o.a;
    b += o.b;
    return *this;
  }
  friend AffineTerm operator+(AffineTerm x, const AffineTerm& y) { return x += y; }
  friend AffineTerm operator-(AffineTerm x, const AffineTerm& y) {
    x.a -= y.a;
    x.b -= y.b;
    return x;
  }
  friend AffineTerm operator*(const Rational& s, AffineTerm t) {
    t.a *= s;
    t.b *= s;
    return t;
  }

  friend bool operator==(const AffineTerm&, const AffineTerm&) = default;
  friend auto operator<=>(const AffineTerm& x, const AffineTerm& y) {
    if (auto c = x.a <=> y.a; c != 0) return c;
    return x.b <=> y.b;
  }
};

/// max of finitely many affine terms, stored sorted and without duplicates.
class MaxTerm {
 public:
  explicit MaxTerm(std::vector<AffineTerm> terms) : terms_(std::move(terms)) {
    require(!terms_.empty(), "MaxTerm: needs at least one affine term");
    const std::size_t n = terms_.front().dim();
    for (const auto& t : terms_) require(t.dim() == n, "MaxTerm: affine terms of different dimension");
    std::sort(terms_.begin(), terms_.end());
    terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
  }
  explicit MaxTerm(AffineTerm single) : MaxTerm(std::vector<AffineTerm>{std::move(single)}) {}

  std::size_t dim() const { return terms_.front().dim(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<AffineTerm>& terms() const { return terms_; }
  const AffineTerm& operator[](std::size_t i) const { return terms_[i]; }

  Rational operator()(const RatVector& x) const {
    require(x.size() == dim(), "MaxTerm: point has dimension " + std::to_string(x.size()) + ", expected " +
                                   std::to_string(dim()));
    Rational best = terms_.front()(x);
    for (std::size_t i = 1; i < terms_.size(); ++i) best = linalg::max(best, terms_[i](x));
    return best;
  }

  /// The max over the terms with the given (0-based, canonical-order) indices.
  MaxTerm subset(const std::vector<std::size_t>& indices) const {
    std::vector<AffineTerm> picked;
    picked.reserve(indices.size());
    for (std::size_t i : indices) {
      require(i < terms_.size(), "MaxTerm::subset: index out of range");
      picked.push_back(terms_[i]);
    }
    return MaxTerm(std::move(picked));
  }

  friend bool operator==(const MaxTerm&, const MaxTerm&) = default;
  friend auto operator<=>(const MaxTerm& x, const MaxTerm& y) {
    return std::lexicographical_compare_three_way(x.terms_.begin(), x.terms_.end(), y.terms_.begin(),
                                                  y.terms_.end());
  }

 private:
  std::vector<AffineTerm> terms_;
};

struct Summand {
  Rational coeff;
  MaxTerm term;

  friend bool operator==(const Summand&, const Summand&) = default;
};

/// Rational linear combination of max terms on R^dim. Always canonical:
/// summands sorted by term, equal terms merged, zero coefficients dropped.
class CpwlExpr {
 public:
  explicit CpwlExpr(std::size_t dim = 0) : dim_(dim) {}
  CpwlExpr(std::size_t dim, std::vector<Summand> summands) : dim_(dim), summands_(std::move(summands)) {
    for (const auto& s : summands_)
      require(s.term.dim() == dim_, "CpwlExpr: summand of dimension " + std::to_string(s.term.dim()) +
                                        " in expression of dimension " + std::to_string(dim_));
    canonicalize();
  }
  explicit CpwlExpr(MaxTerm term, Rational coeff = Rational(1)) : dim_(term.dim()) {
    summands_.push_back({std::move(coeff), std::move(term)});
    canonicalize();
  }

  std::size_t dim() const { return dim_; }
  const std::vector<Summand>& summands() const { return summands_; }
  bool is_zero() const { return summands_.empty(); }

  Rational operator()(const RatVector& x) const {
    require(x.size() == dim_, "eval: point has dimension " + std::to_string(x.size()) + ", expression has " +
                                  std::to_string(dim_));
    Rational sum;
    for (const auto& s : summands_) sum += s.coeff * s.term(x);
    return sum;
  }

  /// Largest term count over the summands (0 for the zero expression).
  std::size_t max_term_count() const {
    std::size_t p = 0;
    for (const auto& s : summands_) p = std::max(p, s.term.size());
    return p;
  }

  CpwlExpr& operator+=(const CpwlExpr& o) {
    require(o.dim_ == dim_, "CpwlExpr: adding expressions of dimension " + std::to_string(dim_) + " and " +
                                std::to_string(o.dim_));
    summands_.insert(summands_.end(), o.summands_.begin(), o.summands_.end());
    canonicalize();
    return *this;
  }
  CpwlExpr& operator*=(const Rational& s) {
    if (s.is_zero()) summands_.clear();
    for (auto& x : summands_) x.coeff *= s;
    return *this;
  }
  friend CpwlExpr operator+(CpwlExpr x, const CpwlExpr& y) { return x += y; }
  friend CpwlExpr operator*(const Rational& s, CpwlExpr x) { return x *= s; }
  friend CpwlExpr operator-(CpwlExpr x) { return x *= Rational(-1); }
  friend CpwlExpr operator-(CpwlExpr x, const CpwlExpr& y) { return x += -y; }

  friend bool operator==(const CpwlExpr&, const CpwlExpr&) = default;

 private:
  void canonicalize() {
    std::stable_sort(summands_.begin(), summands_.end(),
                     [](const Summand& x, const Summand& y) { return x.term < y.term; });
    std::vector<Summand> merged;
    for (auto& s : summands_) {
      if (!merged.empty() && merged.back().term == s.term)
        merged.back().coeff += s.coeff;
      else
        merged.push_back(std::move(s));
    }
    std::erase_if(merged, [](const Summand& s) { return s.coeff.is_zero(); });
    summands_ = std::move(merged);
  }

  std::size_t dim_;
  std::vector<Summand> summands_;
};

inline Rational eval(const CpwlExpr& expr, const RatVector& x) { return expr(x); }

/// Rebuilds the expression from its summands; a fixed point for any CpwlExpr.
inline CpwlExpr canonicalize(const CpwlExpr& expr) { return CpwlExpr(expr.dim(), expr.summands()); }

}  // namespace cpwlkit::cpwl
