#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cpwlkit/error.hpp"
#include "cpwlkit/linalg/rational.hpp"

namespace cpwlkit::linalg {

/// Fixed-length vector of rationals. Element access through at() is
/// bounds-checked; operator[] is not.
class RatVector {
 public:
  RatVector() = default;
  explicit RatVector(std::size_t size) : data_(size) {}
  RatVector(std::initializer_list<Rational> values) : data_(values) {}
  explicit RatVector(std::vector<Rational> values) : data_(std::move(values)) {}

  static RatVector unit(std::size_t size, std::size_t index) {
    require(index < size, "RatVector::unit: index out of range");
    RatVector v(size);
    v.data_[index] = 1;
    return v;
  }

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  Rational& at(std::size_t i) {
    require(i < data_.size(), "RatVector: index " + std::to_string(i) + " out of range");
    return data_[i];
  }
  const Rational& at(std::size_t i) const {
    require(i < data_.size(), "RatVector: index " + std::to_string(i) + " out of range");
    return data_[i];
  }
  Rational& operator[](std::size_t i) noexcept { return data_[i]; }
  const Rational& operator[](std::size_t i) const noexcept { return data_[i]; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  std::span<const Rational> values() const noexcept { return data_; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return x.is_zero(); });
  }

  RatVector& operator+=(const RatVector& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  RatVector& operator-=(const RatVector& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  RatVector& operator*=(const Rational& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend RatVector operator+(RatVector a, const RatVector& b) { return a += b; }
  friend RatVector operator-(RatVector a, const RatVector& b) { return a -= b; }
  friend RatVector operator*(const Rational& s, RatVector v) { return v *= s; }
  friend RatVector operator-(RatVector v) {
    for (auto& x : v.data_) x = -x;
    return v;
  }

  friend bool operator==(const RatVector&, const RatVector&) = default;
  friend auto operator<=>(const RatVector& a, const RatVector& b) {
    return std::lexicographical_compare_three_way(a.data_.begin(), a.data_.end(), b.data_.begin(), b.data_.end());
  }

  friend std::ostream& operator<<(std::ostream& os, const RatVector& v) {
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os << ')';
  }

 private:
  void check_same(const RatVector& o) const {
    require(o.size() == size(), "RatVector: dimension mismatch (" + std::to_string(size()) + " vs " +
                                    std::to_string(o.size()) + ")");
  }

  std::vector<Rational> data_;
};

inline Rational dot(const RatVector& a, const RatVector& b) {
  require(a.size() == b.size(), "dot: dimension mismatch");
  Rational sum;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) sum += a[i] * b[i];
  return sum;
}

/// Dense row-major rational matrix with immutable shape.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      require(r.size() == cols_, "RatMatrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static RatMatrix from_rows(const std::vector<RatVector>& rows, std::size_t cols) {
    RatMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      require(rows[i].size() == cols, "RatMatrix::from_rows: ragged rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rational& at(std::size_t r, std::size_t c) {
    check(r, c);
    return data_[r * cols_ + c];
  }
  const Rational& at(std::size_t r, std::size_t c) const {
    check(r, c);
    return data_[r * cols_ + c];
  }
  Rational& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  RatVector row(std::size_t r) const {
    require(r < rows_, "RatMatrix::row out of range");
    return RatVector(std::vector<Rational>(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                                           data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)));
  }
  RatVector col(std::size_t c) const {
    require(c < cols_, "RatMatrix::col out of range");
    RatVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  RatVector operator*(const RatVector& x) const {
    require(x.size() == cols_, "RatMatrix * RatVector: dimension mismatch");
    RatVector y(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      Rational sum;
      for (std::size_t c = 0; c < cols_; ++c) {
        const Rational& a = (*this)(r, c);
        if (!a.is_zero() && !x[c].is_zero()) sum += a * x[c];
      }
      y[r] = std::move(sum);
    }
    return y;
  }

  RatMatrix transposed() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

 private:
  void check(std::size_t r, std::size_t c) const {
    require(r < rows_ && c < cols_, "RatMatrix: index (" + std::to_string(r) + "," + std::to_string(c) +
                                        ") out of range for " + std::to_string(rows_) + "x" +
                                        std::to_string(cols_));
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

}  // namespace cpwlkit::linalg
