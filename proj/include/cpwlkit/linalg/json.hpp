#pragma once

#include <json.hpp>

#include "cpwlkit/error.hpp"
#include "cpwlkit/linalg/matrix.hpp"

// Rationals serialize as canonical "p/q" strings; vectors and matrices as
// (nested) JSON arrays of such strings.
namespace cpwlkit::linalg {

inline void to_json(nlohmann::json& j, const Rational& x) { j = x.str(); }

inline void from_json(const nlohmann::json& j, Rational& x) {
  if (j.is_string()) {
    x = Rational::parse(j.get<std::string>());
  } else if (j.is_number_integer()) {
    x = Rational(j.get<std::int64_t>());
  } else {
    throw ParseError("expected a rational string, got " + j.dump(), 0, 0);
  }
}

inline void to_json(nlohmann::json& j, const RatVector& v) {
  j = nlohmann::json::array();
  for (const auto& x : v) j.push_back(x.str());
}

inline void from_json(const nlohmann::json& j, RatVector& v) {
  if (!j.is_array()) throw ParseError("expected an array of rationals, got " + j.dump(), 0, 0);
  std::vector<Rational> values;
  values.reserve(j.size());
  for (const auto& e : j) values.push_back(e.get<Rational>());
  v = RatVector(std::move(values));
}

inline void to_json(nlohmann::json& j, const RatMatrix& m) {
  j = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) j.push_back(m.row(r));
}

/// Column count cannot be recovered from an empty array; pass it when known.
inline RatMatrix matrix_from_json(const nlohmann::json& j, std::size_t cols_if_empty = 0) {
  if (!j.is_array()) throw ParseError("expected a matrix (array of arrays), got " + j.dump(), 0, 0);
  std::vector<RatVector> rows;
  for (const auto& r : j) rows.push_back(r.get<RatVector>());
  const std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) throw ParseError("ragged matrix rows", 0, 0);
  return RatMatrix::from_rows(rows, cols);
}

}  // namespace cpwlkit::linalg
