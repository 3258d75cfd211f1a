#pragma once

#include <cctype>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "cpwlkit/cpwl/expr.hpp"
#include "cpwlkit/error.hpp"
#include "cpwlkit/linalg/json.hpp"

// Text form of expressions:
//
//   expr    := '0' | summand (('+' | '-') summand)*
//   summand := [sign] [rational '*'] 'max' '(' affine (',' affine)* ')'
//   affine  := item (('+' | '-') item)*
//   item    := [sign] rational ['*' var] | [sign] var
//   var     := 'x' index            (1-based)
//
// '#' starts a comment running to the end of the line.

namespace cpwlkit::cpwl {

namespace detail {

struct RawItem {
  Rational coeff;
  std::size_t var = 0;  // 0 = constant
};

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  std::vector<std::pair<Rational, std::vector<std::vector<RawItem>>>> parse_all() {
    std::vector<std::pair<Rational, std::vector<std::vector<RawItem>>>> out;
    skip_space();
    if (peek() == '0') {
      const auto saved = std::tuple(pos_, line_, column_);
      advance();
      skip_space();
      if (at_end()) return out;
      std::tie(pos_, line_, column_) = saved;
    }
    if (at_end()) fail("empty expression");
    Rational sign(1);
    for (;;) {
      Rational coeff = sign * parse_sign();
      skip_space();
      if (is_digit(peek())) {
        coeff *= parse_rational();
        expect('*');
      }
      expect_word("max");
      expect('(');
      std::vector<std::vector<RawItem>> terms;
      terms.push_back(parse_affine());
      while (accept(',')) terms.push_back(parse_affine());
      expect(')');
      out.emplace_back(std::move(coeff), std::move(terms));
      skip_space();
      if (at_end()) break;
      if (accept('+'))
        sign = 1;
      else if (accept('-'))
        sign = -1;
      else
        fail("expected '+', '-' or end of input");
    }
    return out;
  }

  std::size_t max_var() const { return max_var_; }

 private:
  std::vector<RawItem> parse_affine() {
    std::vector<RawItem> items;
    items.push_back(parse_item());
    for (;;) {
      skip_space();
      if (peek() == '+' || peek() == '-') {
        items.push_back(parse_item());
        continue;
      }
      break;
    }
    return items;
  }

  RawItem parse_item() {
    RawItem item;
    item.coeff = parse_sign();
    skip_space();
    if (is_digit(peek())) {
      item.coeff *= parse_rational();
      if (!accept('*')) return item;
      skip_space();
    }
    item.var = parse_var();
    return item;
  }

  std::size_t parse_var() {
    skip_space();
    if (peek() != 'x') fail("expected a variable x<index>");
    ++pos_;
    ++column_;
    const std::size_t start = pos_;
    while (is_digit(peek())) advance();
    if (start == pos_) fail("expected variable index after 'x'");
    std::size_t index = 0;
    for (std::size_t i = start; i < pos_; ++i) {
      index = index * 10 + static_cast<std::size_t>(text_[i] - '0');
      if (index > 1000000) fail("variable index too large");
    }
    if (index == 0) fail("variable indices start at 1");
    max_var_ = std::max(max_var_, index);
    return index;
  }

  Rational parse_sign() {
    Rational s(1);
    for (;;) {
      skip_space();
      if (accept_raw('+')) continue;
      if (accept_raw('-')) {
        s = -s;
        continue;
      }
      return s;
    }
  }

  Rational parse_rational() {
    const std::size_t line = line_, column = column_, start = pos_;
    while (is_digit(peek())) advance();
    if (peek() == '/') {
      advance();
      if (!is_digit(peek())) fail("expected denominator digits after '/'");
      while (is_digit(peek())) advance();
    }
    try {
      return Rational::parse(text_.substr(start, pos_ - start));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line, column);
    }
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  bool accept_raw(char c) {
    if (peek() != c) return false;
    advance();
    return true;
  }

  bool accept(char c) {
    skip_space();
    return accept_raw(c);
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  void expect_word(std::string_view w) {
    skip_space();
    if (text_.substr(pos_, w.size()) != w) fail("expected '" + std::string(w) + "'");
    for (std::size_t i = 0; i < w.size(); ++i) advance();
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool at_end() const { return pos_ >= text_.size(); }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string found = at_end() ? "end of input" : "'" + std::string(1, peek()) + "'";
    throw ParseError(msg + " (found " + found + ")", line_, column_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  std::size_t max_var_ = 0;
};

}  // namespace detail

/// Parses the text grammar. The dimension is the largest variable index
/// unless `dim` is given, in which case larger indices are an error.
inline CpwlExpr parse_expr(std::string_view text, std::optional<std::size_t> dim = std::nullopt) {
  detail::ExprParser parser(text);
  auto raw = parser.parse_all();
  const std::size_t n = dim.value_or(parser.max_var());
  if (parser.max_var() > n)
    throw ParseError("variable x" + std::to_string(parser.max_var()) + " exceeds dimension " + std::to_string(n), 0,
                     0);
  std::vector<Summand> summands;
  for (auto& [coeff, terms] : raw) {
    std::vector<AffineTerm> affine;
    for (const auto& items : terms) {
      AffineTerm t{RatVector(n), Rational()};
      for (const auto& it : items) {
        if (it.var == 0)
          t.b += it.coeff;
        else
          t.a[it.var - 1] += it.coeff;
      }
      affine.push_back(std::move(t));
    }
    summands.push_back({std::move(coeff), MaxTerm(std::move(affine))});
  }
  return CpwlExpr(n, std::move(summands));
}

inline std::string to_string(const AffineTerm& t) {
  std::string out;
  for (std::size_t i = 0; i < t.a.size(); ++i) {
    if (t.a[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += t.a[i].str() + "*x" + std::to_string(i + 1);
  }
  if (!t.b.is_zero() || out.empty()) {
    if (!out.empty()) out += " + ";
    out += t.b.str();
  }
  return out;
}

inline std::string to_string(const MaxTerm& m) {
  std::string out = "max(";
  for (std::size_t i = 0; i < m.size(); ++i) out += (i ? ", " : "") + to_string(m[i]);
  return out + ")";
}

inline std::string to_string(const CpwlExpr& e) {
  if (e.is_zero()) return "0";
  std::string out;
  for (const auto& s : e.summands()) {
    if (!out.empty()) out += " + ";
    out += s.coeff.str() + "*" + to_string(s.term);
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const AffineTerm& t) { return os << to_string(t); }
inline std::ostream& operator<<(std::ostream& os, const MaxTerm& m) { return os << to_string(m); }
inline std::ostream& operator<<(std::ostream& os, const CpwlExpr& e) { return os << to_string(e); }

// JSON: {"dim": n, "summands": [{"coeff": "p/q", "terms": [{"a": [...], "b": "..."}]}]}

inline void to_json(nlohmann::json& j, const AffineTerm& t) { j = {{"a", t.a}, {"b", t.b}}; }

inline void from_json(const nlohmann::json& j, AffineTerm& t) {
  if (!j.is_object() || !j.contains("a")) throw ParseError("affine term needs an \"a\" array", 0, 0);
  t.a = j.at("a").get<RatVector>();
  t.b = j.contains("b") ? j.at("b").get<Rational>() : Rational();
}

inline void to_json(nlohmann::json& j, const CpwlExpr& e) {
  j = {{"dim", e.dim()}, {"summands", nlohmann::json::array()}};
  for (const auto& s : e.summands()) j["summands"].push_back({{"coeff", s.coeff}, {"terms", s.term.terms()}});
}

inline CpwlExpr expr_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("summands"))
    throw ParseError("expression JSON needs \"dim\" and \"summands\"", 0, 0);
  const auto n = j.at("dim").get<std::size_t>();
  std::vector<Summand> summands;
  for (const auto& s : j.at("summands")) {
    auto terms = s.at("terms").get<std::vector<AffineTerm>>();
    for (const auto& t : terms)
      if (t.dim() != n) throw ParseError("affine term dimension does not match \"dim\"", 0, 0);
    if (terms.empty()) throw ParseError("max term with no affine terms", 0, 0);
    summands.push_back({s.at("coeff").get<Rational>(), MaxTerm(std::move(terms))});
  }
  return CpwlExpr(n, std::move(summands));
}

}  // namespace cpwlkit::cpwl
