#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cpwlkit/depthgate/mip.hpp"
#include "cpwlkit/error.hpp"

namespace cpwlkit::depthgate {

namespace detail {

/// Exact decimal text of x, if it terminates within `width` characters.
inline std::optional<std::string> exact_decimal(const Rational& x, std::size_t width = 12) {
  if (x.is_integer()) {
    std::string s = x.str();
    return s.size() <= width ? std::optional(s) : std::nullopt;
  }
  mpz_class den = x.denominator();
  std::size_t digits = 0;
  for (unsigned p : {2u, 5u}) {
    std::size_t count = 0;
    while (mpz_divisible_ui_p(den.get_mpz_t(), p)) {
      mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), p);
      ++count;
    }
    digits = std::max(digits, count);
  }
  if (den != 1) return std::nullopt;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpz_class scaled = x.numerator() * scale / x.denominator();
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string s = scaled.get_str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  if (negative) s.insert(0, "-");
  return s.size() <= width ? std::optional(s) : std::nullopt;
}

inline std::string number(const Rational& x) {
  const auto s = exact_decimal(x);
  require(s.has_value(), "emit_mps: coefficient " + x.str() + " has no exact decimal form within 12 characters");
  return *s;
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

/// Fixed-format data line: fields at columns 2, 5, 15, 25, 40, 50.
inline std::string line(const std::string& f1, const std::string& f2, const std::string& f3 = "",
                        const std::string& f4 = "") {
  std::string out = " " + pad(f1, 2) + " " + pad(f2, 8);
  if (!f3.empty() || !f4.empty()) out += "  " + pad(f3, 8);
  if (!f4.empty()) out += "  " + f4;
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

}  // namespace detail

/// Fixed-format MPS. Rows and columns appear in model order; binaries are
/// wrapped in INTORG/INTEND markers with an explicit UP 1 bound.
inline std::string emit_mps(const MipModel& model) {
  model.validate();
  for (const auto& v : model.variables) require(v.name.size() <= 8, "emit_mps: variable name longer than 8: " + v.name);
  for (const auto& r : model.constraints)
    require(r.name.size() <= 8 && !r.name.empty(), "emit_mps: bad row name '" + r.name + "'");

  std::ostringstream out;
  out << "NAME          " << model.name << "\n";
  out << "OBJSENSE\n    " << (model.maximize ? "MAX" : "MIN") << "\n";
  out << "ROWS\n";
  out << detail::line("N", "OBJ") << "\n";
  for (const auto& r : model.constraints) {
    const char* s = r.sense == Sense::LessEqual ? "L" : r.sense == Sense::GreaterEqual ? "G" : "E";
    out << detail::line(s, r.name) << "\n";
  }

  // Column-major view of the coefficients.
  std::vector<std::vector<std::pair<std::string, Rational>>> columns(model.variables.size());
  for (const auto& [j, c] : model.objective)
    if (!c.is_zero()) columns[j].emplace_back("OBJ", c);
  for (const auto& r : model.constraints) {
    std::map<std::size_t, Rational> merged;
    for (const auto& [j, c] : r.terms) merged[j] += c;
    for (const auto& [j, c] : merged)
      if (!c.is_zero()) columns[j].emplace_back(r.name, c);
  }

  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  auto marker_line = [&](const char* kind) {
    out << detail::line("", "MARKER" + std::to_string(marker++), "'MARKER'", "") << "                 '" << kind
        << "'\n";
  };
  for (std::size_t j = 0; j < model.variables.size(); ++j) {
    const bool is_int = model.variables[j].kind == VarKind::Binary;
    if (is_int != in_int) {
      marker_line(is_int ? "INTORG" : "INTEND");
      in_int = is_int;
    }
    for (const auto& [row, c] : columns[j])
      out << detail::line("", model.variables[j].name, row, detail::number(c)) << "\n";
    if (columns[j].empty()) out << detail::line("", model.variables[j].name, "OBJ", "0") << "\n";
  }
  if (in_int) marker_line("INTEND");

  out << "RHS\n";
  for (const auto& r : model.constraints)
    if (!r.rhs.is_zero()) out << detail::line("", "RHS", r.name, detail::number(r.rhs)) << "\n";

  out << "BOUNDS\n";
  for (const auto& v : model.variables) {
    if (!v.lower && !v.upper) {
      out << detail::line("FR", "BND", v.name) << "\n";
      continue;
    }
    if (v.lower && v.upper && *v.lower == *v.upper) {
      out << detail::line("FX", "BND", v.name, detail::number(*v.lower)) << "\n";
      continue;
    }
    if (!v.lower)
      out << detail::line("MI", "BND", v.name) << "\n";
    else if (!v.lower->is_zero())
      out << detail::line("LO", "BND", v.name, detail::number(*v.lower)) << "\n";
    if (v.upper) out << detail::line("UP", "BND", v.name, detail::number(*v.upper)) << "\n";
  }
  out << "ENDATA\n";
  return out.str();
}

/// Reader for the subset of MPS that emit_mps produces (whitespace separated
/// fields; NAME, OBJSENSE, ROWS, COLUMNS with markers, RHS, BOUNDS). Integer
/// columns must end up with bounds [0, 1].
inline MipModel parse_mps(const std::string& text) {
  MipModel model;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::string section;
  std::string objective_row;
  std::map<std::string, std::size_t> row_index;
  std::map<std::string, std::size_t> col_index;
  bool in_int = false;
  bool ended = false;

  auto fail = [&](const std::string& msg) -> void { throw ParseError(msg, line_no, 1); };
  auto value = [&](const std::string& s) {
    try {
      return Rational::parse_decimal(s);
    } catch (const std::exception&) {
      throw ParseError("malformed number '" + s + "'", line_no, 1);
    }
  };
  auto column = [&](const std::string& name) -> std::size_t {
    const auto it = col_index.find(name);
    if (it == col_index.end()) fail("unknown column '" + name + "'");
    return it->second;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw[0] == '*') continue;
    std::istringstream fields(raw);
    std::vector<std::string> f;
    for (std::string w; fields >> w;) f.push_back(w);
    if (f.empty()) continue;
    if (ended) fail("content after ENDATA");

    if (raw[0] != ' ' && raw[0] != '\t') {
      section = f[0];
      if (section == "NAME") {
        model.name = f.size() > 1 ? f[1] : "";
      } else if (section == "OBJSENSE") {
        if (f.size() > 1) model.maximize = f[1] == "MAX" || f[1] == "MAXIMIZE";
      } else if (section == "ENDATA") {
        ended = true;
      } else if (section != "ROWS" && section != "COLUMNS" && section != "RHS" && section != "BOUNDS") {
        fail("unsupported section '" + section + "'");
      }
      continue;
    }

    if (section == "OBJSENSE") {
      if (f[0] != "MAX" && f[0] != "MIN" && f[0] != "MAXIMIZE" && f[0] != "MINIMIZE") fail("bad OBJSENSE '" + f[0] + "'");
      model.maximize = f[0].rfind("MAX", 0) == 0;
    } else if (section == "ROWS") {
      if (f.size() != 2) fail("ROWS entry needs a type and a name");
      if (f[0] == "N") {
        if (!objective_row.empty()) fail("more than one objective row");
        objective_row = f[1];
        continue;
      }
      Sense s;
      if (f[0] == "L")
        s = Sense::LessEqual;
      else if (f[0] == "G")
        s = Sense::GreaterEqual;
      else if (f[0] == "E")
        s = Sense::Equal;
      else
        fail("unknown row type '" + f[0] + "'");
      if (!row_index.emplace(f[1], model.constraints.size()).second) fail("duplicate row '" + f[1] + "'");
      model.constraints.push_back({f[1], {}, s, Rational()});
    } else if (section == "COLUMNS") {
      if (f.size() >= 3 && f[1] == "'MARKER'") {
        if (f[2] == "'INTORG'")
          in_int = true;
        else if (f[2] == "'INTEND'")
          in_int = false;
        else
          fail("unknown marker " + f[2]);
        continue;
      }
      if (f.size() != 3 && f.size() != 5) fail("COLUMNS entry needs a name and one or two (row, value) pairs");
      auto it = col_index.find(f[0]);
      if (it == col_index.end()) {
        it = col_index.emplace(f[0], model.variables.size()).first;
        model.variables.push_back({f[0], in_int ? VarKind::Binary : VarKind::Continuous, Rational(0), std::nullopt});
      }
      for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
        const Rational c = value(f[k + 1]);
        if (f[k] == objective_row) {
          if (!c.is_zero()) model.objective.emplace_back(it->second, c);
          continue;
        }
        const auto r = row_index.find(f[k]);
        if (r == row_index.end()) fail("unknown row '" + f[k] + "'");
        model.constraints[r->second].terms.emplace_back(it->second, c);
      }
    } else if (section == "RHS") {
      if (f.size() != 3 && f.size() != 5) fail("RHS entry needs a set name and one or two (row, value) pairs");
      for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
        const auto r = row_index.find(f[k]);
        if (r == row_index.end()) fail("unknown row '" + f[k] + "'");
        model.constraints[r->second].rhs = value(f[k + 1]);
      }
    } else if (section == "BOUNDS") {
      if (f.size() < 3) fail("BOUNDS entry needs a type, a set name and a column");
      const std::size_t j = column(f[2]);
      auto& v = model.variables[j];
      const std::string& type = f[0];
      if (type == "FR") {
        v.lower.reset();
        v.upper.reset();
      } else if (type == "MI") {
        v.lower.reset();
      } else if (type == "PL") {
        v.upper.reset();
      } else if (type == "BV") {
        v.lower = Rational(0);
        v.upper = Rational(1);
        v.kind = VarKind::Binary;
      } else {
        if (f.size() != 4) fail("bound type " + type + " needs a value");
        const Rational b = value(f[3]);
        if (type == "UP") {
          v.upper = b;
        } else if (type == "LO") {
          v.lower = b;
        } else if (type == "FX") {
          v.lower = b;
          v.upper = b;
        } else {
          fail("unsupported bound type '" + type + "'");
        }
      }
    } else {
      fail("data line outside a section");
    }
  }
  if (!ended) throw ParseError("missing ENDATA", line_no, 1);
  for (const auto& v : model.variables)
    if (v.kind == VarKind::Binary && !(v.lower && v.upper && *v.lower == Rational(0) && *v.upper == Rational(1)))
      throw ParseError("integer column " + v.name + " is not binary; only 0/1 integers are supported", 0, 0);
  model.validate();
  return model;
}

}  // namespace cpwlkit::depthgate
