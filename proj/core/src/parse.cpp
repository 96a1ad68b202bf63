#include "unitforge/parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "unitforge/errors.hpp"

namespace unitforge {

namespace {

std::string rat_str(const Rat& q) { return q.get_str(); }

Rat safe_rat(const std::string& s) {
  try {
    Rat v(s.c_str());
    v.canonicalize();
    return v;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational '" + s + "'");
  }
}

Int safe_int(const std::string& s) {
  try {
    return Int(s.c_str());
  } catch (const std::invalid_argument&) {
    throw ParseError("bad integer '" + s + "'");
  }
}

struct Term {
  Rat coef;
  Int radical;  // 1 when no sqrt factor
};

// Splits "a + b*sqrt(n) - sqrt(m)" into signed terms.
std::vector<Term> tokenize_element(const std::string& input) {
  std::string s;
  for (char ch : input)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw ParseError("empty element string");

  std::vector<Term> terms;
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -sign;
      ++i;
    }
    if (i >= s.size()) throw ParseError("dangling sign in '" + input + "'");
    std::size_t start = i;
    while (i < s.size() && s[i] != '+' && s[i] != '-') {
      if (s.compare(i, 5, "sqrt(") == 0) {
        i += 5;
        while (i < s.size() && s[i] != ')') ++i;
        if (i >= s.size()) throw ParseError("unterminated sqrt in '" + input + "'");
        ++i;
      } else {
        ++i;
      }
    }
    std::string piece = s.substr(start, i - start);

    Term t{Rat(sign), 1};
    const std::size_t sq = piece.find("sqrt(");
    if (sq == std::string::npos) {
      t.coef *= safe_rat(piece);
    } else {
      const std::size_t close = piece.find(')', sq);
      if (close != piece.size() - 1)
        throw ParseError("trailing characters after sqrt in '" + piece + "'");
      t.radical = safe_int(piece.substr(sq + 5, close - sq - 5));
      std::string coef = piece.substr(0, sq);
      if (!coef.empty() && coef.back() == '*') coef.pop_back();
      if (!coef.empty()) t.coef *= safe_rat(coef);
    }
    terms.push_back(std::move(t));
  }
  return terms;
}

}  // namespace

Rat parse_rational(const std::string& s) {
  std::string t;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  if (t.empty() || t.find_first_not_of("+-0123456789/") != std::string::npos)
    throw ParseError("bad rational '" + s + "'");
  try {
    Rat v(t.c_str());
    v.canonicalize();
    return v;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational '" + s + "'");
  }
}

QuadElem parse_quad_elem(const std::string& s, const QuadField& field) {
  Rat x(0), y(0);
  for (const auto& t : tokenize_element(s)) {
    if (t.radical == 1) {
      x += t.coef;
    } else if (t.radical == field.D()) {
      y += t.coef;
    } else {
      throw ParseError("sqrt(" + t.radical.get_str() + ") does not belong to Q(sqrt(" +
                       field.D().get_str() + "))");
    }
  }
  return {field, x, y};
}

BiquadElem parse_biquad_elem(const std::string& s, const BiquadField& field) {
  std::array<Rat, 4> c{Rat(0), Rat(0), Rat(0), Rat(0)};
  for (const auto& t : tokenize_element(s)) {
    if (t.radical == 1) {
      c[0] += t.coef;
    } else if (t.radical == field.d1()) {
      c[1] += t.coef;
    } else if (t.radical == field.d2()) {
      c[2] += t.coef;
    } else if (t.radical == field.d3()) {
      c[3] += t.coef;
    } else {
      throw ParseError("sqrt(" + t.radical.get_str() + ") does not belong to Q(sqrt(" +
                       field.d1().get_str() + "),sqrt(" + field.d2().get_str() + "))");
    }
  }
  return {field, c};
}

Json int_to_json(const Int& n) {
  if (n.fits_slong_p()) return Json(static_cast<std::int64_t>(n.get_si()));
  return Json(n.get_str());
}

Int int_from_json(const Json& j) {
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_string()) return Int(j.get<std::string>().c_str());
  throw ParseError("expected integer or decimal string");
}

Json quad_elem_to_json(const QuadElem& e) {
  return Json{{"D", int_to_json(e.field().D())},
              {"x", rat_str(e.x())},
              {"y", rat_str(e.y())}};
}

QuadElem quad_elem_from_json(const Json& j) {
  QuadField f(int_from_json(j.at("D")));
  return {f, parse_rational(j.at("x").get<std::string>()),
          parse_rational(j.at("y").get<std::string>())};
}

Json biquad_elem_to_json(const BiquadElem& e) {
  Json coords = Json::array();
  for (int i = 0; i < 4; ++i) coords.push_back(rat_str(e.c(i)));
  return Json{{"d1", int_to_json(e.field().d1())},
              {"d2", int_to_json(e.field().d2())},
              {"coords", coords}};
}

BiquadElem biquad_elem_from_json(const Json& j) {
  BiquadField f(int_from_json(j.at("d1")), int_from_json(j.at("d2")));
  const Json& coords = j.at("coords");
  if (!coords.is_array() || coords.size() != 4)
    throw ParseError("biquad coords must be a 4-element array");
  std::array<Rat, 4> c;
  for (int i = 0; i < 4; ++i)
    c[static_cast<std::size_t>(i)] =
        parse_rational(coords[static_cast<std::size_t>(i)].get<std::string>());
  return {f, c};
}

}  // namespace unitforge
