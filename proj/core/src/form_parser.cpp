#include "unitforge/form_parser.hpp"

namespace unitforge::detail {

namespace {

// "x12" or "x3^2"; returns (index, squared).
std::pair<int, bool> parse_var(const std::string& f) {
  if (f.size() < 2 || f[0] != 'x') throw ParseError("bad variable '" + f + "'");
  std::size_t p = 1;
  while (p < f.size() && std::isdigit(static_cast<unsigned char>(f[p]))) ++p;
  if (p == 1) throw ParseError("bad variable '" + f + "'");
  const int idx = std::stoi(f.substr(1, p - 1));
  if (idx < 1) throw ParseError("variable index must start at 1 in '" + f + "'");
  bool squared = false;
  if (p < f.size()) {
    if (f.substr(p) != "^2") throw ParseError("only ^2 powers are allowed in '" + f + "'");
    squared = true;
  }
  return {idx - 1, squared};
}

}  // namespace

std::vector<std::pair<int, FormTerm>> split_form_terms(const std::string& input) {
  std::string s;
  for (char ch : input)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw ParseError("empty form");

  std::vector<std::pair<int, FormTerm>> out;
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -sign;
      ++i;
    }
    if (i >= s.size()) throw ParseError("dangling sign in form");
    std::size_t start = i;
    int depth = 0;
    while (i < s.size() && (depth > 0 || (s[i] != '+' && s[i] != '-'))) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')') --depth;
      ++i;
    }
    if (depth != 0) throw ParseError("unbalanced parentheses in form");
    const std::string piece = s.substr(start, i - start);

    // factors at depth 0
    std::vector<std::string> factors;
    std::size_t p = 0, fstart = 0;
    for (depth = 0; p <= piece.size(); ++p) {
      if (p == piece.size() || (piece[p] == '*' && depth == 0)) {
        factors.push_back(piece.substr(fstart, p - fstart));
        fstart = p + 1;
        continue;
      }
      if (piece[p] == '(') ++depth;
      if (piece[p] == ')') --depth;
    }

    FormTerm t;
    std::vector<std::pair<int, bool>> vars;
    for (const std::string& f : factors) {
      if (f.empty()) throw ParseError("empty factor in '" + piece + "'");
      if (f[0] == 'x') {
        vars.push_back(parse_var(f));
      } else {
        if (!t.coef.empty())
          throw ParseError("multiple coefficient factors in '" + piece + "'");
        std::string c = f;
        if (c.size() >= 2 && c.front() == '(' && c.back() == ')')
          c = c.substr(1, c.size() - 2);
        t.coef = c;
      }
    }
    if (vars.size() == 1 && vars[0].second) {
      t.i = t.j = vars[0].first;
    } else if (vars.size() == 2 && !vars[0].second && !vars[1].second) {
      if (vars[0].first == vars[1].first) {
        t.i = t.j = vars[0].first;
      } else {
        t.i = vars[0].first;
        t.j = vars[1].first;
      }
    } else {
      throw ParseError("term '" + piece + "' is not quadratic (use xI^2 or xI*xJ)");
    }
    out.emplace_back(sign, std::move(t));
  }
  return out;
}

}  // namespace unitforge::detail
