#pragma once

#include "unitforge/northcott.hpp"
#include "unitforge/parse.hpp"

namespace unitforge {

// Base-field descriptors:
//   {"kind":"Q"} | {"kind":"quad","D":n} | {"kind":"biquad","d1":n,"d2":n}

inline Json base_to_json(const RationalBase&) { return Json{{"kind", "Q"}}; }
inline Json base_to_json(const QuadField& f) {
  return Json{{"kind", "quad"}, {"D", int_to_json(f.D())}};
}
inline Json base_to_json(const BiquadField& f) {
  return Json{{"kind", "biquad"}, {"d1", int_to_json(f.d1())}, {"d2", int_to_json(f.d2())}};
}

template <class El>
El parse_element(const std::string& s, const typename ElementTraits<El>::Base& base);

template <>
inline Rat parse_element<Rat>(const std::string& s, const RationalBase&) {
  return parse_rational(s);
}
template <>
inline QuadElem parse_element<QuadElem>(const std::string& s, const QuadField& base) {
  return parse_quad_elem(s, base);
}
template <>
inline BiquadElem parse_element<BiquadElem>(const std::string& s,
                                            const BiquadField& base) {
  return parse_biquad_elem(s, base);
}

/// Gram matrices as JSON arrays of base-field element strings.
template <class El>
Json lattice_to_json(const GramLattice<El>& L) {
  Json rows = Json::array();
  for (const auto& row : L.gram()) {
    Json r = Json::array();
    for (const El& e : row) r.push_back(ElementTraits<El>::str(e));
    rows.push_back(std::move(r));
  }
  return Json{{"base", base_to_json(L.base())}, {"gram", rows}};
}

template <class El>
GramLattice<El> lattice_from_json(const Json& j,
                                  const typename ElementTraits<El>::Base& base) {
  const Json& rows = j.is_object() ? j.at("gram") : j;
  std::vector<std::vector<El>> gram;
  for (const Json& r : rows) {
    std::vector<El> row;
    for (const Json& cell : r)
      row.push_back(parse_element<El>(cell.get<std::string>(), base));
    gram.push_back(std::move(row));
  }
  return GramLattice<El>(base, std::move(gram));
}

template <class El>
Json vector_to_json(const std::vector<El>& v) {
  Json out = Json::array();
  for (const El& e : v) out.push_back(ElementTraits<El>::str(e));
  return out;
}

template <class El>
Json trace_to_json(const DescentTrace<El>& t) {
  Json levels = Json::array();
  for (const auto& level : t.levels) levels.push_back(vector_to_json(level));
  return Json{{"levels", levels},
              {"C", t.C_desc},
              {"threshold", t.threshold.get_str()},
              {"max_house_per_level", t.max_house_per_level}};
}

}  // namespace unitforge
