#pragma once

#include <string>

#include <json.hpp>

#include "unitforge/biquad_field.hpp"
#include "unitforge/quad_field.hpp"

namespace unitforge {

using Json = nlohmann::json;

Rat parse_rational(const std::string& s);

/// Parses "x + y*sqrt(D)"-style strings. Radical arguments must literally
/// match the field: sqrt(D) for the quadratic field, sqrt(d1)/sqrt(d2)/
/// sqrt(d3) for the biquadratic one.
QuadElem parse_quad_elem(const std::string& s, const QuadField& field);
BiquadElem parse_biquad_elem(const std::string& s, const BiquadField& field);

// ---- JSON forms ----
// quad:   {"D": n, "x": "p/q", "y": "p/q"}
// biquad: {"d1": n, "d2": n, "coords": ["p/q", "p/q", "p/q", "p/q"]}
// Field generators too large for int64 serialize as decimal strings.

Json int_to_json(const Int& n);
Int int_from_json(const Json& j);

Json quad_elem_to_json(const QuadElem& e);
QuadElem quad_elem_from_json(const Json& j);

Json biquad_elem_to_json(const BiquadElem& e);
BiquadElem biquad_elem_from_json(const Json& j);

}  // namespace unitforge
