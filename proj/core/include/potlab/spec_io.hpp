#pragma once

#include <string>
#include <string_view>

#include "potlab/distribution.hpp"

namespace potlab {

// Distribution spec format:
//   {"kind":"atomic","atoms":[[value,mass],...]}
//   {"kind":"uniform","lo":..,"hi":..}
//   {"kind":"exponential","rate":..}
//   {"kind":"hard_instance","n":..,"beta":..}
//   {"kind":"mixture","base":<spec>,"epsilon":..,"n":..}
// Throws std::invalid_argument on malformed input.
Distribution parse_distribution_spec(std::string_view json_text);

std::string distribution_spec_json(const Distribution& dist);

}  // namespace potlab
