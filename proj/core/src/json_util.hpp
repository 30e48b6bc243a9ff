#pragma once

#include "json.hpp"
#include "silp/ext_real.hpp"

namespace silp::detail {

using json = nlohmann::ordered_json;

/// Number when finite, otherwise "inf" / "-inf".
inline json ext_json(const ExtReal& v) {
  if (v.is_pos_inf()) return "inf";
  if (v.is_neg_inf()) return "-inf";
  return v.to_double();
}

}  // namespace silp::detail
