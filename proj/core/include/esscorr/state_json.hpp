#pragma once

#include <optional>
#include <string>

#include "esscorr/fock.hpp"

namespace esscorr {

/// A state specification as read from JSON, e.g.
///   {"kind":"tmsv","xi":0.55,"cutoff":40}
///   {"kind":"coherent","alpha":{"re":1,"im":0},"beta":{"re":0,"im":0.5}}
///   {"kind":"mixture","components":[{"weight":0.5,"alpha":...,"beta":...}, ...]}
struct StateRequest {
  StateSpec spec;
  std::optional<int> cutoff;
};

StateRequest parse_state_json(const std::string& text);

std::string state_to_json(const StateSpec& spec, std::optional<int> cutoff = std::nullopt);

}  // namespace esscorr
