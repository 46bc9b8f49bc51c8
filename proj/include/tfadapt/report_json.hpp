#pragma once

// JSON serialization of the selection report:
// {"alpha":.., "windows":[lengths],
//  "segments":[{"start":.., "len":.., "entropies":[..], "chosen":..,
//               "degenerate":bool}]}

#include <json.hpp>

#include "tfadapt/adapt.hpp"

namespace tfadapt {

inline nlohmann::ordered_json to_json(const SelectionReport& report) {
  nlohmann::ordered_json j;
  j["alpha"] = report.alpha;
  j["windows"] = report.window_lengths;
  auto& segments = j["segments"] = nlohmann::ordered_json::array();
  for (const SelectionEntry& e : report.entries) {
    nlohmann::ordered_json s;
    s["start"] = e.start;
    s["len"] = e.length;
    s["entropies"] = e.entropies;
    s["chosen"] = e.chosen;
    s["degenerate"] = e.degenerate;
    segments.push_back(std::move(s));
  }
  return j;
}

}  // namespace tfadapt
