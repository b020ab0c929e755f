#pragma once

#include <string>

#include "r2f/mapping.hpp"

namespace r2f::mapping {

// Parses the free-text mapping format: a "Final Prompt Sequence:" line whose
// segments are separated by " AND ", with " BREAK " separating the frequent
// chain (general -> specific) from the trailing rare concept, plus a
// "Visual Detail Level:" line carrying one value per concept.
PromptPlan parse_r2f_response(const std::string& raw);

// Parses the structured JSON mapping format (stringified object, possibly
// wrapped in prose or code fencing) into a validated region-aware plan.
RegionAwarePlan parse_r2f_plus_response(const std::string& raw);

}  // namespace r2f::mapping
