#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "r2f/mapping.hpp"

namespace r2f::mapping {

// Rebuilds a prompt from a plan by substituting, per concept, either the rare
// text (or the untouched original span) or one frequent-chain element.
// Substitution happens at the recorded span when present, otherwise at the
// first occurrence of the rare concept.
std::string reconstruct(const PromptPlan& plan,
                        const std::vector<Selection>& selection);

// Key substitution over base_prompt (target == nullopt) or over the object
// prompt of the given key. Every "#N" occurrence in the target template is
// replaced with the selected text for that object.
std::string reconstruct_region_aware(
    const RegionAwarePlan& plan,
    const std::map<std::string, Selection>& selection,
    const std::optional<std::string>& target = std::nullopt);

// Flattens a region-aware plan into the span-based form used by the
// scheduler. Objects are ordered by key index.
PromptPlan to_prompt_plan(const RegionAwarePlan& plan);

// Canonical on-disk plan document. A PromptPlan is written in the same shape
// by substituting synthetic keys for its rare spans (a plan without any rare
// concept becomes a single full-span object with an empty chain); bounding
// boxes default to the full frame.
nlohmann::json plan_to_json(const RegionAwarePlan& plan);
nlohmann::json plan_to_json(const PromptPlan& plan);

}  // namespace r2f::mapping
