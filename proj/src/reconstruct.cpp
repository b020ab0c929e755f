#include "r2f/reconstruct.hpp"

#include <algorithm>

#include "r2f/errors.hpp"

namespace r2f::mapping {

namespace {

struct Replacement {
  std::size_t offset = 0;
  std::size_t length = 0;
  std::string text;
};

std::string apply_replacements(const std::string& base,
                               std::vector<Replacement> replacements) {
  std::sort(replacements.begin(), replacements.end(),
            [](const Replacement& a, const Replacement& b) {
              return a.offset > b.offset;
            });
  std::string out = base;
  for (const auto& r : replacements) {
    out.replace(r.offset, r.length, r.text);
  }
  return out;
}

const std::string& chain_element(const ConceptMapping& m, std::size_t index,
                                 const std::string& label) {
  if (index >= m.frequent_chain.size()) {
    fail(ErrorKind::range,
         "chain index " + std::to_string(index) + " out of bounds for " +
             label + " (chain length " +
             std::to_string(m.frequent_chain.size()) + ")");
  }
  return m.frequent_chain[index];
}

}  // namespace

std::string reconstruct(const PromptPlan& plan,
                        const std::vector<Selection>& selection) {
  if (selection.size() != plan.mappings.size()) {
    fail(ErrorKind::precondition,
         "selection count " + std::to_string(selection.size()) +
             " does not match concept count " +
             std::to_string(plan.mappings.size()));
  }
  std::vector<Replacement> replacements;
  for (std::size_t i = 0; i < plan.mappings.size(); ++i) {
    const ConceptMapping& m = plan.mappings[i];
    const auto* chosen = std::get_if<SelectChain>(&selection[i]);
    if (!chosen) continue;  // rare and original both leave the span untouched
    if (!m.rare_concept) {
      fail(ErrorKind::range,
           "chain selection for concept '" + m.sub_prompt +
               "', which has no rare concept");
    }
    const std::string& text = chain_element(m, chosen->index, "'" + m.sub_prompt + "'");
    std::size_t offset;
    if (m.span_offset) {
      offset = *m.span_offset;
    } else {
      offset = plan.original_prompt.find(*m.rare_concept);
      if (offset == std::string::npos) {
        fail(ErrorKind::reconstruction,
             "rare concept '" + *m.rare_concept +
                 "' not found in the original prompt");
      }
    }
    replacements.push_back({offset, m.rare_concept->size(), text});
  }
  return apply_replacements(plan.original_prompt, std::move(replacements));
}

std::string reconstruct_region_aware(
    const RegionAwarePlan& plan,
    const std::map<std::string, Selection>& selection,
    const std::optional<std::string>& target) {
  const std::string* tmpl = &plan.base_prompt;
  if (target) {
    const auto it = plan.objects.find(*target);
    if (it == plan.objects.end()) {
      fail(ErrorKind::reconstruction, "unknown target object key " + *target);
    }
    tmpl = &it->second.object_prompt;
  }
  std::vector<Replacement> replacements;
  for (const auto& occurrence : find_keys(*tmpl)) {
    const auto object_it = plan.objects.find(occurrence.key);
    if (object_it == plan.objects.end()) {
      fail(ErrorKind::reconstruction,
           "template references unknown object key " + occurrence.key);
    }
    const ObjectSpec& object = object_it->second;
    const auto selection_it = selection.find(occurrence.key);
    if (selection_it == selection.end()) {
      fail(ErrorKind::precondition,
           "no selection provided for object key " + occurrence.key);
    }
    std::string text;
    if (const auto* chosen = std::get_if<SelectChain>(&selection_it->second)) {
      text = chain_element(object.mapping, chosen->index, occurrence.key);
    } else {
      text = object.mapping.sub_prompt;  // rare text == the original span
    }
    replacements.push_back({occurrence.offset, occurrence.key.size(), text});
  }
  return apply_replacements(*tmpl, std::move(replacements));
}

PromptPlan to_prompt_plan(const RegionAwarePlan& plan) {
  PromptPlan out;
  out.original_prompt = plan.original_prompt;
  std::vector<std::pair<long, const ObjectSpec*>> ordered;
  for (const auto& [key, object] : plan.objects) {
    ordered.emplace_back(std::stol(key.substr(1)), &object);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [index, object] : ordered) {
    (void)index;
    ConceptMapping m = object->mapping;
    if (object->original_span) {
      m.span_offset = object->original_span->first;
    }
    out.mappings.push_back(std::move(m));
  }
  validate(out);
  return out;
}

namespace {

nlohmann::json object_to_json(const std::string& key, const std::string& name,
                              const ConceptMapping& mapping, const BBox& box) {
  nlohmann::json object;
  object["prompt"] = key;
  object["object"] = name;
  object["r2f"] = mapping.frequent_chain;
  object["visual_detail_levels"] = mapping.visual_detail_levels;
  object["bbox"] = {box.x0, box.y0, box.x1, box.y1};
  return object;
}

}  // namespace

nlohmann::json plan_to_json(const RegionAwarePlan& plan) {
  nlohmann::json doc;
  doc["original_prompt"] = plan.original_prompt;
  doc["base_prompt"] = plan.base_prompt;
  doc["objects"] = nlohmann::json::object();
  for (const auto& [key, object] : plan.objects) {
    const std::string prompt_with_key = object.object_prompt;
    doc["objects"][key] =
        object_to_json(key, object.object_name, object.mapping, object.bbox);
    doc["objects"][key]["prompt"] = prompt_with_key;
  }
  return doc;
}

nlohmann::json plan_to_json(const PromptPlan& plan) {
  const BBox full_frame{0.0, 0.0, 1.0, 1.0};
  nlohmann::json doc;
  doc["original_prompt"] = plan.original_prompt;
  doc["objects"] = nlohmann::json::object();

  std::vector<Replacement> key_substitutions;
  int next_key = 0;
  for (const auto& m : plan.mappings) {
    if (!m.rare_concept) continue;
    const std::string key = "#" + std::to_string(++next_key);
    std::size_t offset;
    if (m.span_offset) {
      offset = *m.span_offset;
    } else {
      offset = plan.original_prompt.find(*m.rare_concept);
      if (offset == std::string::npos) {
        fail(ErrorKind::reconstruction,
             "rare concept '" + *m.rare_concept +
                 "' not found in the original prompt");
      }
    }
    key_substitutions.push_back({offset, m.rare_concept->size(), key});
    doc["objects"][key] = object_to_json(key, m.sub_prompt, m, full_frame);
  }
  if (doc["objects"].empty()) {
    // No rare concept: one full-span object with an empty chain keeps the
    // document within the schema and round-trips to an equivalent plan.
    ConceptMapping whole;
    whole.sub_prompt = plan.original_prompt;
    doc["objects"]["#1"] =
        object_to_json("#1", plan.original_prompt, whole, full_frame);
    doc["base_prompt"] = "#1";
    return doc;
  }
  doc["base_prompt"] =
      apply_replacements(plan.original_prompt, std::move(key_substitutions));
  return doc;
}

}  // namespace r2f::mapping
