#include "r2f/mapping.hpp"

#include <cctype>
#include <set>
#include <string>

#include "r2f/errors.hpp"

namespace r2f::mapping {

std::vector<KeyOccurrence> find_keys(std::string_view s) {
  std::vector<KeyOccurrence> keys;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '#') continue;
    std::size_t end = i + 1;
    while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) {
      ++end;
    }
    if (end > i + 1) {
      keys.push_back({std::string(s.substr(i, end - i)), i});
      i = end - 1;
    }
  }
  return keys;
}

void validate(const ConceptMapping& m) {
  if (m.frequent_chain.size() != m.visual_detail_levels.size()) {
    fail(ErrorKind::consistency,
         "frequent chain length " + std::to_string(m.frequent_chain.size()) +
             " does not match detail level count " +
             std::to_string(m.visual_detail_levels.size()) + " for '" +
             m.sub_prompt + "'");
  }
  if (!m.rare_concept.has_value()) {
    if (!m.frequent_chain.empty()) {
      fail(ErrorKind::consistency,
           "mapping without a rare concept carries a frequent chain ('" +
               m.sub_prompt + "')");
    }
    return;
  }
  int previous = 0;
  for (int level : m.visual_detail_levels) {
    if (level < 1 || level > 5) {
      fail(ErrorKind::consistency,
           "visual detail level " + std::to_string(level) +
               " outside 1..5 for '" + m.sub_prompt + "'");
    }
    if (level < previous) {
      fail(ErrorKind::consistency,
           "visual detail levels decrease along the chain for '" +
               m.sub_prompt + "'");
    }
    previous = level;
  }
}

void validate(const BBox& box) {
  const bool ok = 0.0 <= box.x0 && box.x0 < box.x1 && box.x1 <= 1.0 &&
                  0.0 <= box.y0 && box.y0 < box.y1 && box.y1 <= 1.0;
  if (!ok) {
    fail(ErrorKind::schema, "invalid bbox [" + std::to_string(box.x0) + ", " +
                                std::to_string(box.y0) + ", " +
                                std::to_string(box.x1) + ", " +
                                std::to_string(box.y1) + "]");
  }
}

namespace {

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
  if (needle.empty()) return 0;
  std::size_t count = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + 1)) {
    ++count;
  }
  return count;
}

}  // namespace

std::vector<std::string> validate(const PromptPlan& plan) {
  std::vector<std::string> warnings;
  for (const auto& m : plan.mappings) {
    validate(m);
    if (!m.rare_concept) continue;
    const std::string& rare = *m.rare_concept;
    if (m.span_offset) {
      if (*m.span_offset + rare.size() > plan.original_prompt.size() ||
          plan.original_prompt.compare(*m.span_offset, rare.size(), rare) != 0) {
        fail(ErrorKind::consistency,
             "recorded span for '" + rare + "' does not match the prompt");
      }
    } else if (plan.original_prompt.find(rare) == std::string::npos) {
      fail(ErrorKind::consistency,
           "rare concept '" + rare + "' is not a substring of the prompt");
    }
    if (count_occurrences(plan.original_prompt, rare) > 1) {
      warnings.push_back("rare concept '" + rare +
                         "' occurs more than once; substitution uses the "
                         "recorded span or the first occurrence");
    }
    for (const auto& other : plan.mappings) {
      if (&other == &m || !other.rare_concept) continue;
      if (other.rare_concept->find(rare) != std::string::npos &&
          *other.rare_concept != rare) {
        warnings.push_back("rare concept '" + rare + "' is nested inside '" +
                           *other.rare_concept + "'");
      }
    }
  }
  return warnings;
}

std::vector<std::string> validate(const RegionAwarePlan& plan) {
  std::vector<std::string> warnings;
  std::set<std::string> base_keys;
  for (const auto& occurrence : find_keys(plan.base_prompt)) {
    base_keys.insert(occurrence.key);
  }
  for (const auto& [key, object] : plan.objects) {
    const auto prompt_keys = find_keys(object.object_prompt);
    if (prompt_keys.size() != 1 || prompt_keys.front().key != key) {
      fail(ErrorKind::schema,
           "object prompt for " + key +
               " must contain its own key exactly once and no other keys");
    }
    validate(object.mapping);
    validate(object.bbox);
    if (!base_keys.count(key)) {
      fail(ErrorKind::schema, "base_prompt does not reference object key " + key);
    }
  }
  for (const auto& key : base_keys) {
    if (!plan.objects.count(key)) {
      fail(ErrorKind::schema,
           "base_prompt references undefined object key " + key);
    }
  }
  return warnings;
}

}  // namespace r2f::mapping
