#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace r2f::mapping {

// One rare-to-frequent concept mapping: the sub-prompt it applies to, the rare
// span (absent when nothing rare was found), and the frequent chain ordered
// general -> specific with one visual detail level per element.
struct ConceptMapping {
  std::string sub_prompt;
  std::optional<std::string> rare_concept;
  std::vector<std::string> frequent_chain;
  std::vector<int> visual_detail_levels;
  // Byte offset of the mapped span inside the owning prompt, when the parser
  // located it. Substitution falls back to first-occurrence search without it.
  std::optional<std::size_t> span_offset;
};

struct PromptPlan {
  std::string original_prompt;
  std::vector<ConceptMapping> mappings;
};

struct BBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;
};

struct ObjectSpec {
  std::string object_prompt;  // contains the object's own key exactly once
  std::string object_name;
  ConceptMapping mapping;
  BBox bbox;
  // Span of this object's text inside RegionAwarePlan::original_prompt.
  std::optional<std::pair<std::size_t, std::size_t>> original_span;
};

struct RegionAwarePlan {
  std::string original_prompt;
  std::string base_prompt;  // contains placeholder keys "#1".."#m"
  std::map<std::string, ObjectSpec> objects;
};

// Per-concept substitution choice used by the reconstruction ops.
struct SelectOriginal {};
struct SelectRare {};
struct SelectChain {
  std::size_t index = 0;  // 0-based into frequent_chain, general -> specific
};
using Selection = std::variant<SelectOriginal, SelectRare, SelectChain>;

struct KeyOccurrence {
  std::string key;
  std::size_t offset = 0;
};

// Scans for placeholder tokens "#<digits>" using maximal digit runs, so "#1"
// never matches inside "#12".
std::vector<KeyOccurrence> find_keys(std::string_view s);

void validate(const ConceptMapping& m);
void validate(const BBox& box);

// Throws on invariant violations; returns human-readable warnings for
// conditions the formats leave open (duplicate spans, nested spans).
std::vector<std::string> validate(const PromptPlan& plan);
std::vector<std::string> validate(const RegionAwarePlan& plan);

}  // namespace r2f::mapping
