#include "r2f/parse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "r2f/errors.hpp"
#include "r2f/text.hpp"

namespace r2f::mapping {

namespace {

using nlohmann::json;

constexpr std::string_view kSequenceMarker = "Final Prompt Sequence:";
constexpr std::string_view kLevelMarker = "Visual Detail Level:";

std::optional<long> parse_integer(std::string_view s) {
  const std::string trimmed = text::trim(s);
  long value = 0;
  const char* begin = trimmed.data();
  const char* end = begin + trimmed.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || trimmed.empty()) return std::nullopt;
  return value;
}

}  // namespace

PromptPlan parse_r2f_response(const std::string& raw) {
  const auto lines = text::split_lines(raw);

  std::ptrdiff_t sequence_index = -1;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find(kSequenceMarker) != std::string::npos) {
      sequence_index = static_cast<std::ptrdiff_t>(i);
    }
  }
  if (sequence_index < 0) {
    fail(ErrorKind::format, "response has no 'Final Prompt Sequence:' line");
  }
  const std::string& sequence_line = lines[sequence_index];
  const auto sequence_pos = sequence_line.rfind(kSequenceMarker);
  const std::string sequence =
      text::trim(sequence_line.substr(sequence_pos + kSequenceMarker.size()));
  if (sequence.empty()) {
    fail(ErrorKind::format, "'Final Prompt Sequence:' line is empty");
  }

  std::optional<std::string> level_text;
  for (std::ptrdiff_t i = 0; i < sequence_index; ++i) {
    const auto pos = lines[i].rfind(kLevelMarker);
    if (pos != std::string::npos) {
      level_text = text::trim(lines[i].substr(pos + kLevelMarker.size()));
    }
  }

  std::vector<ConceptMapping> mappings;
  bool any_rare = false;
  for (const auto& segment_raw : text::split(sequence, " AND ")) {
    const std::string segment = text::trim(segment_raw);
    if (segment.empty()) {
      fail(ErrorKind::format, "empty concept segment in the prompt sequence");
    }
    ConceptMapping m;
    auto parts = text::split(segment, " BREAK ");
    for (auto& part : parts) {
      part = text::trim(part);
      if (part.empty()) {
        fail(ErrorKind::format, "empty chain element in segment '" + segment + "'");
      }
    }
    m.sub_prompt = parts.back();
    if (parts.size() > 1) {
      m.rare_concept = parts.back();
      m.frequent_chain.assign(parts.begin(), parts.end() - 1);
      any_rare = true;
    }
    mappings.push_back(std::move(m));
  }

  if (level_text) {
    std::vector<long> levels;
    for (const auto& token : text::split(*level_text, "AND")) {
      const auto value = parse_integer(token);
      if (!value) {
        fail(ErrorKind::format, "cannot parse detail level '" +
                                    text::trim(token) + "'");
      }
      levels.push_back(*value);
    }
    if (levels.size() != mappings.size()) {
      fail(ErrorKind::consistency,
           "detail level count " + std::to_string(levels.size()) +
               " does not match concept count " +
               std::to_string(mappings.size()));
    }
    for (std::size_t i = 0; i < mappings.size(); ++i) {
      auto& m = mappings[i];
      if (!m.rare_concept) continue;  // value on a no-rare concept is ignored
      m.visual_detail_levels.assign(m.frequent_chain.size(),
                                    static_cast<int>(levels[i]));
    }
  } else if (any_rare) {
    fail(ErrorKind::format, "response has no 'Visual Detail Level:' line");
  }

  PromptPlan plan;
  std::size_t offset = 0;
  std::vector<std::string> rare_sides;
  for (auto& m : mappings) {
    m.span_offset = offset;
    offset += m.sub_prompt.size() + 5;  // " AND "
    rare_sides.push_back(m.sub_prompt);
  }
  plan.original_prompt = text::join(rare_sides, " AND ");
  plan.mappings = std::move(mappings);
  validate(plan);
  return plan;
}

namespace {

std::string extract_json_object(const std::string& raw) {
  const auto start = raw.find('{');
  if (start == std::string::npos) {
    fail(ErrorKind::format, "response contains no JSON object");
  }
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < raw.size(); ++i) {
    const char c = raw[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return raw.substr(start, i - start + 1);
    }
  }
  fail(ErrorKind::format, "unbalanced JSON object in response");
}

const json& require_field(const json& obj, const std::string& path,
                          const char* key) {
  if (!obj.contains(key)) {
    fail(ErrorKind::schema, path + key + ": missing");
  }
  return obj.at(key);
}

std::string require_string(const json& obj, const std::string& path,
                           const char* key) {
  const json& value = require_field(obj, path, key);
  if (!value.is_string()) {
    fail(ErrorKind::schema, path + key + ": expected a string");
  }
  return value.get<std::string>();
}

std::optional<std::string> key_index_error(const std::string& key) {
  if (key.size() < 2 || key[0] != '#') return "malformed key";
  if (key[1] == '0') return "leading zero";
  for (std::size_t i = 1; i < key.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(key[i]))) return "malformed key";
  }
  return std::nullopt;
}

struct BaseCapture {
  std::string key;
  std::size_t offset = 0;
  std::size_t length = 0;
};

// Aligns base_prompt (keys as wildcards between literal chunks) against
// original_prompt. The first literal anchors at the start, the last at the
// end, interior literals match leftmost-first; every key must capture a
// non-empty span.
std::vector<BaseCapture> align_base_prompt(const std::string& base,
                                           const std::string& original) {
  const auto occurrences = find_keys(base);
  if (occurrences.empty()) {
    fail(ErrorKind::schema, "base_prompt: contains no object keys");
  }
  std::vector<std::string> literals;
  std::size_t cursor = 0;
  for (const auto& occ : occurrences) {
    literals.push_back(base.substr(cursor, occ.offset - cursor));
    cursor = occ.offset + occ.key.size();
  }
  literals.push_back(base.substr(cursor));

  std::vector<BaseCapture> captures(occurrences.size());
  if (original.compare(0, literals.front().size(), literals.front()) != 0) {
    fail(ErrorKind::schema,
         "base_prompt: does not match the start of original_prompt");
  }
  std::size_t pos = literals.front().size();
  for (std::size_t j = 0; j < occurrences.size(); ++j) {
    captures[j].key = occurrences[j].key;
    captures[j].offset = pos;
    const std::string& literal = literals[j + 1];
    std::size_t literal_pos;
    if (j + 1 == occurrences.size()) {
      if (literal.size() + pos >= original.size() ||
          original.compare(original.size() - literal.size(), literal.size(),
                           literal) != 0) {
        fail(ErrorKind::schema,
             "base_prompt: does not match the end of original_prompt");
      }
      literal_pos = original.size() - literal.size();
    } else {
      if (literal.empty()) {
        fail(ErrorKind::schema,
             "base_prompt: adjacent keys without separating text");
      }
      literal_pos = original.find(literal, pos + 1);
      if (literal_pos == std::string::npos) {
        fail(ErrorKind::schema,
             "base_prompt: separator '" + literal +
                 "' not found in original_prompt");
      }
    }
    if (literal_pos <= pos) {
      fail(ErrorKind::schema,
           "base_prompt: key " + captures[j].key + " captures an empty span");
    }
    captures[j].length = literal_pos - pos;
    pos = literal_pos + literal.size();
  }
  return captures;
}

}  // namespace

RegionAwarePlan parse_r2f_plus_response(const std::string& raw) {
  json doc;
  try {
    doc = json::parse(extract_json_object(raw));
  } catch (const json::exception& e) {
    fail(ErrorKind::format, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    fail(ErrorKind::schema, "response root: expected an object");
  }

  RegionAwarePlan plan;
  plan.original_prompt = require_string(doc, "", "original_prompt");
  plan.base_prompt = require_string(doc, "", "base_prompt");
  const json& objects = require_field(doc, "", "objects");
  if (!objects.is_object()) {
    fail(ErrorKind::schema, "objects: expected an object");
  }
  if (objects.empty()) {
    fail(ErrorKind::schema, "objects: at least one object is required");
  }

  std::vector<long> indices;
  for (const auto& [key, value] : objects.items()) {
    (void)value;
    if (const auto problem = key_index_error(key)) {
      fail(ErrorKind::schema, "objects: bad key '" + key + "' (" + *problem + ")");
    }
    indices.push_back(*parse_integer(key.substr(1)));
  }
  std::sort(indices.begin(), indices.end());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] != static_cast<long>(i + 1)) {
      fail(ErrorKind::schema, "objects: keys must be #1..#" +
                                  std::to_string(indices.size()));
    }
  }

  for (const auto& [key, value] : objects.items()) {
    const std::string path = "objects." + key + ".";
    if (!value.is_object()) {
      fail(ErrorKind::schema, "objects." + key + ": expected an object");
    }
    ObjectSpec spec;
    spec.object_prompt = require_string(value, path, "prompt");
    spec.object_name = require_string(value, path, "object");

    const auto prompt_keys = find_keys(spec.object_prompt);
    if (prompt_keys.size() != 1 || prompt_keys.front().key != key) {
      fail(ErrorKind::schema,
           path + "prompt: must contain exactly one placeholder, its own key " +
               key);
    }

    const json& chain = require_field(value, path, "r2f");
    if (!chain.is_array()) {
      fail(ErrorKind::schema, path + "r2f: expected an array of strings");
    }
    for (const auto& element : chain) {
      if (!element.is_string() || element.get<std::string>().empty()) {
        fail(ErrorKind::schema, path + "r2f: elements must be non-empty strings");
      }
      spec.mapping.frequent_chain.push_back(element.get<std::string>());
    }

    const json& levels = require_field(value, path, "visual_detail_levels");
    if (!levels.is_array()) {
      fail(ErrorKind::schema,
           path + "visual_detail_levels: expected an array of integers");
    }
    for (const auto& element : levels) {
      if (!element.is_number_integer()) {
        fail(ErrorKind::schema,
             path + "visual_detail_levels: elements must be integers");
      }
      spec.mapping.visual_detail_levels.push_back(element.get<int>());
    }
    if (spec.mapping.visual_detail_levels.size() !=
        spec.mapping.frequent_chain.size()) {
      fail(ErrorKind::schema,
           path + "visual_detail_levels: length does not match r2f");
    }
    int previous = 0;
    for (int level : spec.mapping.visual_detail_levels) {
      if (level < 1 || level > 5) {
        fail(ErrorKind::schema,
             path + "visual_detail_levels: value " + std::to_string(level) +
                 " outside 1..5");
      }
      if (level < previous) {
        fail(ErrorKind::schema,
             path + "visual_detail_levels: values must be non-decreasing");
      }
      previous = level;
    }

    const json& bbox = require_field(value, path, "bbox");
    if (!bbox.is_array() || bbox.size() != 4) {
      fail(ErrorKind::schema, path + "bbox: expected [x0, y0, x1, y1]");
    }
    for (const auto& coordinate : bbox) {
      if (!coordinate.is_number()) {
        fail(ErrorKind::schema, path + "bbox: coordinates must be numbers");
      }
    }
    spec.bbox = {bbox[0].get<double>(), bbox[1].get<double>(),
                 bbox[2].get<double>(), bbox[3].get<double>()};
    const bool bbox_ok = 0.0 <= spec.bbox.x0 && spec.bbox.x0 < spec.bbox.x1 &&
                         spec.bbox.x1 <= 1.0 && 0.0 <= spec.bbox.y0 &&
                         spec.bbox.y0 < spec.bbox.y1 && spec.bbox.y1 <= 1.0;
    if (!bbox_ok) {
      fail(ErrorKind::schema,
           path + "bbox: requires 0 <= x0 < x1 <= 1 and 0 <= y0 < y1 <= 1");
    }
    plan.objects.emplace(key, std::move(spec));
  }

  std::vector<BaseCapture> captures;
  {
    std::vector<std::string> seen;
    for (const auto& occ : find_keys(plan.base_prompt)) {
      if (std::find(seen.begin(), seen.end(), occ.key) != seen.end()) {
        fail(ErrorKind::schema,
             "base_prompt: key " + occ.key + " appears more than once");
      }
      seen.push_back(occ.key);
      if (!plan.objects.count(occ.key)) {
        fail(ErrorKind::schema,
             "base_prompt: references undefined object key " + occ.key);
      }
    }
    for (const auto& [key, spec] : plan.objects) {
      (void)spec;
      if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
        fail(ErrorKind::schema,
             "base_prompt: does not reference object key " + key);
      }
    }
    captures = align_base_prompt(plan.base_prompt, plan.original_prompt);
  }
  for (const auto& capture : captures) {
    ObjectSpec& spec = plan.objects.at(capture.key);
    spec.original_span = {capture.offset, capture.length};
    spec.mapping.sub_prompt =
        plan.original_prompt.substr(capture.offset, capture.length);
    spec.mapping.span_offset = capture.offset;
    if (!spec.mapping.frequent_chain.empty()) {
      spec.mapping.rare_concept = spec.mapping.sub_prompt;
    }
  }

  validate(plan);
  return plan;
}

}  // namespace r2f::mapping
