#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace r2f::templates {

// The four instruction templates shipped with the library. Their text is
// embedded at build time from resources/templates/ and guarded by golden
// content hashes in the test suite.
enum class Id { r2f, r2f_plus, rareness, rubric };

std::string_view id_string(Id id);

// System message for chat-style templates; empty when the template is a
// single user message.
std::string_view system_text(Id id);
std::string_view user_text(Id id);
std::string_view slot_marker(Id id);

// Splices the prompt into the template's slot. The prompt must be non-empty.
std::string fill(Id id, const std::string& prompt);

// Recovers the spliced prompt from a filled user message by slicing off the
// template text around the slot.
std::string extract_filled(Id id, const std::string& filled);

struct Resource {
  std::string_view name;
  std::string_view text;
};

// Every embedded template file, for content auditing.
std::array<Resource, 6> resources();

}  // namespace r2f::templates
