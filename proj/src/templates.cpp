#include "r2f/templates.hpp"

#include "r2f/errors.hpp"
#include "r2f/template_data.hpp"

namespace r2f::templates {

std::string_view id_string(Id id) {
  switch (id) {
    case Id::r2f: return "r2f";
    case Id::r2f_plus: return "r2f_plus";
    case Id::rareness: return "rareness";
    case Id::rubric: return "rubric";
  }
  return "";
}

std::string_view system_text(Id id) {
  switch (id) {
    case Id::r2f: return data::r2f_system;
    case Id::r2f_plus: return data::r2f_plus_system;
    default: return {};
  }
}

std::string_view user_text(Id id) {
  switch (id) {
    case Id::r2f: return data::r2f_user;
    case Id::r2f_plus: return data::r2f_plus_user;
    case Id::rareness: return data::rareness;
    case Id::rubric: return data::rubric;
  }
  return {};
}

std::string_view slot_marker(Id id) {
  switch (id) {
    case Id::r2f: return "{USER PROMPT}";
    case Id::r2f_plus: return "{INPUT}";
    case Id::rareness: return "PROMPT";
    case Id::rubric: return "[PROMPT]";
  }
  return {};
}

std::string fill(Id id, const std::string& prompt) {
  if (prompt.empty()) {
    fail(ErrorKind::precondition, "prompt must be non-empty");
  }
  const std::string_view tmpl = user_text(id);
  const std::string_view marker = slot_marker(id);
  const auto pos = tmpl.find(marker);
  if (pos == std::string_view::npos) {
    fail(ErrorKind::configuration,
         "template " + std::string(id_string(id)) + " lost its slot marker");
  }
  std::string out(tmpl);
  out.replace(pos, marker.size(), prompt);
  return out;
}

std::string extract_filled(Id id, const std::string& filled) {
  const std::string_view tmpl = user_text(id);
  const std::string_view marker = slot_marker(id);
  const auto pos = tmpl.find(marker);
  const std::string_view prefix = tmpl.substr(0, pos);
  const std::string_view suffix = tmpl.substr(pos + marker.size());
  if (filled.size() < prefix.size() + suffix.size() ||
      filled.compare(0, prefix.size(), prefix) != 0 ||
      filled.compare(filled.size() - suffix.size(), suffix.size(), suffix) !=
          0) {
    fail(ErrorKind::protocol,
         "message does not embed the " + std::string(id_string(id)) +
             " template");
  }
  return filled.substr(prefix.size(),
                       filled.size() - prefix.size() - suffix.size());
}

std::array<Resource, 6> resources() {
  return {{
      {"r2f_system", data::r2f_system},
      {"r2f_user", data::r2f_user},
      {"r2f_plus_system", data::r2f_plus_system},
      {"r2f_plus_user", data::r2f_plus_user},
      {"rareness", data::rareness},
      {"rubric", data::rubric},
  }};
}

}  // namespace r2f::templates
