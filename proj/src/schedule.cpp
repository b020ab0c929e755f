#include "r2f/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "r2f/errors.hpp"
#include "r2f/reconstruct.hpp"

namespace r2f::schedule {

namespace {

bool frequent_step(int t, int T, Parity parity) {
  if (parity == Parity::frequent_first) return (T - t) % 2 == 0;
  return t % 2 == 1;
}

bool has_rare(const mapping::PromptPlan& plan) {
  return std::any_of(plan.mappings.begin(), plan.mappings.end(),
                     [](const mapping::ConceptMapping& m) {
                       return m.rare_concept.has_value();
                     });
}

struct ConceptStops {
  std::vector<int> per_element;  // aligned with frequent_chain
  int last = 0;                  // stop point of the final (most specific) element
};

std::vector<ConceptStops> stop_table(const mapping::PromptPlan& plan, int T,
                                     const DetailGrid& grid) {
  std::vector<ConceptStops> table;
  table.reserve(plan.mappings.size());
  for (const auto& m : plan.mappings) {
    ConceptStops stops;
    for (int level : m.visual_detail_levels) {
      stops.per_element.push_back(stop_point(level, T, grid));
    }
    stops.last = stops.per_element.empty() ? T : stops.per_element.back();
    table.push_back(std::move(stops));
  }
  return table;
}

// Smallest stop point over every chain element of every concept; once t falls
// to or below it, every concept has expired and only the original prompt is
// used. T when nothing is rare, so every step is the original prompt.
int last_stop(const std::vector<ConceptStops>& table,
              const mapping::PromptPlan& plan, int T) {
  int last = T;
  bool any = false;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!plan.mappings[i].rare_concept) continue;
    last = any ? std::min(last, table[i].last) : table[i].last;
    any = true;
  }
  return any ? last : T;
}

// First chain element still active at step t, or none when the concept has
// expired (or never had a chain).
std::optional<std::size_t> active_element(const ConceptStops& stops, int t) {
  for (std::size_t k = 0; k < stops.per_element.size(); ++k) {
    if (t > stops.per_element[k]) return k;
  }
  return std::nullopt;
}

// Prompt with every non-expired concept substituted by its active frequent
// element and every other concept left rare.
std::string frequent_side(const mapping::PromptPlan& plan,
                          const std::vector<ConceptStops>& table, int t) {
  std::vector<mapping::Selection> selection;
  selection.reserve(plan.mappings.size());
  for (std::size_t i = 0; i < plan.mappings.size(); ++i) {
    const auto active = plan.mappings[i].rare_concept
                            ? active_element(table[i], t)
                            : std::nullopt;
    if (active) {
      selection.emplace_back(mapping::SelectChain{*active});
    } else {
      selection.emplace_back(mapping::SelectRare{});
    }
  }
  return reconstruct(plan, selection);
}

void check_T(int T) {
  if (T < 1) {
    fail(ErrorKind::argument, "T must be at least 1, got " + std::to_string(T));
  }
}

int max_detail_level(const mapping::ConceptMapping& m) {
  int level = 0;
  for (int v : m.visual_detail_levels) level = std::max(level, v);
  return level;
}

}  // namespace

const StepDirective& Schedule::at_step(int t) const {
  if (t < 1 || t > T) {
    fail(ErrorKind::range, "step " + std::to_string(t) + " outside 1.." +
                               std::to_string(T));
  }
  return directives[static_cast<std::size_t>(T - t)];
}

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::alternating: return "alternating";
    case Mode::interpolate: return "interpolate";
    case Mode::composable: return "composable";
  }
  return "unknown";
}

Mode mode_from_string(const std::string& name) {
  if (name == "alternating") return Mode::alternating;
  if (name == "interpolate") return Mode::interpolate;
  if (name == "composable") return Mode::composable;
  fail(ErrorKind::argument, "unknown schedule mode '" + name + "'");
}

int stop_point(int V, int T, const DetailGrid& grid) {
  if (V < 1 || V > 5) {
    fail(ErrorKind::range,
         "visual detail level " + std::to_string(V) + " outside 1..5");
  }
  check_T(T);
  // The nudge keeps exact tenths (e.g. 0.6 * 10) from flooring one short.
  return static_cast<int>(
      std::floor(grid.fractions[static_cast<std::size_t>(V - 1)] * T + 1e-9));
}

std::string scheduled_prompt(int t, const mapping::PromptPlan& plan, int T,
                             const DetailGrid& grid, Parity parity) {
  check_T(T);
  if (t < 1 || t > T) {
    fail(ErrorKind::range, "step " + std::to_string(t) + " outside 1.." +
                               std::to_string(T));
  }
  if (!has_rare(plan)) return plan.original_prompt;
  const auto table = stop_table(plan, T, grid);
  if (t <= last_stop(table, plan, T)) return plan.original_prompt;
  if (!frequent_step(t, T, parity)) return plan.original_prompt;
  return frequent_side(plan, table, t);
}

Schedule build_schedule(const mapping::PromptPlan& plan, int T, Mode mode,
                        const DetailGrid& grid, Parity parity) {
  check_T(T);
  Schedule schedule;
  schedule.T = T;
  schedule.mode = mode;
  schedule.directives.reserve(static_cast<std::size_t>(T));

  const bool rare = has_rare(plan);
  const auto table = stop_table(plan, T, grid);
  const int S_last = last_stop(table, plan, T);

  const auto plain = [&](int t, std::string text) {
    schedule.directives.push_back({t, std::move(text)});
  };
  const auto blend = [&](int t, double rare_weight, std::string freq_text) {
    std::vector<WeightedPrompt> parts;
    parts.push_back({plan.original_prompt, rare_weight});
    parts.push_back({std::move(freq_text), 1.0 - rare_weight});
    schedule.directives.push_back({t, std::move(parts)});
  };

  switch (mode) {
    case Mode::alternating:
      for (int t = T; t >= 1; --t) {
        plain(t, scheduled_prompt(t, plan, T, grid, parity));
      }
      break;

    case Mode::interpolate:
      for (int t = T; t >= 1; --t) {
        if (rare && t > S_last) {
          blend(t, 0.5, frequent_side(plan, table, t));
        } else {
          plain(t, plan.original_prompt);
        }
      }
      break;

    case Mode::composable: {
      bool second_blend_step = false;
      for (const auto& m : plan.mappings) {
        if (m.rare_concept && max_detail_level(m) >= 4) {
          second_blend_step = true;
        }
      }
      if (second_blend_step && T < 2) {
        fail(ErrorKind::configuration,
             "composable guidance needs T >= 2 when any visual detail level "
             "is 4 or above");
      }
      for (int t = T; t >= 1; --t) {
        if (!rare || t < T - 1 || (t == T - 1 && !second_blend_step)) {
          plain(t, plan.original_prompt);
          continue;
        }
        std::vector<mapping::Selection> selection;
        for (std::size_t i = 0; i < plan.mappings.size(); ++i) {
          const auto& m = plan.mappings[i];
          const bool substitute =
              m.rare_concept &&
              (t == T || max_detail_level(m) >= 4);
          const auto active =
              substitute ? active_element(table[i], t) : std::nullopt;
          if (active) {
            selection.emplace_back(mapping::SelectChain{*active});
          } else {
            selection.emplace_back(mapping::SelectRare{});
          }
        }
        const std::string freq_text = reconstruct(plan, selection);
        if (freq_text == plan.original_prompt) {
          plain(t, plan.original_prompt);
        } else {
          blend(t, 0.3, freq_text);
        }
      }
      break;
    }
  }
  return schedule;
}

std::vector<int> frequent_exposure_count(const Schedule& schedule,
                                         const mapping::PromptPlan& plan) {
  std::vector<int> counts(plan.mappings.size(), 0);
  const auto texts_of = [](const StepDirective& d) {
    std::vector<const std::string*> texts;
    if (d.is_plain()) {
      texts.push_back(&d.plain());
    } else {
      for (const auto& part : d.blend()) texts.push_back(&part.prompt);
    }
    return texts;
  };
  for (const auto& directive : schedule.directives) {
    const auto texts = texts_of(directive);
    for (std::size_t i = 0; i < plan.mappings.size(); ++i) {
      const auto& chain = plan.mappings[i].frequent_chain;
      const bool exposed = std::any_of(
          chain.begin(), chain.end(), [&](const std::string& element) {
            return !element.empty() &&
                   std::any_of(texts.begin(), texts.end(),
                               [&](const std::string* text) {
                                 return text->find(element) !=
                                        std::string::npos;
                               });
          });
      if (exposed) ++counts[i];
    }
  }
  return counts;
}

nlohmann::json to_json(const Schedule& schedule) {
  nlohmann::json doc;
  doc["T"] = schedule.T;
  doc["mode"] = to_string(schedule.mode);
  doc["directives"] = nlohmann::json::array();
  for (const auto& directive : schedule.directives) {
    nlohmann::json entry;
    entry["t"] = directive.t;
    if (directive.is_plain()) {
      entry["prompt"] = directive.plain();
    } else {
      entry["blend"] = nlohmann::json::array();
      for (const auto& part : directive.blend()) {
        entry["blend"].push_back(
            {{"prompt", part.prompt}, {"weight", part.weight}});
      }
    }
    doc["directives"].push_back(std::move(entry));
  }
  return doc;
}

}  // namespace r2f::schedule
