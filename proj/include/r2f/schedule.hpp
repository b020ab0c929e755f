#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "r2f/mapping.hpp"

namespace r2f::schedule {

// Visual-detail-level -> stop-point fraction map, indexed by V = 1..5.
struct DetailGrid {
  std::array<double, 5> fractions{0.9, 0.8, 0.6, 0.4, 0.2};
};

enum class Mode { alternating, interpolate, composable };

// Two step-parity conventions exist for which steps carry frequent text; they
// disagree for even T. frequent_first places frequent text on steps with
// (T - t) % 2 == 0 (so the very first step t = T is frequent) and is the
// default; odd_steps_frequent uses t % 2 == 1 instead.
enum class Parity { frequent_first, odd_steps_frequent };

struct WeightedPrompt {
  std::string prompt;
  double weight = 0.0;
};

struct StepDirective {
  int t = 0;  // decreasing sampling index, T..1
  std::variant<std::string, std::vector<WeightedPrompt>> content;

  bool is_plain() const { return content.index() == 0; }
  const std::string& plain() const { return std::get<std::string>(content); }
  const std::vector<WeightedPrompt>& blend() const {
    return std::get<std::vector<WeightedPrompt>>(content);
  }
};

struct Schedule {
  int T = 0;
  Mode mode = Mode::alternating;
  std::vector<StepDirective> directives;  // ordered t = T down to 1

  const StepDirective& at_step(int t) const;  // t in 1..T
};

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& name);

// S = floor(fraction[V] * T); the frequent element stays active while t > S.
int stop_point(int V, int T, const DetailGrid& grid = {});

// The plain prompt for step t under alternating guidance.
std::string scheduled_prompt(int t, const mapping::PromptPlan& plan, int T,
                             const DetailGrid& grid = {},
                             Parity parity = Parity::frequent_first);

Schedule build_schedule(const mapping::PromptPlan& plan, int T, Mode mode,
                        const DetailGrid& grid = {},
                        Parity parity = Parity::frequent_first);

// Per concept, how many directives expose one of its frequent-chain texts
// (counted by substring presence in plain or blended content). Equals
// ceil((T - S) / 2) for a single-concept alternating schedule.
std::vector<int> frequent_exposure_count(const Schedule& schedule,
                                         const mapping::PromptPlan& plan);

nlohmann::json to_json(const Schedule& schedule);

}  // namespace r2f::schedule
