#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "r2f/errors.hpp"
#include "r2f/mapping.hpp"
#include "r2f/schedule.hpp"

using namespace r2f;

namespace {

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::argument;
}

// Integer-exact stop point: the level fractions are all exact tenths.
int stop_oracle(int V, int T) {
  static const int numerator[] = {9, 8, 6, 4, 2};
  return numerator[V - 1] * T / 10;
}

struct SimConcept {
  std::string rare;
  std::vector<std::string> chain;
  std::vector<int> levels;
  bool is_rare = true;
};

mapping::PromptPlan make_plan(const std::vector<SimConcept>& concepts) {
  mapping::PromptPlan plan;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    if (i > 0) {
      plan.original_prompt += " | ";
      offset += 3;
    }
    plan.original_prompt += concepts[i].rare;
    mapping::ConceptMapping m;
    m.sub_prompt = concepts[i].rare;
    if (concepts[i].is_rare) m.rare_concept = concepts[i].rare;
    m.frequent_chain = concepts[i].chain;
    m.visual_detail_levels = concepts[i].levels;
    m.span_offset = offset;
    plan.mappings.push_back(std::move(m));
    offset += concepts[i].rare.size();
  }
  return plan;
}

bool sim_frequent_step(int t, int T, schedule::Parity parity) {
  if (parity == schedule::Parity::frequent_first) return (T - t) % 2 == 0;
  return t % 2 == 1;
}

// Rule-by-rule re-derivation of the alternating directive, kept independent
// of the library implementation: integer stop points, explicit suffix and
// parity gates, per-concept chain selection.
std::string sim_directive(const std::vector<SimConcept>& concepts, int t,
                          int T, schedule::Parity parity) {
  int last_stop = T;
  bool any_rare = false;
  for (const auto& c : concepts) {
    if (!c.is_rare) continue;
    const int last =
        c.levels.empty() ? T : stop_oracle(c.levels.back(), T);
    last_stop = any_rare ? std::min(last_stop, last) : last;
    any_rare = true;
  }

  std::vector<std::string> parts;
  const auto original = [&] {
    parts.clear();
    for (const auto& c : concepts) parts.push_back(c.rare);
  };
  if (!any_rare || t <= last_stop || !sim_frequent_step(t, T, parity)) {
    original();
  } else {
    for (const auto& c : concepts) {
      std::string chosen = c.rare;
      if (c.is_rare) {
        for (std::size_t k = 0; k < c.levels.size(); ++k) {
          if (t > stop_oracle(c.levels[k], T)) {
            chosen = c.chain[k];
            break;
          }
        }
      }
      parts.push_back(chosen);
    }
  }
  std::string text;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) text += " | ";
    text += parts[i];
  }
  return text;
}

}  // namespace

TEST_CASE("stop points floor exactly for every level and horizon") {
  for (int T = 1; T <= 200; ++T) {
    for (int V = 1; V <= 5; ++V) {
      CAPTURE(T);
      CAPTURE(V);
      CHECK(schedule::stop_point(V, T) == stop_oracle(V, T));
    }
  }
  CHECK(schedule::stop_point(1, 50) == 45);
  CHECK(schedule::stop_point(5, 50) == 10);
  CHECK(schedule::stop_point(3, 10) == 6);

  CHECK(kind_of([] { schedule::stop_point(0, 10); }) == ErrorKind::range);
  CHECK(kind_of([] { schedule::stop_point(6, 10); }) == ErrorKind::range);
  try {
    schedule::stop_point(3, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::argument);
    CHECK(e.message() == "T must be at least 1, got 0");
  }
}

TEST_CASE("mode names round-trip") {
  using schedule::Mode;
  for (const auto mode :
       {Mode::alternating, Mode::interpolate, Mode::composable}) {
    CHECK(schedule::mode_from_string(schedule::to_string(mode)) == mode);
  }
  CHECK(kind_of([] { schedule::mode_from_string("banded"); }) ==
        ErrorKind::argument);
}

TEST_CASE("alternating guidance walks frequent text on alternate steps") {
  const auto plan = make_plan({{"R", {"F"}, {3}}});
  const int T = 6;  // S = 3
  const char* expected[] = {"F", "R", "F", "R", "R", "R"};  // t = 6..1
  for (int t = T; t >= 1; --t) {
    CAPTURE(t);
    CHECK(schedule::scheduled_prompt(t, plan, T) == expected[T - t]);
  }
  const auto sched = schedule::build_schedule(plan, T, schedule::Mode::alternating);
  REQUIRE(sched.directives.size() == 6);
  for (int t = T; t >= 1; --t) {
    REQUIRE(sched.at_step(t).is_plain());
    CHECK(sched.at_step(t).plain() == expected[T - t]);
    CHECK(sched.at_step(t).t == t);
  }
  CHECK(schedule::frequent_exposure_count(sched, plan) == std::vector<int>{2});

  CHECK(kind_of([&] { sched.at_step(0); }) == ErrorKind::range);
  CHECK(kind_of([&] { sched.at_step(7); }) == ErrorKind::range);
  CHECK(kind_of([&] { schedule::scheduled_prompt(7, plan, T); }) ==
        ErrorKind::range);
  CHECK(kind_of([&] { schedule::scheduled_prompt(1, plan, 0); }) ==
        ErrorKind::argument);
}

TEST_CASE("the two parity conventions differ only for even horizons") {
  const auto plan = make_plan({{"R", {"F"}, {3}}});
  // T = 6, S = 3: frequent-first puts F on t = 6, 4; odd-step parity on t = 5.
  const auto first = schedule::build_schedule(plan, 6, schedule::Mode::alternating,
                                              {}, schedule::Parity::frequent_first);
  const auto odd = schedule::build_schedule(plan, 6, schedule::Mode::alternating,
                                            {}, schedule::Parity::odd_steps_frequent);
  CHECK(first.at_step(6).plain() == "F");
  CHECK(first.at_step(5).plain() == "R");
  CHECK(first.at_step(4).plain() == "F");
  CHECK(odd.at_step(6).plain() == "R");
  CHECK(odd.at_step(5).plain() == "F");
  CHECK(odd.at_step(4).plain() == "R");

  for (int T = 1; T <= 11; T += 2) {
    const auto a = schedule::build_schedule(plan, T, schedule::Mode::alternating,
                                            {}, schedule::Parity::frequent_first);
    const auto b = schedule::build_schedule(plan, T, schedule::Mode::alternating,
                                            {}, schedule::Parity::odd_steps_frequent);
    for (int t = T; t >= 1; --t) {
      CAPTURE(T);
      CAPTURE(t);
      CHECK(a.at_step(t).plain() == b.at_step(t).plain());
    }
  }
}

TEST_CASE("exhaustive alternating schedules match the rule simulator") {
  const std::string rare_text[] = {"r1x", "r2x", "r3x"};
  const std::string freq_text[] = {"f1yf", "f2yf", "f3yf"};
  for (int T = 1; T <= 12; ++T) {
    for (int m = 1; m <= 3; ++m) {
      std::vector<int> levels(static_cast<std::size_t>(m), 1);
      while (true) {
        std::vector<SimConcept> concepts;
        for (int i = 0; i < m; ++i) {
          concepts.push_back({rare_text[i],
                              {freq_text[i]},
                              {levels[static_cast<std::size_t>(i)]}});
        }
        const auto plan = make_plan(concepts);
        for (const auto parity : {schedule::Parity::frequent_first,
                                  schedule::Parity::odd_steps_frequent}) {
          const auto sched = schedule::build_schedule(
              plan, T, schedule::Mode::alternating, {}, parity);
          REQUIRE(sched.directives.size() == static_cast<std::size_t>(T));
          int last_stop = T;
          for (int i = 0; i < m; ++i) {
            last_stop = i == 0 ? stop_oracle(levels[0], T)
                               : std::min(last_stop,
                                          stop_oracle(
                                              levels[static_cast<std::size_t>(i)], T));
          }
          for (int t = T; t >= 1; --t) {
            CAPTURE(T);
            CAPTURE(m);
            CAPTURE(t);
            REQUIRE(sched.at_step(t).is_plain());
            const std::string expected = sim_directive(concepts, t, T, parity);
            CHECK(sched.at_step(t).plain() == expected);
            // Pure-rare suffix: at or below the last stop point the schedule
            // must show the untouched prompt.
            if (t <= last_stop) CHECK(sched.at_step(t).plain() == plan.original_prompt);
            // Frequent text shows up exactly on frequent-parity steps past
            // the last stop point.
            CHECK((sched.at_step(t).plain() != plan.original_prompt) ==
                  (t > last_stop && sim_frequent_step(t, T, parity)));
          }
          // Per-concept exposure: each concept alternates independently of
          // its neighbors, so its count depends only on its own stop point.
          const auto counts = schedule::frequent_exposure_count(sched, plan);
          REQUIRE(counts.size() == static_cast<std::size_t>(m));
          if (parity == schedule::Parity::frequent_first) {
            for (int i = 0; i < m; ++i) {
              const int S = stop_oracle(levels[static_cast<std::size_t>(i)], T);
              CHECK(counts[static_cast<std::size_t>(i)] == (T - S + 1) / 2);
            }
          } else {
            for (int i = 0; i < m; ++i) {
              const int S = stop_oracle(levels[static_cast<std::size_t>(i)], T);
              int expected = 0;
              for (int t = S + 1; t <= T; ++t) expected += t % 2;
              CHECK(counts[static_cast<std::size_t>(i)] == expected);
            }
          }
        }
        // Next level combination (odometer over 1..5 per concept).
        int pos = m - 1;
        while (pos >= 0 && levels[static_cast<std::size_t>(pos)] == 5) {
          levels[static_cast<std::size_t>(pos)] = 1;
          --pos;
        }
        if (pos < 0) break;
        ++levels[static_cast<std::size_t>(pos)];
      }
    }
  }
}

TEST_CASE("multi-element chains walk general to specific to rare") {
  const std::pair<int, int> level_pairs[] = {{1, 4}, {2, 4}, {3, 3},
                                             {2, 5}, {4, 4}, {1, 5}};
  for (const auto [v_general, v_specific] : level_pairs) {
    for (int T = 1; T <= 12; ++T) {
      const std::vector<SimConcept> concepts = {
          {"r1x", {"f1yf", "g1yg"}, {v_general, v_specific}}};
      const auto plan = make_plan(concepts);
      const auto sched =
          schedule::build_schedule(plan, T, schedule::Mode::alternating);
      for (int t = T; t >= 1; --t) {
        CAPTURE(v_general);
        CAPTURE(v_specific);
        CAPTURE(T);
        CAPTURE(t);
        CHECK(sched.at_step(t).plain() ==
              sim_directive(concepts, t, T, schedule::Parity::frequent_first));
      }
    }
  }
}

TEST_CASE("plans without rare concepts schedule the original everywhere") {
  mapping::PromptPlan plan;
  plan.original_prompt = "A running dog";
  mapping::ConceptMapping m;
  m.sub_prompt = "A running dog";
  plan.mappings.push_back(m);
  for (const auto mode : {schedule::Mode::alternating, schedule::Mode::interpolate,
                          schedule::Mode::composable}) {
    const auto sched = schedule::build_schedule(plan, 8, mode);
    for (int t = 8; t >= 1; --t) {
      REQUIRE(sched.at_step(t).is_plain());
      CHECK(sched.at_step(t).plain() == "A running dog");
    }
    CHECK(schedule::frequent_exposure_count(sched, plan) == std::vector<int>{0});
  }
}

TEST_CASE("concepts expire independently at long horizons") {
  const auto plan = make_plan({{"r1x", {"f1yf"}, {1}},   // S = 45
                               {"r2x", {"f2yf"}, {5}}}); // S = 10
  const int T = 50;
  const auto sched = schedule::build_schedule(plan, T, schedule::Mode::alternating);
  // t = 44: past concept 2's stop, inside concept 1's rare window.
  CHECK(sched.at_step(44).plain() == "r1x | f2yf");
  // t = 46: both concepts still active on a frequent step.
  CHECK(sched.at_step(46).plain() == "f1yf | f2yf");
  // t = 45 and t = 43: rare-parity steps.
  CHECK(sched.at_step(45).plain() == "r1x | r2x");
  CHECK(sched.at_step(43).plain() == "r1x | r2x");
  // t = 10 and below: the suffix is pure original.
  for (int t = 10; t >= 1; --t) CHECK(sched.at_step(t).plain() == "r1x | r2x");
  const auto counts = schedule::frequent_exposure_count(sched, plan);
  CHECK(counts == std::vector<int>{3, 20});
}

TEST_CASE("interpolated guidance blends both sides while rare text is active") {
  const auto plan = make_plan({{"R", {"F"}, {3}}});
  const int T = 6;  // S = 3
  const auto sched = schedule::build_schedule(plan, T, schedule::Mode::interpolate);
  for (int t = 6; t >= 4; --t) {
    CAPTURE(t);
    REQUIRE_FALSE(sched.at_step(t).is_plain());
    const auto& blend = sched.at_step(t).blend();
    REQUIRE(blend.size() == 2);
    CHECK(blend[0].prompt == "R");
    CHECK(blend[0].weight == doctest::Approx(0.5));
    CHECK(blend[1].prompt == "F");
    CHECK(blend[1].weight == doctest::Approx(0.5));
  }
  for (int t = 3; t >= 1; --t) {
    REQUIRE(sched.at_step(t).is_plain());
    CHECK(sched.at_step(t).plain() == "R");
  }
  CHECK(schedule::frequent_exposure_count(sched, plan) == std::vector<int>{3});
}

TEST_CASE("composable guidance front-loads one or two blended steps") {
  // High detail level: the blend also covers the second step.
  const auto detailed = make_plan({{"A hairy hamburger", {"A hairy object"}, {5}}});
  const auto sched =
      schedule::build_schedule(detailed, 4, schedule::Mode::composable);
  for (int t : {4, 3}) {
    CAPTURE(t);
    REQUIRE_FALSE(sched.at_step(t).is_plain());
    const auto& blend = sched.at_step(t).blend();
    REQUIRE(blend.size() == 2);
    CHECK(blend[0].prompt == "A hairy hamburger");
    CHECK(blend[0].weight == doctest::Approx(0.3));
    CHECK(blend[1].prompt == "A hairy object");
    CHECK(blend[1].weight == doctest::Approx(0.7));
  }
  CHECK(sched.at_step(2).is_plain());
  CHECK(sched.at_step(1).is_plain());
  CHECK(schedule::frequent_exposure_count(sched, detailed) ==
        std::vector<int>{2});

  // Low detail level: only the first step blends.
  const auto coarse = make_plan({{"R", {"F"}, {3}}});
  const auto coarse_sched =
      schedule::build_schedule(coarse, 4, schedule::Mode::composable);
  CHECK_FALSE(coarse_sched.at_step(4).is_plain());
  CHECK(coarse_sched.at_step(3).is_plain());
  CHECK(coarse_sched.at_step(2).is_plain());

  // One-step budget is fine at low detail, a configuration error at high.
  const auto tiny = schedule::build_schedule(coarse, 1, schedule::Mode::composable);
  REQUIRE_FALSE(tiny.at_step(1).is_plain());
  CHECK(tiny.at_step(1).blend()[1].prompt == "F");
  CHECK(kind_of([&] {
          schedule::build_schedule(detailed, 1, schedule::Mode::composable);
        }) == ErrorKind::configuration);
}

TEST_CASE("schedules serialize with plain and blended directives") {
  const auto plan = make_plan({{"R", {"F"}, {3}}});
  const auto sched = schedule::build_schedule(plan, 4, schedule::Mode::interpolate);
  const auto doc = schedule::to_json(sched);
  CHECK(doc.at("T") == 4);
  CHECK(doc.at("mode") == "interpolate");
  REQUIRE(doc.at("directives").size() == 4);
  // T = 4, S = 2: blends at t = 4, 3; plain at t = 2, 1.
  const auto& first = doc.at("directives").at(0);
  CHECK(first.at("t") == 4);
  REQUIRE(first.contains("blend"));
  CHECK(first.at("blend").at(0).at("prompt") == "R");
  CHECK(first.at("blend").at(0).at("weight") == doctest::Approx(0.5));
  CHECK(first.at("blend").at(1).at("prompt") == "F");
  const auto& last = doc.at("directives").at(3);
  CHECK(last.at("t") == 1);
  CHECK(last.at("prompt") == "R");
  CHECK_FALSE(last.contains("blend"));
}

TEST_CASE("a no-chain concept beside a scheduled one stays rare") {
  std::vector<SimConcept> concepts = {{"plainx", {}, {}, false},
                                      {"r2x", {"f2yf"}, {3}}};
  const auto plan = make_plan(concepts);
  for (int T = 1; T <= 12; ++T) {
    const auto sched = schedule::build_schedule(plan, T, schedule::Mode::alternating);
    for (int t = T; t >= 1; --t) {
      CAPTURE(T);
      CAPTURE(t);
      CHECK(sched.at_step(t).plain() ==
            sim_directive(concepts, t, T, schedule::Parity::frequent_first));
    }
  }
}
