#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "r2f/errors.hpp"
#include "r2f/mapping.hpp"
#include "r2f/parse.hpp"
#include "r2f/reconstruct.hpp"

using namespace r2f;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string fixture(const std::string& rel) {
  return std::string(R2F_TEST_FIXTURE_DIR) + "/" + rel;
}

std::string replay_response(const std::string& name) {
  return json::parse(read_file(fixture("replay/" + name))).at("response");
}

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

}  // namespace

TEST_CASE("find_keys extracts maximal digit runs") {
  const auto keys = mapping::find_keys("#1 and #12x, #2");
  REQUIRE(keys.size() == 3);
  CHECK(keys[0].key == "#1");
  CHECK(keys[0].offset == 0);
  CHECK(keys[1].key == "#12");
  CHECK(keys[1].offset == 7);
  CHECK(keys[2].key == "#2");
  CHECK(keys[2].offset == 13);

  const auto adjacent = mapping::find_keys("#1#2");
  REQUIRE(adjacent.size() == 2);
  CHECK(adjacent[0].offset == 0);
  CHECK(adjacent[1].offset == 2);

  CHECK(mapping::find_keys("no keys # here").empty());
}

TEST_CASE("single-concept blocks parse to one mapping") {
  const auto plan =
      mapping::parse_r2f_response(replay_response("r2f-25505a81576e5238.json"));
  CHECK(plan.original_prompt == "A hairy hamburger");
  REQUIRE(plan.mappings.size() == 1);
  const auto& m = plan.mappings[0];
  CHECK(m.sub_prompt == "A hairy hamburger");
  REQUIRE(m.rare_concept.has_value());
  CHECK(*m.rare_concept == "A hairy hamburger");
  CHECK(m.frequent_chain == std::vector<std::string>{"A hairy object"});
  CHECK(m.visual_detail_levels == std::vector<int>{5});
  CHECK(m.span_offset == 0);

  const auto apple =
      mapping::parse_r2f_response(replay_response("r2f-991e97606862aa07.json"));
  REQUIRE(apple.mappings.size() == 1);
  CHECK(apple.mappings[0].frequent_chain ==
        std::vector<std::string>{"A banana-shaped red object"});
  CHECK(apple.mappings[0].visual_detail_levels == std::vector<int>{1});
}

TEST_CASE("a no-rare block keeps the prompt untouched") {
  const auto plan =
      mapping::parse_r2f_response(replay_response("r2f-ddb0c748f40b1019.json"));
  CHECK(plan.original_prompt == "A running dog");
  REQUIRE(plan.mappings.size() == 1);
  CHECK(plan.mappings[0].sub_prompt == "A running dog");
  CHECK_FALSE(plan.mappings[0].rare_concept.has_value());
  CHECK(plan.mappings[0].frequent_chain.empty());
  CHECK(plan.mappings[0].visual_detail_levels.empty());
}

TEST_CASE("two-concept block parses verbatim, mistakes included") {
  const auto plan =
      mapping::parse_r2f_response(replay_response("r2f-ea0dd6f3900f44c3.json"));
  CHECK(plan.original_prompt == "A horned lion AND A hairy lion");
  REQUIRE(plan.mappings.size() == 2);
  CHECK(plan.mappings[0].sub_prompt == "A horned lion");
  CHECK(plan.mappings[0].frequent_chain ==
        std::vector<std::string>{"A horned animal"});
  CHECK(plan.mappings[0].visual_detail_levels == std::vector<int>{3});
  CHECK(plan.mappings[0].span_offset == 0);
  // The source block really does end in "A hairy lion"; the parser must not
  // correct it.
  CHECK(plan.mappings[1].sub_prompt == "A hairy lion");
  CHECK(plan.mappings[1].frequent_chain ==
        std::vector<std::string>{"A hairy animal"});
  CHECK(plan.mappings[1].visual_detail_levels == std::vector<int>{5});
  CHECK(plan.mappings[1].span_offset == 18);
}

TEST_CASE("mapping case corpus parses to the recorded plans") {
  const json cases = json::parse(read_file(fixture("mapping_cases.json")));
  REQUIRE(cases.at("cases").size() >= 9);
  for (const auto& entry : cases.at("cases")) {
    CAPTURE(entry.at("original_prompt").get<std::string>());
    const auto plan =
        mapping::parse_r2f_response(entry.at("response").get<std::string>());
    CHECK(plan.original_prompt ==
          entry.at("parsed_original_prompt").get<std::string>());
    const auto& expected = entry.at("mappings");
    REQUIRE(plan.mappings.size() == expected.size());
    for (std::size_t i = 0; i < plan.mappings.size(); ++i) {
      const auto& m = plan.mappings[i];
      const auto& e = expected[i];
      CHECK(m.sub_prompt == e.at("sub_prompt").get<std::string>());
      if (e.contains("rare_concept")) {
        REQUIRE(m.rare_concept.has_value());
        CHECK(*m.rare_concept == e.at("rare_concept").get<std::string>());
      } else {
        CHECK_FALSE(m.rare_concept.has_value());
      }
      CHECK(m.frequent_chain ==
            e.at("frequent_chain").get<std::vector<std::string>>());
      CHECK(m.visual_detail_levels ==
            e.at("visual_detail_levels").get<std::vector<int>>());
    }
  }
}

TEST_CASE("free-text parse failures carry the right kinds") {
  CHECK(kind_of([] { mapping::parse_r2f_response("no sequence here"); }) ==
        ErrorKind::format);
  CHECK(kind_of([] {
          mapping::parse_r2f_response("Final Prompt Sequence:   ");
        }) == ErrorKind::format);
  CHECK(kind_of([] {
          mapping::parse_r2f_response(
              "Final Prompt Sequence: A BREAK B AND ");
        }) == ErrorKind::format);
  // One detail value, two concepts.
  CHECK(kind_of([] {
          mapping::parse_r2f_response(
              "Visual Detail Level: 3\n"
              "Final Prompt Sequence: A x BREAK B x AND C y BREAK D y");
        }) == ErrorKind::consistency);
  // Rare concepts present but no detail line at all.
  CHECK(kind_of([] {
          mapping::parse_r2f_response("Final Prompt Sequence: A x BREAK B x");
        }) == ErrorKind::format);
  CHECK(kind_of([] {
          mapping::parse_r2f_response(
              "Visual Detail Level: much\n"
              "Final Prompt Sequence: A x BREAK B x");
        }) == ErrorKind::format);
}

TEST_CASE("structured plan documents parse, fences and prose included") {
  const std::string raw = replay_response("r2f_plus-870945a35ff6e756.json");
  const auto plan = mapping::parse_r2f_plus_response(raw);
  CHECK(plan.original_prompt == "A hairy frog");
  CHECK(plan.base_prompt == "#1");
  REQUIRE(plan.objects.count("#1") == 1);
  const auto& object = plan.objects.at("#1");
  CHECK(object.object_prompt == "#1");
  CHECK(object.object_name == "A hairy frog");
  CHECK(object.mapping.sub_prompt == "A hairy frog");
  REQUIRE(object.mapping.rare_concept.has_value());
  CHECK(object.mapping.frequent_chain ==
        std::vector<std::string>{"A hairy animal"});
  CHECK(object.mapping.visual_detail_levels == std::vector<int>{5});
  CHECK(object.bbox.x0 == doctest::Approx(0.2));
  CHECK(object.bbox.y1 == doctest::Approx(0.8));

  const auto fenced = mapping::parse_r2f_plus_response(
      "Sure, here is the plan:\n```json\n" + raw + "\n```\nDone.");
  CHECK(fenced.base_prompt == plan.base_prompt);
  CHECK(fenced.original_prompt == plan.original_prompt);
}

namespace {

json minimal_plan_doc() {
  return json::parse(R"({
    "original_prompt": "A hairy frog",
    "base_prompt": "#1",
    "objects": {
      "#1": {
        "prompt": "#1",
        "object": "frog",
        "r2f": ["A hairy animal"],
        "visual_detail_levels": [5],
        "bbox": [0.2, 0.2, 0.8, 0.8]
      }
    }
  })");
}

ErrorKind plan_doc_kind(const json& doc) {
  return kind_of([&] { mapping::parse_r2f_plus_response(doc.dump()); });
}

}  // namespace

TEST_CASE("structured parse failures carry the right kinds") {
  CHECK(kind_of([] { mapping::parse_r2f_plus_response("no object at all"); }) ==
        ErrorKind::format);
  CHECK(kind_of([] { mapping::parse_r2f_plus_response("{\"a\": "); }) ==
        ErrorKind::format);
  CHECK(kind_of([] { mapping::parse_r2f_plus_response("{\"a\": nope}"); }) ==
        ErrorKind::format);

  auto doc = minimal_plan_doc();
  doc.erase("base_prompt");
  CHECK(plan_doc_kind(doc) == ErrorKind::schema);

  doc = minimal_plan_doc();
  doc["objects"] = json::object();
  CHECK(plan_doc_kind(doc) == ErrorKind::schema);

  doc = minimal_plan_doc();
  doc["objects"]["#0"] = doc["objects"]["#1"];
  CHECK(plan_doc_kind(doc) == ErrorKind::schema);

  doc = minimal_plan_doc();
  doc["objects"]["#01"] = doc["objects"]["#1"];
  CHECK(plan_doc_kind(doc) == ErrorKind::schema);

  // Keys must be consecutive #1..#m.
  doc = minimal_plan_doc();
  doc["objects"]["#3"] = doc["objects"]["#1"];
  CHECK(plan_doc_kind(doc) == ErrorKind::schema);

  doc = minimal_plan_doc();
  doc["objects"]["#1"]["prompt"] = "no key";
  CHECK(plan_doc_kind(doc) == ErrorKind::schema);

  doc = minimal_plan_doc();
  doc["objects"]["#1"]["prompt"] = "#1 next to #2";
  CHECK(plan_doc_kind(doc) == ErrorKind::schema);

  doc = minimal_plan_doc();
  doc["objects"]["#1"]["r2f"] = json::array({""});
  CHECK(plan_doc_kind(doc) == ErrorKind::schema);

  doc = minimal_plan_doc();
  doc["objects"]["#1"]["r2f"] = json::array({"a", "b"});
  CHECK(plan_doc_kind(doc) == ErrorKind::schema);  // level count mismatch

  doc = minimal_plan_doc();
  doc["objects"]["#1"]["visual_detail_levels"] = json::array({6});
  CHECK(plan_doc_kind(doc) == ErrorKind::schema);

  doc = minimal_plan_doc();
  doc["objects"]["#1"]["r2f"] = json::array({"a", "b"});
  doc["objects"]["#1"]["visual_detail_levels"] = json::array({4, 3});
  CHECK(plan_doc_kind(doc) == ErrorKind::schema);

  doc = minimal_plan_doc();
  doc["objects"]["#1"]["bbox"] = json::array({0.5, 0.5, 0.4, 0.9});
  CHECK(plan_doc_kind(doc) == ErrorKind::schema);

  doc = minimal_plan_doc();
  doc["objects"]["#1"]["bbox"] = json::array({0.0, 0.0, 1.0});
  CHECK(plan_doc_kind(doc) == ErrorKind::schema);

  doc = minimal_plan_doc();
  doc["base_prompt"] = "#1 and #1";
  CHECK(plan_doc_kind(doc) == ErrorKind::schema);

  doc = minimal_plan_doc();
  doc["base_prompt"] = "plain text";
  CHECK(plan_doc_kind(doc) == ErrorKind::schema);

  // Base prompt that cannot align with the original prompt.
  doc = minimal_plan_doc();
  doc["original_prompt"] = "Something else entirely";
  doc["base_prompt"] = "prefix #1";
  CHECK(plan_doc_kind(doc) == ErrorKind::schema);
}

TEST_CASE("mapping validation rejects inconsistent plans") {
  mapping::ConceptMapping m;
  m.sub_prompt = "a";
  m.rare_concept = "a";
  m.frequent_chain = {"b", "c"};
  m.visual_detail_levels = {2};
  CHECK(kind_of([&] { mapping::validate(m); }) == ErrorKind::consistency);

  m.visual_detail_levels = {2, 1};
  CHECK(kind_of([&] { mapping::validate(m); }) == ErrorKind::consistency);

  m.visual_detail_levels = {2, 6};
  CHECK(kind_of([&] { mapping::validate(m); }) == ErrorKind::consistency);

  mapping::ConceptMapping no_rare;
  no_rare.sub_prompt = "a";
  no_rare.frequent_chain = {"b"};
  no_rare.visual_detail_levels = {1};
  CHECK(kind_of([&] { mapping::validate(no_rare); }) ==
        ErrorKind::consistency);

  mapping::BBox box{0.5, 0.0, 0.5, 1.0};
  CHECK(kind_of([&] { mapping::validate(box); }) == ErrorKind::schema);

  mapping::PromptPlan plan;
  plan.original_prompt = "A red fox";
  mapping::ConceptMapping stray;
  stray.sub_prompt = "A blue fox";
  stray.rare_concept = "A blue fox";
  stray.frequent_chain = {"A blue animal"};
  stray.visual_detail_levels = {2};
  plan.mappings.push_back(stray);
  CHECK(kind_of([&] { mapping::validate(plan); }) == ErrorKind::consistency);
}

TEST_CASE("duplicate rare spans are flagged as warnings, not errors") {
  mapping::PromptPlan plan;
  plan.original_prompt = "a cat and a cat";
  mapping::ConceptMapping m;
  m.sub_prompt = "a cat";
  m.rare_concept = "a cat";
  m.frequent_chain = {"an animal"};
  m.visual_detail_levels = {2};
  plan.mappings.push_back(m);
  const auto warnings = mapping::validate(plan);
  CHECK_FALSE(warnings.empty());
}

TEST_CASE("reconstruct swaps the selected spans") {
  const auto hamburger =
      mapping::parse_r2f_response(replay_response("r2f-25505a81576e5238.json"));
  CHECK(mapping::reconstruct(hamburger, {mapping::SelectChain{0}}) ==
        "A hairy object");
  CHECK(mapping::reconstruct(hamburger, {mapping::SelectRare{}}) ==
        "A hairy hamburger");
  CHECK(mapping::reconstruct(hamburger, {mapping::SelectOriginal{}}) ==
        "A hairy hamburger");

  mapping::PromptPlan plan;
  plan.original_prompt = "A horned lion and a hairy frog";
  mapping::ConceptMapping lion;
  lion.sub_prompt = "A horned lion";
  lion.rare_concept = "A horned lion";
  lion.frequent_chain = {"A horned animal"};
  lion.visual_detail_levels = {3};
  lion.span_offset = 0;
  mapping::ConceptMapping frog;
  frog.sub_prompt = "a hairy frog";
  frog.rare_concept = "a hairy frog";
  frog.frequent_chain = {"a hairy animal"};
  frog.visual_detail_levels = {5};
  frog.span_offset = 18;
  plan.mappings = {lion, frog};

  CHECK(mapping::reconstruct(
            plan, {mapping::SelectChain{0}, mapping::SelectRare{}}) ==
        "A horned animal and a hairy frog");
  CHECK(mapping::reconstruct(
            plan, {mapping::SelectRare{}, mapping::SelectRare{}}) ==
        plan.original_prompt);
  CHECK(mapping::reconstruct(
            plan, {mapping::SelectChain{0}, mapping::SelectChain{0}}) ==
        "A horned animal and a hairy animal");

  CHECK(kind_of([&] {
          mapping::reconstruct(plan, {mapping::SelectRare{}});
        }) == ErrorKind::precondition);
  CHECK(kind_of([&] {
          mapping::reconstruct(
              plan, {mapping::SelectChain{1}, mapping::SelectRare{}});
        }) == ErrorKind::range);
}

TEST_CASE("reconstruct honors recorded spans over first occurrences") {
  mapping::PromptPlan plan;
  plan.original_prompt = "a cat and a cat";
  mapping::ConceptMapping m;
  m.sub_prompt = "a cat";
  m.rare_concept = "a cat";
  m.frequent_chain = {"a dog"};
  m.visual_detail_levels = {2};
  m.span_offset = 10;
  plan.mappings.push_back(m);
  CHECK(mapping::reconstruct(plan, {mapping::SelectChain{0}}) ==
        "a cat and a dog");

  // No span and no matching substring: reconstruction cannot proceed.
  mapping::PromptPlan broken;
  broken.original_prompt = "A red fox";
  mapping::ConceptMapping stray;
  stray.sub_prompt = "a zebra";
  stray.rare_concept = "a zebra";
  stray.frequent_chain = {"an animal"};
  stray.visual_detail_levels = {1};
  broken.mappings.push_back(stray);
  CHECK(kind_of([&] {
          mapping::reconstruct(broken, {mapping::SelectChain{0}});
        }) == ErrorKind::reconstruction);

  // SelectChain on a concept without a rare side is out of range.
  mapping::PromptPlan norare;
  norare.original_prompt = "A running dog";
  mapping::ConceptMapping plain;
  plain.sub_prompt = "A running dog";
  norare.mappings.push_back(plain);
  CHECK(kind_of([&] {
          mapping::reconstruct(norare, {mapping::SelectChain{0}});
        }) == ErrorKind::range);
}

TEST_CASE("region-aware reconstruction substitutes keys") {
  const auto plan =
      mapping::parse_r2f_plus_response(read_file(fixture("region/two_objects.json")));

  std::map<std::string, mapping::Selection> all_rare{
      {"#1", mapping::SelectRare{}}, {"#2", mapping::SelectRare{}}};
  CHECK(mapping::reconstruct_region_aware(plan, all_rare) ==
        "A horned lion and a hairy frog");

  std::map<std::string, mapping::Selection> mixed{
      {"#1", mapping::SelectChain{0}}, {"#2", mapping::SelectRare{}}};
  CHECK(mapping::reconstruct_region_aware(plan, mixed) ==
        "A lion wearing a party hat and a hairy frog");

  std::map<std::string, mapping::Selection> chain2{
      {"#2", mapping::SelectChain{1}}};
  CHECK(mapping::reconstruct_region_aware(plan, chain2, "#2") ==
        "a hairy dog shaped like a frog");

  const auto frog = mapping::parse_r2f_plus_response(
      replay_response("r2f_plus-870945a35ff6e756.json"));
  std::map<std::string, mapping::Selection> chain0{
      {"#1", mapping::SelectChain{0}}};
  CHECK(mapping::reconstruct_region_aware(frog, chain0) == "A hairy animal");

  CHECK(kind_of([&] {
          mapping::reconstruct_region_aware(plan, all_rare, "#9");
        }) == ErrorKind::reconstruction);
  std::map<std::string, mapping::Selection> missing{
      {"#1", mapping::SelectRare{}}};
  CHECK(kind_of([&] {
          mapping::reconstruct_region_aware(plan, missing);
        }) == ErrorKind::precondition);

  mapping::RegionAwarePlan dangling = plan;
  dangling.base_prompt = "#1 and #3";
  CHECK(kind_of([&] {
          mapping::reconstruct_region_aware(dangling, all_rare);
        }) == ErrorKind::reconstruction);
}

TEST_CASE("region-aware plans flatten to span-based plans") {
  const auto plan =
      mapping::parse_r2f_plus_response(read_file(fixture("region/two_objects.json")));
  const auto flat = mapping::to_prompt_plan(plan);
  CHECK(flat.original_prompt == "A horned lion and a hairy frog");
  REQUIRE(flat.mappings.size() == 2);
  CHECK(flat.mappings[0].sub_prompt == "A horned lion");
  CHECK(flat.mappings[0].span_offset == 0);
  CHECK(flat.mappings[1].sub_prompt == "a hairy frog");
  CHECK(flat.mappings[1].span_offset == 18);
  CHECK(flat.mappings[1].frequent_chain.size() == 2);
  CHECK(mapping::reconstruct(flat, {mapping::SelectRare{},
                                    mapping::SelectRare{}}) ==
        flat.original_prompt);
}

TEST_CASE("plan documents round-trip through serialization") {
  const std::string text = read_file(fixture("region/two_objects.json"));
  const auto plan = mapping::parse_r2f_plus_response(text);
  const auto doc = mapping::plan_to_json(plan);
  const auto reparsed = mapping::parse_r2f_plus_response(doc.dump());
  CHECK(reparsed.original_prompt == plan.original_prompt);
  CHECK(reparsed.base_prompt == plan.base_prompt);
  REQUIRE(reparsed.objects.size() == plan.objects.size());
  for (const auto& [key, object] : plan.objects) {
    const auto& other = reparsed.objects.at(key);
    CHECK(other.object_prompt == object.object_prompt);
    CHECK(other.mapping.frequent_chain == object.mapping.frequent_chain);
    CHECK(other.mapping.visual_detail_levels ==
          object.mapping.visual_detail_levels);
    CHECK(other.mapping.sub_prompt == object.mapping.sub_prompt);
    CHECK(other.bbox.x0 == doctest::Approx(object.bbox.x0));
    CHECK(other.bbox.y1 == doctest::Approx(object.bbox.y1));
  }
}

TEST_CASE("span plans serialize with synthetic keys") {
  const auto hamburger =
      mapping::parse_r2f_response(replay_response("r2f-25505a81576e5238.json"));
  const auto doc = mapping::plan_to_json(hamburger);
  CHECK(doc.at("base_prompt") == "#1");
  CHECK(doc.at("objects").at("#1").at("object") == "A hairy hamburger");
  const auto round =
      mapping::to_prompt_plan(mapping::parse_r2f_plus_response(doc.dump()));
  REQUIRE(round.mappings.size() == 1);
  CHECK(round.original_prompt == hamburger.original_prompt);
  CHECK(round.mappings[0].sub_prompt == hamburger.mappings[0].sub_prompt);
  CHECK(round.mappings[0].frequent_chain ==
        hamburger.mappings[0].frequent_chain);
  CHECK(round.mappings[0].visual_detail_levels ==
        hamburger.mappings[0].visual_detail_levels);

  const auto dog =
      mapping::parse_r2f_response(replay_response("r2f-ddb0c748f40b1019.json"));
  const auto dog_doc = mapping::plan_to_json(dog);
  CHECK(dog_doc.at("objects").at("#1").at("r2f").empty());
  const auto dog_round =
      mapping::to_prompt_plan(mapping::parse_r2f_plus_response(dog_doc.dump()));
  REQUIRE(dog_round.mappings.size() == 1);
  CHECK_FALSE(dog_round.mappings[0].rare_concept.has_value());
  CHECK(mapping::reconstruct(dog_round, {mapping::SelectRare{}}) ==
        "A running dog");
}
