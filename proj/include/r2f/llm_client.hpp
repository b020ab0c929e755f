#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace r2f::llm {

enum class MappingMode { r2f, r2f_plus };

struct ClientConfig {
  std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
  std::string model_name = "gpt-4o";
  std::string api_key_env = "R2F_API_KEY";
  std::chrono::milliseconds timeout{30000};
  int max_retries = 2;
  // Replay mode: responses are served from this directory and no network
  // access happens. Files are named <template id>-<16 hex digits>.json where
  // the digits hash (template id, user prompt); each file holds {"response"}.
  std::optional<std::string> fixture_dir;

  bool replay() const { return fixture_dir.has_value(); }
};

// Sends the concept-mapping instruction for the prompt and returns the raw
// completion text.
std::string request_concept_mapping(const std::string& prompt,
                                    MappingMode mode,
                                    const ClientConfig& cfg);

// True iff the model answers YES (after trimming, stripping trailing
// punctuation, and uppercasing) to the rareness question.
bool assess_rareness(const std::string& prompt, const ClientConfig& cfg);

// 100 * (#YES) / (#prompts).
double rareness_percentage(const std::vector<std::string>& prompts,
                           const ClientConfig& cfg);

// Chat-completions payload for the scoring rubric, with an image slot the
// caller fills in.
nlohmann::json build_eval_request(const std::string& prompt,
                                  const std::string& model_name = "gpt-4o");

// Recovers the prompt spliced into a build_eval_request payload.
std::string extract_eval_prompt(const nlohmann::json& payload);

// Maps a 5-point raw score onto {0, 25, 50, 75, 100}.
int map_rubric_score(int raw);

struct RubricScore {
  int raw = 1;
  int mapped = 0;
};

RubricScore make_rubric_score(int raw);

// Fixture file stem for a (template id, prompt) pair: "<id>-<16 hex digits>".
std::string fixture_stem(const std::string& template_id,
                         const std::string& prompt);

}  // namespace r2f::llm
