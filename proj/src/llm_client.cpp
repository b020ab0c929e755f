#include "r2f/llm_client.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <httplib.h>

#include "r2f/errors.hpp"
#include "r2f/templates.hpp"
#include "r2f/text.hpp"

namespace r2f::llm {

namespace {

using nlohmann::json;

templates::Id template_for(MappingMode mode) {
  return mode == MappingMode::r2f ? templates::Id::r2f
                                  : templates::Id::r2f_plus;
}

std::string replay_lookup(templates::Id id, const std::string& prompt,
                          const ClientConfig& cfg) {
  const std::string path = *cfg.fixture_dir + "/" +
                           fixture_stem(std::string(templates::id_string(id)),
                                        prompt) +
                           ".json";
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorKind::network,
         "no fixture for this request (expected " + path + ")");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::exception& e) {
    fail(ErrorKind::protocol,
         "fixture " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.contains("response") || !doc["response"].is_string()) {
    fail(ErrorKind::protocol, "fixture " + path + " lacks a response string");
  }
  const std::string response = doc["response"].get<std::string>();
  if (response.empty()) {
    fail(ErrorKind::empty_response, "fixture " + path + " holds an empty response");
  }
  return response;
}

struct SplitUrl {
  std::string base;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    fail(ErrorKind::configuration, "endpoint URL lacks a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    return {url, "/"};
  }
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string live_request(templates::Id id, const std::string& filled,
                         const ClientConfig& cfg) {
  const char* key = std::getenv(cfg.api_key_env.c_str());
  if (!key || !*key) {
    fail(ErrorKind::configuration,
         "environment variable " + cfg.api_key_env + " is not set");
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (cfg.endpoint_url.rfind("https://", 0) == 0) {
    fail(ErrorKind::configuration,
         "built without TLS support; use an http:// endpoint");
  }
#endif
  const SplitUrl url = split_url(cfg.endpoint_url);

  json body;
  body["model"] = cfg.model_name;
  body["messages"] = json::array();
  const std::string system(templates::system_text(id));
  if (!system.empty()) {
    body["messages"].push_back({{"role", "system"}, {"content", system}});
  }
  body["messages"].push_back({{"role", "user"}, {"content", filled}});
  const std::string payload = body.dump();

  httplib::Client client(url.base);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(cfg.timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(cfg.timeout));
  const httplib::Headers headers = {
      {"Authorization", std::string("Bearer ") + key}};

  httplib::Result result;
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    if (attempt > 0) {
      std::clog << "llm_client: retry " << attempt << "/" << cfg.max_retries
                << " for " << templates::id_string(id) << " request\n";
    }
    result = client.Post(url.path, headers, payload, "application/json");
    if (result && result->status < 500) break;
    if (result) {
      std::clog << "llm_client: attempt " << attempt + 1 << " got HTTP "
                << result->status << "\n";
    } else {
      std::clog << "llm_client: attempt " << attempt + 1
                << " transport failure: " << httplib::to_string(result.error())
                << "\n";
    }
  }
  if (!result) {
    fail(ErrorKind::network,
         "transport failure after " + std::to_string(cfg.max_retries + 1) +
             " attempts: " + httplib::to_string(result.error()));
  }
  if (result->status >= 500) {
    fail(ErrorKind::network, "server kept failing with HTTP " +
                                 std::to_string(result->status) + " after " +
                                 std::to_string(cfg.max_retries + 1) +
                                 " attempts");
  }
  if (result->status != 200) {
    fail(ErrorKind::protocol,
         "HTTP " + std::to_string(result->status) + ": " + result->body);
  }

  json doc;
  try {
    doc = json::parse(result->body);
  } catch (const json::exception& e) {
    fail(ErrorKind::protocol, std::string("malformed response body: ") + e.what());
  }
  if (!doc.contains("choices") || !doc["choices"].is_array() ||
      doc["choices"].empty() ||
      !doc["choices"][0].contains("message") ||
      !doc["choices"][0]["message"].contains("content") ||
      !doc["choices"][0]["message"]["content"].is_string()) {
    fail(ErrorKind::protocol, "response lacks choices[0].message.content");
  }
  const std::string content =
      doc["choices"][0]["message"]["content"].get<std::string>();
  if (content.empty()) {
    fail(ErrorKind::empty_response, "model returned an empty completion");
  }
  return content;
}

std::string complete(templates::Id id, const std::string& prompt,
                     const ClientConfig& cfg) {
  const std::string filled = templates::fill(id, prompt);
  if (cfg.replay()) return replay_lookup(id, prompt, cfg);
  return live_request(id, filled, cfg);
}

bool normalize_yes_no(const std::string& answer) {
  std::string cleaned = text::trim(answer);
  while (!cleaned.empty() &&
         std::string(".,;:!?").find(cleaned.back()) != std::string::npos) {
    cleaned.pop_back();
  }
  cleaned = text::to_upper(cleaned);
  if (cleaned == "YES") return true;
  if (cleaned == "NO") return false;
  fail(ErrorKind::protocol, "expected YES or NO, got '" + text::trim(answer) + "'");
}

}  // namespace

std::string fixture_stem(const std::string& template_id,
                         const std::string& prompt) {
  return template_id + "-" + text::hex16(text::fnv1a64(template_id + "\n" + prompt));
}

std::string request_concept_mapping(const std::string& prompt,
                                    MappingMode mode,
                                    const ClientConfig& cfg) {
  return complete(template_for(mode), prompt, cfg);
}

bool assess_rareness(const std::string& prompt, const ClientConfig& cfg) {
  return normalize_yes_no(complete(templates::Id::rareness, prompt, cfg));
}

double rareness_percentage(const std::vector<std::string>& prompts,
                           const ClientConfig& cfg) {
  if (prompts.empty()) {
    fail(ErrorKind::precondition, "prompt list must be non-empty");
  }
  std::size_t yes = 0;
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    try {
      if (assess_rareness(prompts[i], cfg)) ++yes;
    } catch (const Error& e) {
      fail(e.kind(), "prompt #" + std::to_string(i + 1) + ": " + e.message());
    }
  }
  return 100.0 * static_cast<double>(yes) / static_cast<double>(prompts.size());
}

nlohmann::json build_eval_request(const std::string& prompt,
                                  const std::string& model_name) {
  const std::string filled = templates::fill(templates::Id::rubric, prompt);
  json payload;
  payload["model"] = model_name;
  payload["messages"] = json::array({
      {{"role", "user"},
       {"content",
        json::array({
            {{"type", "text"}, {"text", filled}},
            {{"type", "image_url"}, {"image_url", {{"url", ""}}}},
        })}},
  });
  return payload;
}

std::string extract_eval_prompt(const nlohmann::json& payload) {
  try {
    const std::string filled =
        payload.at("messages").at(0).at("content").at(0).at("text").get<std::string>();
    return templates::extract_filled(templates::Id::rubric, filled);
  } catch (const json::exception&) {
    fail(ErrorKind::protocol, "payload is not a rubric evaluation request");
  }
}

int map_rubric_score(int raw) {
  if (raw < 1 || raw > 5) {
    fail(ErrorKind::range,
         "raw rubric score " + std::to_string(raw) + " outside 1..5");
  }
  return 25 * (raw - 1);
}

RubricScore make_rubric_score(int raw) { return {raw, map_rubric_score(raw)}; }

}  // namespace r2f::llm
