#include "r2f/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "r2f/errors.hpp"
#include "r2f/gaussian.hpp"
#include "r2f/llm_client.hpp"
#include "r2f/parse.hpp"
#include "r2f/reconstruct.hpp"
#include "r2f/region_driver.hpp"
#include "r2f/rng.hpp"
#include "r2f/sampler.hpp"
#include "r2f/schedule.hpp"
#include "r2f/sweep.hpp"
#include "r2f/text.hpp"

namespace r2f::cli {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorKind::argument, "cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    fail(ErrorKind::argument, "cannot write " + path);
  }
  out << content;
  out.flush();
  if (!out) {
    fail(ErrorKind::argument, "short write to " + path);
  }
}

// Empty path means stdout.
void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    write_file(path, content);
  }
}

std::string one_decimal(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.1f", value);
  return buffer;
}

// Defaults layering: built-ins < config file < flags. The file is applied to
// the bound variables before CLI11 parses, so flags overwrite file values.
json load_config_overlay(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (arg.rfind("--config=", 0) == 0) {
      path = arg.substr(9);
    }
  }
  if (path.empty()) {
    return json::object();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorKind::configuration, "cannot open config file " + path);
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::configuration,
         "config file " + path + " is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) {
    fail(ErrorKind::configuration,
         "config file " + path + " must hold a JSON object");
  }
  return doc;
}

template <typename T>
void overlay(const json& cfg, const char* key, T& value) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) {
    return;
  }
  try {
    value = it->get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::configuration,
         std::string("config key '") + key + "' has the wrong type");
  }
}

void echo_config(const json& effective) {
  std::cerr << "effective config: " << effective.dump() << "\n";
}

struct CommonOptions {
  std::string config_path;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--config", common.config_path,
                  "JSON file with default option values (flags win)");
  cmd->add_option("--jobs", common.jobs,
                  "worker cap; commands currently run single-threaded")
      ->check(CLI::PositiveNumber);
}

struct LlmOptions {
  llm::ClientConfig cfg;
  long long timeout_ms = 30000;
  std::string fixture_dir;

  void apply_file(const json& file) {
    overlay(file, "endpoint_url", cfg.endpoint_url);
    overlay(file, "model_name", cfg.model_name);
    overlay(file, "api_key_env", cfg.api_key_env);
    overlay(file, "timeout_ms", timeout_ms);
    overlay(file, "max_retries", cfg.max_retries);
    overlay(file, "fixture_dir", fixture_dir);
  }

  void add_to(CLI::App* cmd) {
    cmd->add_option("--fixture-dir", fixture_dir,
                    "serve responses from this fixture directory (no network)");
    cmd->add_option("--endpoint", cfg.endpoint_url, "chat-completions URL");
    cmd->add_option("--model", cfg.model_name, "model name");
    cmd->add_option("--api-key-env", cfg.api_key_env,
                    "environment variable holding the API key");
    cmd->add_option("--timeout-ms", timeout_ms, "request timeout")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--retries", cfg.max_retries, "transport retry count")
        ->check(CLI::NonNegativeNumber);
  }

  llm::ClientConfig finish() const {
    llm::ClientConfig out = cfg;
    out.timeout = std::chrono::milliseconds(timeout_ms);
    if (!fixture_dir.empty()) {
      out.fixture_dir = fixture_dir;
    }
    return out;
  }

  json effective() const {
    json doc{{"endpoint_url", cfg.endpoint_url},
             {"model_name", cfg.model_name},
             {"api_key_env", cfg.api_key_env},
             {"timeout_ms", timeout_ms},
             {"max_retries", cfg.max_retries}};
    if (!fixture_dir.empty()) {
      doc["fixture_dir"] = fixture_dir;
    }
    return doc;
  }
};

schedule::Parity parity_from_string(const std::string& name) {
  if (name == "frequent-first") {
    return schedule::Parity::frequent_first;
  }
  if (name == "odd-frequent") {
    return schedule::Parity::odd_steps_frequent;
  }
  fail(ErrorKind::argument, "unknown parity '" + name + "'");
}

std::vector<double> parse_doubles(const std::string& text, std::size_t count,
                                  const std::string& what) {
  const auto parts = text::split(text, ",");
  if (parts.size() != count) {
    fail(ErrorKind::argument, what + " needs " + std::to_string(count) +
                                  " comma-separated values, got '" + text + "'");
  }
  std::vector<double> out;
  out.reserve(count);
  for (const auto& part : parts) {
    try {
      std::size_t used = 0;
      const std::string token = text::trim(part);
      const double value = std::stod(token, &used);
      if (used != token.size()) {
        throw std::invalid_argument(token);
      }
      out.push_back(value);
    } catch (const std::exception&) {
      fail(ErrorKind::argument, what + ": cannot parse '" + part + "'");
    }
  }
  return out;
}

region::Grid parse_grid(const std::string& text) {
  const auto parts = text::split(text, "x");
  if (parts.size() == 2) {
    try {
      const int h = std::stoi(parts[0]);
      const int w = std::stoi(parts[1]);
      if (h >= 1 && w >= 1) {
        return region::Grid{h, w};
      }
    } catch (const std::exception&) {
    }
  }
  fail(ErrorKind::argument, "grid must look like HxW with positive sides, got '" +
                                text + "'");
}

mapping::RegionAwarePlan load_plan(const std::string& path) {
  return mapping::parse_r2f_plus_response(read_file(path));
}

// ---------------------------------------------------------------------------

struct MapOptions {
  std::string prompt;
  std::string mode = "r2f";
  std::string out;
  LlmOptions llm;
};

int cmd_map(const MapOptions& o) {
  echo_config(json{{"command", "map"},
                   {"mode", o.mode},
                   {"llm", o.llm.effective()}});
  const llm::ClientConfig cfg = o.llm.finish();
  const llm::MappingMode mode = o.mode == "r2f" ? llm::MappingMode::r2f
                                                : llm::MappingMode::r2f_plus;
  const std::string raw = llm::request_concept_mapping(o.prompt, mode, cfg);
  json plan_doc;
  if (mode == llm::MappingMode::r2f) {
    plan_doc = mapping::plan_to_json(mapping::parse_r2f_response(raw));
  } else {
    plan_doc = mapping::plan_to_json(mapping::parse_r2f_plus_response(raw));
  }
  emit(o.out, plan_doc.dump(2) + "\n");
  return 0;
}

struct ScheduleOptions {
  std::string plan_file;
  int T = 50;
  std::string mode = "alternating";
  std::string parity = "frequent-first";
  std::string out;
};

int cmd_schedule(const ScheduleOptions& o) {
  echo_config(json{{"command", "schedule"},
                   {"T", o.T},
                   {"mode", o.mode},
                   {"parity", o.parity},
                   {"plan", o.plan_file}});
  const mapping::PromptPlan plan = mapping::to_prompt_plan(load_plan(o.plan_file));
  const schedule::Schedule sched =
      schedule::build_schedule(plan, o.T, schedule::mode_from_string(o.mode), {},
                               parity_from_string(o.parity));
  emit(o.out, schedule::to_json(sched).dump(2) + "\n");
  return 0;
}

struct SweepOptions {
  double sigma = 20.0;
  std::string mu_f = "0,10";
  int alpha_points = 201;
  std::string empirical;
  std::uint64_t seed = 42;
  std::string out;
  std::string sidecar;
};

int cmd_gaussian_sweep(const SweepOptions& o) {
  echo_config(json{{"command", "gaussian-sweep"},
                   {"sigma", o.sigma},
                   {"mu_f", o.mu_f},
                   {"alpha_points", o.alpha_points},
                   {"empirical", o.empirical},
                   {"seed", o.seed}});
  if (!(o.sigma > 0.0)) {
    fail(ErrorKind::argument, "sigma must be positive");
  }
  const auto mu_f = parse_doubles(o.mu_f, 2, "--mu-f");

  Eigen::VectorXd mu_rare = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd mu_freq(2);
  mu_freq << mu_f[0], mu_f[1];
  Eigen::VectorXd rare_var(2);
  rare_var << o.sigma * o.sigma, 1.0;

  const auto rare = gaussian::Gaussian::diagonal(mu_rare, rare_var);
  const auto freq =
      gaussian::Gaussian::diagonal(mu_freq, Eigen::VectorXd::Ones(2));
  const auto target = gaussian::Gaussian::standard(2);

  std::optional<gaussian::SamplerConfig> sampler;
  if (!o.empirical.empty()) {
    const auto values = parse_doubles(o.empirical, 3, "--empirical");
    gaussian::SamplerConfig cfg;
    cfg.step_size = values[0];
    cfg.n_steps = static_cast<int>(values[1]);
    cfg.n_particles = static_cast<int>(values[2]);
    if (cfg.step_size <= 0 || cfg.n_steps < 1 || cfg.n_particles < 1) {
      fail(ErrorKind::argument,
           "--empirical needs positive step size, steps, and particles");
    }
    cfg.burn_in = cfg.n_steps / 2;
    cfg.seed = o.seed;
    sampler = cfg;
  }

  const auto result =
      gaussian::alpha_sweep(rare, freq, target,
                            gaussian::uniform_grid(o.alpha_points), sampler);
  emit(o.out, gaussian::to_csv(result));

  if (!o.sidecar.empty() || !o.out.empty()) {
    const std::string sidecar_path =
        o.sidecar.empty() ? o.out + ".json" : o.sidecar;
    write_file(sidecar_path,
               gaussian::sweep_sidecar(rare, freq, target, o.alpha_points,
                                       sampler)
                       .dump(2) +
                   "\n");
  }
  return 0;
}

struct VerifyOptions {
  int instances = 200;
  std::uint64_t seed = 42;
  int grid_points = 201;
};

int cmd_gaussian_verify(const VerifyOptions& o) {
  echo_config(json{{"command", "gaussian-verify"},
                   {"instances", o.instances},
                   {"seed", o.seed},
                   {"grid_points", o.grid_points}});
  if (o.instances < 1) {
    fail(ErrorKind::argument, "instances must be at least 1");
  }
  const auto alphas = gaussian::uniform_grid(o.grid_points);
  const auto target_cov = Eigen::MatrixXd::Identity(2, 2);

  int failures = 0;
  for (int i = 0; i < o.instances; ++i) {
    const auto unit = static_cast<std::uint32_t>(i);
    Eigen::VectorXd mu_rare(2);
    mu_rare << -5.0 + 10.0 * rng::uniform01(o.seed, 1, unit, 0, 0),
        -5.0 + 10.0 * rng::uniform01(o.seed, 1, unit, 1, 0);
    const double delta = 20.0 * rng::uniform01(o.seed, 2, unit, 0, 0);
    const double sign = rng::uniform01(o.seed, 2, unit, 1, 0) < 0.5 ? 1.0 : -1.0;
    Eigen::VectorXd mu_freq = mu_rare;
    mu_freq(1) += sign * delta;
    const double sigma_min = 1.0 + std::sqrt(delta * delta + 0.2);
    const double sigma =
        sigma_min + (50.0 - sigma_min) * rng::uniform01(o.seed, 3, unit, 0, 0);

    Eigen::VectorXd rare_var(2);
    rare_var << sigma * sigma, 1.0;
    const auto rare = gaussian::Gaussian::diagonal(mu_rare, rare_var);
    const gaussian::Gaussian freq(mu_freq, target_cov);
    const gaussian::Gaussian target(mu_rare, target_cov);

    const auto sweep = gaussian::alpha_sweep(rare, freq, target, alphas);
    const double best =
        *std::min_element(sweep.w2_closed.begin(), sweep.w2_closed.end());
    const double baseline = sigma - 1.0;
    if (!(best < baseline)) {
      ++failures;
      std::cerr << "counterexample: sigma=" << text::format_double(sigma)
                << " mu_rare=(" << text::format_double(mu_rare(0)) << ","
                << text::format_double(mu_rare(1)) << ") mu_freq=("
                << text::format_double(mu_freq(0)) << ","
                << text::format_double(mu_freq(1)) << ") min_w2="
                << text::format_double(best) << " baseline="
                << text::format_double(baseline) << "\n";
    }
  }

  std::cout << "instances: " << o.instances << "\n"
            << "grid points: " << o.grid_points << "\n"
            << "seed: " << o.seed << "\n"
            << "passed: " << (o.instances - failures) << "\n"
            << "failed: " << failures << "\n";
  if (failures > 0) {
    fail(ErrorKind::numeric, std::to_string(failures) +
                                 " instances violated the improvement bound");
  }
  return 0;
}

struct RegionDemoOptions {
  std::string plan_file;
  int T = 50;
  std::string grid = "16x16";
  int channels = 4;
  std::uint64_t seed = 42;
  region::ControlConfig control;
  bool no_centering = false;
  std::string parity = "frequent-first";
  std::string diagnostics;
  std::string latent_out;
};

int cmd_region_demo(const RegionDemoOptions& o) {
  echo_config(json{{"command", "region-demo"},
                   {"T", o.T},
                   {"grid", o.grid},
                   {"channels", o.channels},
                   {"seed", o.seed},
                   {"T_CA", o.control.T_CA},
                   {"N_CA", o.control.N_CA},
                   {"eta", o.control.eta},
                   {"T_LF", o.control.T_LF},
                   {"centering", !o.no_centering},
                   {"parity", o.parity}});
  const mapping::RegionAwarePlan plan = load_plan(o.plan_file);
  const region::Grid grid = parse_grid(o.grid);

  region::RunOptions options;
  options.center_objects = !o.no_centering;
  options.parity = parity_from_string(o.parity);

  const region::SoftmaxAttentionProducer producer;
  const region::RunResult result = region::run_r2f_plus(
      plan, o.T, o.control, region::make_pattern_denoiser(o.seed), producer,
      region::bbox_mask_provider(), o.seed, grid, o.channels, options);

  emit(o.diagnostics, region::diagnostics_jsonl(result));

  if (!o.latent_out.empty()) {
    const auto& z = result.final_latent;
    write_file(o.latent_out,
               std::string(reinterpret_cast<const char*>(z.values.data()),
                           z.values.size() * sizeof(double)));
    const json header{{"height", z.height},
                      {"width", z.width},
                      {"channels", z.channels},
                      {"dtype", "float64"},
                      {"order", "y,x,c"}};
    write_file(o.latent_out + ".json", header.dump(2) + "\n");
  }

  const region::StepRecord* last_controlled = nullptr;
  for (const auto& step : result.steps) {
    if (step.controlled) {
      last_controlled = &step;
    }
  }
  for (std::size_t i = 0; i < result.initial_energies.size(); ++i) {
    const auto& initial = result.initial_energies[i];
    std::cerr << "energy " << initial.key << ": initial "
              << text::format_double(initial.energy);
    if (last_controlled && i < last_controlled->per_object.size()) {
      std::cerr << " -> final controlled "
                << text::format_double(last_controlled->per_object[i].energy);
    }
    std::cerr << "\n";
  }
  return 0;
}

struct RarenessOptions {
  std::string prompts_file;
  LlmOptions llm;
};

int cmd_rareness(const RarenessOptions& o) {
  echo_config(json{{"command", "rareness"},
                   {"prompts", o.prompts_file},
                   {"llm", o.llm.effective()}});
  const llm::ClientConfig cfg = o.llm.finish();
  std::vector<std::string> prompts;
  for (const auto& line : text::split_lines(read_file(o.prompts_file))) {
    const std::string prompt = text::trim(line);
    if (!prompt.empty()) {
      prompts.push_back(prompt);
    }
  }
  if (prompts.empty()) {
    fail(ErrorKind::argument, "prompts file has no prompts");
  }

  int yes = 0;
  std::vector<std::string> errors;
  std::optional<ErrorKind> first_error;
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    try {
      const bool rare = llm::assess_rareness(prompts[i], cfg);
      yes += rare ? 1 : 0;
      std::cout << (rare ? "YES" : "NO") << "\t" << prompts[i] << "\n";
    } catch (const Error& e) {
      errors.push_back("prompt #" + std::to_string(i + 1) + ": " + e.what());
      if (!first_error) {
        first_error = e.kind();
      }
      std::cout << "ERROR\t" << prompts[i] << "\n";
    }
  }

  if (!errors.empty()) {
    for (const auto& message : errors) {
      std::cerr << message << "\n";
    }
    return exit_code_for(*first_error);
  }
  std::cout << "%Rareness: "
            << one_decimal(100.0 * yes / static_cast<double>(prompts.size()))
            << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"rare-concept guidance toolkit"};
  app.require_subcommand(1);

  try {
    const json file_cfg = load_config_overlay(args);
    CommonOptions common;
    overlay(file_cfg, "jobs", common.jobs);

    MapOptions map_opts;
    overlay(file_cfg, "mode", map_opts.mode);
    map_opts.llm.apply_file(file_cfg);
    auto* map_cmd =
        app.add_subcommand("map", "ask the LLM for a concept-mapping plan");
    map_cmd->add_option("prompt", map_opts.prompt, "input prompt")->required();
    map_cmd->add_option("--mode", map_opts.mode, "mapping flavor")
        ->check(CLI::IsMember({"r2f", "r2f-plus"}));
    map_cmd->add_option("--out", map_opts.out, "plan file (default stdout)");
    map_opts.llm.add_to(map_cmd);
    add_common(map_cmd, common);

    ScheduleOptions sched_opts;
    overlay(file_cfg, "T", sched_opts.T);
    overlay(file_cfg, "mode", sched_opts.mode);
    overlay(file_cfg, "parity", sched_opts.parity);
    auto* sched_cmd =
        app.add_subcommand("schedule", "expand a plan into per-step prompts");
    sched_cmd->add_option("plan", sched_opts.plan_file, "plan file")->required();
    sched_cmd->add_option("--T", sched_opts.T, "sampling steps");
    sched_cmd->add_option("--mode", sched_opts.mode, "guidance mode")
        ->check(CLI::IsMember({"alternating", "interpolate", "composable"}));
    sched_cmd->add_option("--parity", sched_opts.parity, "frequent-step parity")
        ->check(CLI::IsMember({"frequent-first", "odd-frequent"}));
    sched_cmd->add_option("--out", sched_opts.out, "schedule file (default stdout)");
    add_common(sched_cmd, common);

    SweepOptions sweep_opts;
    overlay(file_cfg, "sigma", sweep_opts.sigma);
    overlay(file_cfg, "mu_f", sweep_opts.mu_f);
    overlay(file_cfg, "alpha_points", sweep_opts.alpha_points);
    overlay(file_cfg, "seed", sweep_opts.seed);
    auto* sweep_cmd = app.add_subcommand(
        "gaussian-sweep", "closed-form (optionally empirical) alpha sweep");
    sweep_cmd->add_option("--sigma", sweep_opts.sigma,
                          "rare estimate's first-axis standard deviation");
    sweep_cmd->add_option("--mu-f", sweep_opts.mu_f, "frequent mean, 'x,y'");
    sweep_cmd->add_option("--alpha-points", sweep_opts.alpha_points,
                          "grid size over [0,1]");
    sweep_cmd->add_option("--empirical", sweep_opts.empirical,
                          "Langevin overlay, 'h,steps,particles'");
    sweep_cmd->add_option("--seed", sweep_opts.seed, "sampler seed");
    sweep_cmd->add_option("--out", sweep_opts.out, "CSV file (default stdout)");
    sweep_cmd->add_option("--sidecar", sweep_opts.sidecar,
                          "parameter sidecar (default <out>.json)");
    add_common(sweep_cmd, common);

    VerifyOptions verify_opts;
    overlay(file_cfg, "instances", verify_opts.instances);
    overlay(file_cfg, "seed", verify_opts.seed);
    overlay(file_cfg, "grid_points", verify_opts.grid_points);
    auto* verify_cmd = app.add_subcommand(
        "gaussian-verify", "randomized check of the improvement bound");
    verify_cmd->add_option("--instances", verify_opts.instances,
                           "random instances to test");
    verify_cmd->add_option("--seed", verify_opts.seed, "instance seed");
    verify_cmd->add_option("--grid-points", verify_opts.grid_points,
                           "alpha grid size");
    add_common(verify_cmd, common);

    RegionDemoOptions demo_opts;
    overlay(file_cfg, "T", demo_opts.T);
    overlay(file_cfg, "grid", demo_opts.grid);
    overlay(file_cfg, "channels", demo_opts.channels);
    overlay(file_cfg, "seed", demo_opts.seed);
    overlay(file_cfg, "t_ca", demo_opts.control.T_CA);
    overlay(file_cfg, "n_ca", demo_opts.control.N_CA);
    overlay(file_cfg, "eta", demo_opts.control.eta);
    overlay(file_cfg, "t_lf", demo_opts.control.T_LF);
    overlay(file_cfg, "parity", demo_opts.parity);
    auto* demo_cmd = app.add_subcommand(
        "region-demo", "run the region-controlled chain on a toy denoiser");
    demo_cmd->add_option("plan", demo_opts.plan_file, "region-aware plan file")
        ->required();
    demo_cmd->add_option("--T", demo_opts.T, "sampling steps");
    demo_cmd->add_option("--grid", demo_opts.grid, "latent grid, HxW");
    demo_cmd->add_option("--channels", demo_opts.channels, "latent channels")
        ->check(CLI::PositiveNumber);
    demo_cmd->add_option("--seed", demo_opts.seed, "noise seed");
    demo_cmd->add_option("--t-ca", demo_opts.control.T_CA,
                         "cross-attention-controlled steps");
    demo_cmd->add_option("--n-ca", demo_opts.control.N_CA,
                         "gradient iterations per controlled step");
    demo_cmd->add_option("--eta", demo_opts.control.eta, "gradient step size");
    demo_cmd->add_option("--t-lf", demo_opts.control.T_LF,
                         "latent-fusion steps");
    demo_cmd->add_flag("--no-centering", demo_opts.no_centering,
                       "generate objects in place instead of grid-centered");
    demo_cmd->add_option("--parity", demo_opts.parity, "frequent-step parity")
        ->check(CLI::IsMember({"frequent-first", "odd-frequent"}));
    demo_cmd->add_option("--diagnostics", demo_opts.diagnostics,
                         "JSON-lines step log (default stdout)");
    demo_cmd->add_option("--latent-out", demo_opts.latent_out,
                         "final latent dump (raw float64 + .json shape header)");
    add_common(demo_cmd, common);

    RarenessOptions rare_opts;
    rare_opts.llm.apply_file(file_cfg);
    auto* rare_cmd = app.add_subcommand(
        "rareness", "YES/NO rareness verdicts and their percentage");
    rare_cmd->add_option("prompts", rare_opts.prompts_file,
                         "file with one prompt per line")
        ->required();
    rare_opts.llm.add_to(rare_cmd);
    add_common(rare_cmd, common);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("r2f");
    for (const auto& arg : args) {
      argv.push_back(arg.c_str());
    }
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {
        return app.exit(e);
      }
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }

    if (*map_cmd) return cmd_map(map_opts);
    if (*sched_cmd) return cmd_schedule(sched_opts);
    if (*sweep_cmd) return cmd_gaussian_sweep(sweep_opts);
    if (*verify_cmd) return cmd_gaussian_verify(verify_opts);
    if (*demo_cmd) return cmd_region_demo(demo_opts);
    if (*rare_cmd) return cmd_rareness(rare_opts);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace r2f::cli
