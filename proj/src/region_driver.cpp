#include "r2f/region_driver.hpp"

#include <algorithm>

#include <json.hpp>

#include "r2f/errors.hpp"
#include "r2f/reconstruct.hpp"
#include "r2f/rng.hpp"
#include "r2f/text.hpp"

namespace r2f::region {

namespace {

Latent directive_pattern(const schedule::StepDirective& directive, int h, int w,
                         int c) {
  std::vector<std::pair<const std::string*, double>> parts;
  if (directive.is_plain()) {
    parts.emplace_back(&directive.plain(), 1.0);
  } else {
    for (const auto& part : directive.blend()) {
      parts.emplace_back(&part.prompt, part.weight);
    }
  }
  Latent pattern(h, w, c, 0.0);
  for (const auto& [prompt, weight] : parts) {
    const std::uint64_t key = text::fnv1a64(*prompt);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int ch = 0; ch < c; ++ch) {
          const double u = rng::uniform01(key, static_cast<std::uint32_t>(ch),
                                          static_cast<std::uint32_t>(y),
                                          static_cast<std::uint32_t>(x), 0);
          pattern.at(y, x, ch) += weight * (2.0 * u - 1.0);
        }
      }
    }
  }
  return pattern;
}

}  // namespace

Denoiser make_pattern_denoiser(std::uint64_t seed) {
  return [seed](const Latent& z, const schedule::StepDirective& directive, int t,
                std::uint32_t stream) {
    const Latent pattern =
        directive_pattern(directive, z.height, z.width, z.channels);
    Latent out(z.height, z.width, z.channels);
    for (int y = 0; y < z.height; ++y) {
      for (int x = 0; x < z.width; ++x) {
        for (int ch = 0; ch < z.channels; ++ch) {
          const std::size_t cell = out.index(y, x, ch);
          const double noise =
              rng::gaussian(seed, stream, static_cast<std::uint32_t>(t),
                            static_cast<std::uint32_t>(cell), 0);
          out.values[cell] =
              0.9 * z.values[cell] + 0.1 * pattern.values[cell] + 0.05 * noise;
        }
      }
    }
    return out;
  };
}

MaskProvider bbox_mask_provider() {
  return [](const Latent&, const std::string&, const Region& generation_region) {
    return bbox_mask(generation_region);
  };
}

Latent init_latent(const Grid& grid, int channels, std::uint64_t seed,
                   std::uint32_t stream) {
  Latent z(grid.height, grid.width, channels);
  for (std::size_t cell = 0; cell < z.values.size(); ++cell) {
    z.values[cell] =
        rng::gaussian(seed, stream, 0, static_cast<std::uint32_t>(cell), 0);
  }
  return z;
}

namespace {

struct ObjectState {
  std::string key;
  Region target;            // the plan's region
  Region generation;        // where Stage 2 actually generates
  mapping::PromptPlan plan; // single-concept plan for scheduling
  Map2D mask;               // refined
  std::vector<Latent> refined_states;  // index t holds the refined latent z_t
};

mapping::PromptPlan single_object_plan(const mapping::RegionAwarePlan& plan,
                                       const std::string& key) {
  const mapping::ObjectSpec& object = plan.objects.at(key);
  const auto keys = mapping::find_keys(object.object_prompt);
  mapping::PromptPlan out;
  out.original_prompt = mapping::reconstruct_region_aware(
      plan, {{key, mapping::SelectRare{}}}, key);
  mapping::ConceptMapping m = object.mapping;
  m.span_offset = keys.front().offset;
  out.mappings.push_back(std::move(m));
  mapping::validate(out);
  return out;
}

std::vector<ObjectEnergy> measure_energies(
    const AttentionProducer& producer, const Latent& z,
    const std::vector<ObjectState>& objects,
    const std::vector<Binding>& bindings) {
  std::vector<ObjectEnergy> energies;
  energies.reserve(objects.size());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    energies.push_back(
        {objects[i].key,
         energy(producer.attention(z, bindings[i].first), bindings[i].second)});
  }
  return energies;
}

}  // namespace

RunResult run_r2f_plus(const mapping::RegionAwarePlan& plan, int T,
                       const ControlConfig& cfg, const Denoiser& denoiser,
                       const AttentionProducer& producer,
                       const MaskProvider& mask_provider, std::uint64_t seed,
                       const Grid& grid, int channels,
                       const RunOptions& options) {
  if (T < 1) {
    fail(ErrorKind::argument, "T must be at least 1");
  }
  if (channels < 1) {
    fail(ErrorKind::argument, "channel count must be positive");
  }
  validate(cfg, T);
  mapping::validate(plan);
  if (plan.objects.empty()) {
    fail(ErrorKind::precondition, "plan has no objects");
  }

  std::vector<std::pair<long, std::string>> ordered_keys;
  for (const auto& [key, object] : plan.objects) {
    (void)object;
    ordered_keys.emplace_back(std::stol(key.substr(1)), key);
  }
  std::sort(ordered_keys.begin(), ordered_keys.end());

  // Stage 1 already happened upstream (the plan). Stage 2: per-object chains.
  std::vector<ObjectState> objects;
  objects.reserve(ordered_keys.size());
  for (std::size_t i = 0; i < ordered_keys.size(); ++i) {
    const std::string& key = ordered_keys[i].second;
    const std::uint32_t stream = static_cast<std::uint32_t>(i + 1);
    ObjectState state;
    state.key = key;
    state.target = region_from_bbox(plan.objects.at(key).bbox, grid);
    state.generation =
        options.center_objects ? centered_region(state.target) : state.target;
    state.plan = single_object_plan(plan, key);

    std::vector<Latent> states(static_cast<std::size_t>(T) + 1,
                               Latent(grid.height, grid.width, channels));
    Latent z = init_latent(grid, channels, seed, stream);
    states[static_cast<std::size_t>(T)] = z;
    for (int t = T; t >= 1; --t) {
      const std::string prompt = schedule::scheduled_prompt(
          t, state.plan, T, {}, options.parity);
      if (t > T - cfg.T_CA) {
        z = cross_attention_control(z, producer, {{prompt, state.generation}},
                                    cfg.eta, cfg.N_CA);
      }
      const schedule::StepDirective directive{t, prompt};
      z = denoiser(z, directive, t, stream);
      states[static_cast<std::size_t>(t - 1)] = z;
    }

    const Map2D raw_mask = mask_provider(states.front(), key, state.generation);
    state.mask = refine_mask(raw_mask, state.target);
    state.refined_states =
        refine_latents(states, state.generation.cells, state.target);
    objects.push_back(std::move(state));
  }

  // Stage 3: the composite chain.
  const mapping::PromptPlan base_plan = mapping::to_prompt_plan(plan);
  const schedule::Schedule base_schedule = schedule::build_schedule(
      base_plan, T, schedule::Mode::alternating, {}, options.parity);

  RunResult result;
  Latent z = init_latent(grid, channels, seed, 0);

  const auto bindings_at = [&](int t) {
    std::vector<Binding> bindings;
    bindings.reserve(objects.size());
    for (const auto& object : objects) {
      bindings.push_back({schedule::scheduled_prompt(t, object.plan, T, {},
                                                     options.parity),
                          object.target});
    }
    return bindings;
  };

  result.initial_energies =
      measure_energies(producer, z, objects, bindings_at(T));

  for (int t = T; t >= 1; --t) {
    const schedule::StepDirective& directive = base_schedule.at_step(t);
    const bool controlled = cfg.T_CA > 0 && t > T - cfg.T_CA;
    StepRecord record;
    record.t = t;
    record.directive = directive.plain();
    record.controlled = controlled;
    if (controlled) {
      const auto bindings = bindings_at(t);
      z = cross_attention_control(z, producer, bindings, cfg.eta, cfg.N_CA);
      record.per_object = measure_energies(producer, z, objects, bindings);
    }
    result.steps.push_back(std::move(record));

    z = denoiser(z, directive, t, 0);
    if (cfg.T_LF > 0 && t > T - cfg.T_LF) {
      std::vector<Overlay> overlays;
      overlays.reserve(objects.size());
      for (const auto& object : objects) {
        overlays.push_back(
            {object.refined_states[static_cast<std::size_t>(t - 1)],
             object.mask});
      }
      z = latent_fusion(z, overlays);
    }
  }
  result.final_latent = std::move(z);
  return result;
}

std::string diagnostics_jsonl(const RunResult& result) {
  std::string out;
  for (const auto& record : result.steps) {
    nlohmann::json line;
    line["t"] = record.t;
    line["directive"] = record.directive;
    if (record.controlled) {
      line["per_object"] = nlohmann::json::array();
      for (const auto& entry : record.per_object) {
        line["per_object"].push_back(
            {{"key", entry.key}, {"energy", entry.energy}});
      }
    }
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace r2f::region
