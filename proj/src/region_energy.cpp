#include "r2f/region_energy.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "r2f/errors.hpp"
#include "r2f/rng.hpp"
#include "r2f/text.hpp"

namespace r2f::region {

std::vector<double> SoftmaxAttentionProducer::concept_vector(
    const std::string& concept_id, int channels) const {
  const std::uint64_t seed = text::fnv1a64(concept_id);
  std::vector<double> w(static_cast<std::size_t>(channels));
  double norm_sq = 0.0;
  for (int ch = 0; ch < channels; ++ch) {
    w[static_cast<std::size_t>(ch)] =
        rng::gaussian(seed, 0, static_cast<std::uint32_t>(ch), 0, 0);
    norm_sq += w[static_cast<std::size_t>(ch)] * w[static_cast<std::size_t>(ch)];
  }
  const double norm = std::sqrt(norm_sq);
  if (norm == 0.0) {
    fail(ErrorKind::numeric, "degenerate concept vector");
  }
  for (double& value : w) value /= norm;
  return w;
}

Map2D SoftmaxAttentionProducer::attention(const Latent& z,
                                          const std::string& concept_id) const {
  const auto w = concept_vector(concept_id, z.channels);
  Map2D logits(z.height, z.width);
  double max_logit = -std::numeric_limits<double>::infinity();
  for (int y = 0; y < z.height; ++y) {
    for (int x = 0; x < z.width; ++x) {
      double dot = 0.0;
      for (int ch = 0; ch < z.channels; ++ch) {
        dot += z.at(y, x, ch) * w[static_cast<std::size_t>(ch)];
      }
      logits.at(y, x) = dot;
      max_logit = std::max(max_logit, dot);
    }
  }
  Map2D attention(z.height, z.width);
  double total = 0.0;
  for (std::size_t i = 0; i < logits.values.size(); ++i) {
    attention.values[i] = std::exp(logits.values[i] - max_logit);
    total += attention.values[i];
  }
  for (double& value : attention.values) value /= total;
  return attention;
}

Latent SoftmaxAttentionProducer::attention_vjp(const Latent& z,
                                               const std::string& concept_id,
                                               const Map2D& upstream) const {
  if (upstream.height != z.height || upstream.width != z.width) {
    fail(ErrorKind::shape, "upstream gradient shape mismatch");
  }
  const auto w = concept_vector(concept_id, z.channels);
  const Map2D a = attention(z, concept_id);
  // Softmax Jacobian: dL/dlogit = a * (u - <u, a>).
  double weighted = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    weighted += upstream.values[i] * a.values[i];
  }
  Latent grad(z.height, z.width, z.channels);
  for (int y = 0; y < z.height; ++y) {
    for (int x = 0; x < z.width; ++x) {
      const std::size_t i = a.index(y, x);
      const double dlogit = a.values[i] * (upstream.values[i] - weighted);
      for (int ch = 0; ch < z.channels; ++ch) {
        grad.at(y, x, ch) = dlogit * w[static_cast<std::size_t>(ch)];
      }
    }
  }
  return grad;
}

double energy(const Map2D& attention, const Region& r) {
  if (attention.height != r.grid.height || attention.width != r.grid.width) {
    fail(ErrorKind::shape, "attention map does not match the region's grid");
  }
  const double total = attention.total();
  if (!(total > 0.0)) {
    fail(ErrorKind::precondition, "attention map has no mass");
  }
  double inside = 0.0;
  for (int y = r.cells.y0; y <= r.cells.y1; ++y) {
    for (int x = r.cells.x0; x <= r.cells.x1; ++x) {
      inside += attention.at(y, x);
    }
  }
  const double deficit = 1.0 - inside / total;
  return deficit * deficit;
}

Latent energy_gradient(const AttentionProducer& producer, const Latent& z,
                       const std::vector<Binding>& bindings) {
  Latent grad(z.height, z.width, z.channels);
  for (const auto& [concept_id, r] : bindings) {
    const Map2D a = producer.attention(z, concept_id);
    const double total = a.total();
    if (!(total > 0.0)) {
      fail(ErrorKind::precondition, "attention map has no mass");
    }
    double inside = 0.0;
    for (int y = r.cells.y0; y <= r.cells.y1; ++y) {
      for (int x = r.cells.x0; x <= r.cells.x1; ++x) {
        inside += a.at(y, x);
      }
    }
    const double ratio = inside / total;
    // dE/dA_j = -2 (1 - ratio) (1[j in R] - ratio) / total.
    Map2D upstream(z.height, z.width);
    for (int y = 0; y < z.height; ++y) {
      for (int x = 0; x < z.width; ++x) {
        const double member = r.contains(x, y) ? 1.0 : 0.0;
        upstream.at(y, x) = -2.0 * (1.0 - ratio) * (member - ratio) / total;
      }
    }
    const Latent piece = producer.attention_vjp(z, concept_id, upstream);
    for (std::size_t i = 0; i < grad.values.size(); ++i) {
      grad.values[i] += piece.values[i];
    }
  }
  if (!grad.all_finite()) {
    fail(ErrorKind::numeric, "energy gradient is not finite");
  }
  return grad;
}

Latent cross_attention_control(const Latent& z, const AttentionProducer& producer,
                               const std::vector<Binding>& bindings, double eta,
                               int iterations) {
  if (iterations < 0) {
    fail(ErrorKind::argument, "iteration count must be nonnegative");
  }
  Latent current = z;
  if (bindings.empty()) return current;
  for (int iter = 0; iter < iterations; ++iter) {
    const Latent grad = energy_gradient(producer, current, bindings);
    for (std::size_t i = 0; i < current.values.size(); ++i) {
      current.values[i] -= eta * grad.values[i];
    }
    for (const auto& [concept_id, r] : bindings) {
      const double e = energy(producer.attention(current, concept_id), r);
      if (!std::isfinite(e)) {
        fail(ErrorKind::numeric,
             "attention energy diverged at iteration " + std::to_string(iter));
      }
    }
  }
  return current;
}

}  // namespace r2f::region
