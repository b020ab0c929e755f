#pragma once

#include <string>
#include <utility>
#include <vector>

#include "r2f/region.hpp"

namespace r2f::region {

// Differentiable map from a latent to a per-concept spatial attention map.
// Implementations expose the chain rule through attention_vjp: given the
// gradient of a scalar with respect to the attention map, return its gradient
// with respect to the latent.
class AttentionProducer {
 public:
  virtual ~AttentionProducer() = default;
  virtual Map2D attention(const Latent& z, const std::string& concept_id) const = 0;
  virtual Latent attention_vjp(const Latent& z, const std::string& concept_id,
                               const Map2D& upstream) const = 0;
};

// Reference producer: per-cell logits <z_{y,x}, w_c> against a unit concept
// vector w_c derived deterministically from the concept id, normalized by a
// spatial softmax. Output sums to 1 and is strictly positive.
class SoftmaxAttentionProducer : public AttentionProducer {
 public:
  Map2D attention(const Latent& z, const std::string& concept_id) const override;
  Latent attention_vjp(const Latent& z, const std::string& concept_id,
                       const Map2D& upstream) const override;

  std::vector<double> concept_vector(const std::string& concept_id,
                                     int channels) const;
};

using Binding = std::pair<std::string, Region>;  // (concept id, target region)

// Squared fraction of attention mass missing from the region:
// (1 - inside/total)^2.
double energy(const Map2D& attention, const Region& r);

// Gradient of the summed binding energies with respect to the latent.
Latent energy_gradient(const AttentionProducer& producer, const Latent& z,
                       const std::vector<Binding>& bindings);

// N gradient-descent updates z <- z - eta * grad. N = 0 or no bindings is the
// identity.
Latent cross_attention_control(const Latent& z, const AttentionProducer& producer,
                               const std::vector<Binding>& bindings, double eta,
                               int iterations);

}  // namespace r2f::region
