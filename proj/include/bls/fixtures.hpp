#pragma once

#include <cstdint>
#include <string_view>

#include "bls/mapnet.hpp"
#include "bls/rng.hpp"

namespace bls {

enum class Activation { LeakyRelu, Tanh };

std::string_view activation_name(Activation a);
/// "leaky_relu" or "tanh". Throws ConfigError.
Activation parse_activation(std::string_view name);

/// Recipe for a synthetic, untrained stand-in network.
struct FixtureConfig {
  std::size_t dim = 16;
  std::size_t depth = 4;
  std::size_t hidden_dim = 0;  // 0 means "same as dim"
  Activation activation = Activation::LeakyRelu;
  bool use_pixel_norm = false;
  std::uint64_t seed = 0;

  std::size_t hidden() const noexcept { return hidden_dim ? hidden_dim : dim; }
  /// Throws ConfigError on dim < 2 or depth < 1.
  void validate() const;
};

/// [PixelNorm] Linear (act Linear)^(depth-1), square dim -> dim. Weights
/// are N(0, 2/fan_in) for LeakyRelu(0.2) stacks and N(0, 2/(fan_in +
/// fan_out)) for Tanh stacks; biases N(0, 0.1^2). Pure function of cfg.
MappingNetwork gen_mapping_network(const FixtureConfig& cfg);

/// Smooth proxy feature extractor R^dim -> R^m (m = 0 means dim):
/// Linear Tanh Linear. Seeded independently of the mapping network.
Network gen_feature_extractor(const FixtureConfig& cfg, std::size_t m = 0);

/// Smooth proxy scalar scorer R^dim -> R: Linear Tanh Linear.
Network gen_scorer(const FixtureConfig& cfg);

/// z ~ N(0, I_dim).
Vector sample_z(const FixtureConfig& cfg, Rng& rng);
/// Normalized N(0, I_dim) draw.
Vector sample_direction(const FixtureConfig& cfg, Rng& rng);

}  // namespace bls
