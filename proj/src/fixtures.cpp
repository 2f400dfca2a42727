#include "bls/fixtures.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "bls/error.hpp"

namespace bls {
namespace {

// Stream tags keep the networks derived from one seed independent.
constexpr std::uint64_t kMappingStream = 1;
constexpr std::uint64_t kExtractorStream = 2;
constexpr std::uint64_t kScorerStream = 3;

constexpr double kBiasStd = 0.1;

layer::Linear random_linear(Rng& rng, std::size_t in, std::size_t out, double stddev) {
  layer::Linear l{Matrix(out, in), Vector(out)};
  // Row-major draw order so the stream layout matches the JSON layout.
  for (std::size_t r = 0; r < out; ++r)
    for (std::size_t c = 0; c < in; ++c) l.weight(r, c) = stddev * rng.normal();
  for (std::size_t r = 0; r < out; ++r) l.bias[r] = kBiasStd * rng.normal();
  return l;
}

double init_std(Activation act, std::size_t fan_in, std::size_t fan_out) {
  if (act == Activation::LeakyRelu) return std::sqrt(2.0 / static_cast<double>(fan_in));
  return std::sqrt(2.0 / static_cast<double>(fan_in + fan_out));
}

Network smooth_two_layer(Rng& rng, std::size_t in, std::size_t hidden, std::size_t out) {
  std::vector<LayerSpec> layers;
  layers.emplace_back(random_linear(rng, in, hidden, init_std(Activation::Tanh, in, hidden)));
  layers.emplace_back(layer::Tanh{});
  layers.emplace_back(random_linear(rng, hidden, out, init_std(Activation::Tanh, hidden, out)));
  return Network(in, std::move(layers));
}

}  // namespace

std::string_view activation_name(Activation a) {
  return a == Activation::LeakyRelu ? "leaky_relu" : "tanh";
}

Activation parse_activation(std::string_view name) {
  if (name == "leaky_relu") return Activation::LeakyRelu;
  if (name == "tanh") return Activation::Tanh;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

void FixtureConfig::validate() const {
  if (dim < 2) throw ConfigError("fixture dim must be at least 2");
  if (depth < 1) throw ConfigError("fixture depth must be at least 1");
}

MappingNetwork gen_mapping_network(const FixtureConfig& cfg) {
  cfg.validate();
  Rng rng = Rng::stream(cfg.seed, kMappingStream);
  std::vector<LayerSpec> layers;
  if (cfg.use_pixel_norm) layers.emplace_back(layer::PixelNorm{1e-8});

  std::size_t width = cfg.dim;
  for (std::size_t k = 0; k < cfg.depth; ++k) {
    const bool last = k + 1 == cfg.depth;
    const std::size_t out = last ? cfg.dim : cfg.hidden();
    if (k > 0) {
      if (cfg.activation == Activation::LeakyRelu)
        layers.emplace_back(layer::LeakyRelu{0.2});
      else
        layers.emplace_back(layer::Tanh{});
    }
    layers.emplace_back(random_linear(rng, width, out, init_std(cfg.activation, width, out)));
    width = out;
  }
  return MappingNetwork(cfg.dim, std::move(layers));
}

Network gen_feature_extractor(const FixtureConfig& cfg, std::size_t m) {
  cfg.validate();
  Rng rng = Rng::stream(cfg.seed, kExtractorStream);
  return smooth_two_layer(rng, cfg.dim, cfg.hidden(), m ? m : cfg.dim);
}

Network gen_scorer(const FixtureConfig& cfg) {
  cfg.validate();
  Rng rng = Rng::stream(cfg.seed, kScorerStream);
  return smooth_two_layer(rng, cfg.dim, cfg.hidden(), 1);
}

Vector sample_z(const FixtureConfig& cfg, Rng& rng) {
  return rng.normal_vector(static_cast<Eigen::Index>(cfg.dim));
}

Vector sample_direction(const FixtureConfig& cfg, Rng& rng) {
  Vector d = rng.normal_vector(static_cast<Eigen::Index>(cfg.dim));
  return d / d.norm();
}

}  // namespace bls
