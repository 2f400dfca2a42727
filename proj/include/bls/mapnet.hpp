#pragma once

#include <cstddef>
#include <filesystem>
#include <utility>
#include <variant>
#include <vector>

#include "bls/types.hpp"

namespace bls {

namespace layer {

/// y = W x + b. `weight` is rows x cols, so the layer maps R^cols -> R^rows.
struct Linear {
  Matrix weight;
  Vector bias;
};

/// y = x for x > 0, slope * x otherwise. The derivative at exactly 0 is
/// `slope`.
struct LeakyRelu {
  double slope = 0.2;
};

struct Tanh {};

/// y = x / sqrt(mean(x^2) + epsilon), the per-sample normalization used
/// at the input of style-based mapping networks.
struct PixelNorm {
  double epsilon = 1e-8;
};

}  // namespace layer

using LayerSpec =
    std::variant<layer::Linear, layer::LeakyRelu, layer::Tanh, layer::PixelNorm>;

/// A validated feed-forward stack of LayerSpec. Input and output widths may
/// differ; scorers and feature extractors are plain Networks.
///
/// Immutable after construction.
class Network {
 public:
  /// Throws ConfigError naming the first incompatible layer.
  Network(std::size_t input_dim, std::vector<LayerSpec> layers);

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t output_dim() const noexcept { return output_dim_; }
  const std::vector<LayerSpec>& layers() const noexcept { return layers_; }

 private:
  std::size_t input_dim_;
  std::size_t output_dim_;
  std::vector<LayerSpec> layers_;
};

/// The map M: Z -> W. Same as Network but square (n -> n), so the Jacobian
/// is square and its left singular vectors span W.
class MappingNetwork {
 public:
  /// Throws ConfigError if the stack is invalid or not n -> n.
  MappingNetwork(std::size_t input_dim, std::vector<LayerSpec> layers);
  explicit MappingNetwork(Network net);

  std::size_t dim() const noexcept { return net_.input_dim(); }
  const Network& network() const noexcept { return net_; }
  operator const Network&() const noexcept { return net_; }

 private:
  Network net_;
};

/// (z, w) with w = M(z) whenever produced by this library.
struct LatentPair {
  Vector z;
  Vector w;
};

/// w = M(z). Throws ConfigError on a size mismatch (layer 0).
Vector forward(const Network& net, const Vector& z);

/// Analytic Jacobian J[i][j] = d out_i / d z_j via the layerwise chain rule.
Matrix jacobian(const Network& net, const Vector& z);

/// Bit-identical to (forward(net, z), jacobian(net, z)) in one pass.
std::pair<Vector, Matrix> forward_with_jacobian(const Network& net,
                                                const Vector& z);

/// Smallest |pre-activation| seen by any LeakyRelu layer at z, or +inf if
/// there is none. Tests use it to keep finite-difference probes off kinks.
double min_kink_distance(const Network& net, const Vector& z);

/// `first` followed by `second`.
Network compose(const Network& first, const Network& second);

// JSON weight files:
//   {"input_dim": n, "layers": [{"type": "linear", "weight": [[..]..],
//    "bias": [..]} | {"type": "leaky_relu", "slope": s} | {"type": "tanh"}
//    | {"type": "pixel_norm", "epsilon": e}]}
// Doubles are written shortest-round-trip, so load(save(net)) is exact.
Network load_network(const std::filesystem::path& path);
void save_network(const Network& net, const std::filesystem::path& path);
Network network_from_json_text(const std::string& text);
std::string network_to_json_text(const Network& net);

}  // namespace bls
