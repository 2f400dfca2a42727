#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "bls/basis.hpp"
#include "bls/mapnet.hpp"
#include "bls/rng.hpp"

namespace bls {

enum class Method { Bounded, Linear, Random, Ict };

std::string_view method_name(Method m);
/// Accepts "bounded", "linear", "random", "ict". Throws ConfigError.
Method parse_method(std::string_view name);

/// Per-iteration W distances used for the reference generators, as named
/// presets.
namespace step_preset {
inline constexpr double kLhqLike = 2.0;
inline constexpr double kButterflyLike = 10.0;
inline constexpr double kFfhqLike = 20.0;
inline constexpr double kSemanticLike = 5.0;
}  // namespace step_preset

struct TraversalConfig {
  Method method = Method::Bounded;
  int steps = 500;
  double step_length = step_preset::kLhqLike;
  double alpha = kDefaultAlpha;
  double sv_threshold = kDefaultSvThreshold;
  std::uint64_t seed = 0;

  /// Throws ConfigError on steps < 1, step_length <= 0, alpha <= 0 or
  /// sv_threshold < 0.
  void validate() const;
};

/// `pair.z` is meaningful only for Bounded and Ict; Linear and Random move
/// w alone.
struct TraversalState {
  LatentPair pair;
  Vector direction;  // unit target direction in W
  double cum_dist = 0.0;
  int iter = 0;
};

struct TraversalRecord {
  int iter = 0;  // 1-based: the record of the iter-th update
  double cos_sim = 0.0;
  double step_len = 0.0;
  double cum_dist = 0.0;
  double w_norm = 0.0;
};

struct TraversalStep {
  TraversalState state;
  TraversalRecord record;
  /// Linearized W step predicted by the frame (Bounded: A_c U^T; Ict: the
  /// single-axis step). Empty for Linear and Random.
  Vector linear_delta_w;
};

/// Starting state at z: w = M(z), direction normalized by the caller.
TraversalState initial_state(const MappingNetwork& net, const Vector& z, const Vector& direction);

/// Target w_t + L d, bounded move inside the frame at z_t, z_{t+1} = z_t +
/// A_c Sigma^+ V^T, w_{t+1} = M(z_{t+1}). Metrics use the realized
/// delta_w = w_{t+1} - w_t.
TraversalStep step_bounded(const MappingNetwork& net, const TraversalState& state,
                           const TraversalConfig& config);

/// w_{t+1} = w_t + L d.
TraversalStep step_linear(const TraversalState& state, const TraversalConfig& config);

/// w_{t+1} = w_t + L r with r a fresh unit Gaussian direction, sign-flipped
/// so that r.d >= 0.
TraversalStep step_random(const TraversalState& state, const TraversalConfig& config, Rng& rng);

/// Moves along the single retained Local Basis axis best aligned with d:
/// z_{t+1} = z_t + s (L / sigma_i) v_i. Throws DegenerateFrameError if no
/// direction is retained.
TraversalStep step_ict(const MappingNetwork& net, const TraversalState& state,
                       const TraversalConfig& config);

/// Runs `config.steps` updates and returns one record per update. The
/// Random method draws from Rng(config.seed). Errors carry the iteration.
std::vector<TraversalRecord> run_traversal(const MappingNetwork& net,
                                           const TraversalConfig& config,
                                           const Vector& init_z, const Vector& direction);

/// Lower-level runner used by the experiment harness. `on_step` sees every
/// state after it is produced.
template <class OnStep>
std::vector<TraversalRecord> run_traversal_from(const MappingNetwork& net,
                                                const TraversalConfig& config,
                                                TraversalState state, OnStep&& on_step);

/// One update of any method.
TraversalStep step_any(const MappingNetwork& net, const TraversalState& state,
                       const TraversalConfig& config, Rng& rng);

template <class OnStep>
std::vector<TraversalRecord> run_traversal_from(const MappingNetwork& net,
                                                const TraversalConfig& config,
                                                TraversalState state, OnStep&& on_step) {
  config.validate();
  Rng rng(config.seed);
  std::vector<TraversalRecord> records;
  records.reserve(static_cast<std::size_t>(config.steps));
  for (int t = 0; t < config.steps; ++t) {
    TraversalStep step = step_any(net, state, config, rng);
    records.push_back(step.record);
    state = std::move(step.state);
    on_step(state, records.back());
  }
  return records;
}

}  // namespace bls
