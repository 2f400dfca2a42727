#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "bls/basis.hpp"
#include "bls/mapnet.hpp"

namespace bls {

namespace loss {

/// (|w - w0|^2 - d_t)^2: keep a fixed squared distance from w0.
struct LatentDistance {
  Vector w0;
  double d_t = 0.0;
};

/// (scorer(w) - s)^2 for a scalar-valued network.
struct ScoreMatch {
  Network scorer;
  double s = 0.0;
};

/// |mask * (extractor(w) - target)|^2 with a 0/1 mask.
struct FeatureMatch {
  Network extractor;
  Vector target;
  Vector mask;
};

}  // namespace loss

using LossSpec = std::variant<loss::LatentDistance, loss::ScoreMatch, loss::FeatureMatch>;

/// Throws InputError if the spec's own dimensions are inconsistent, the
/// mask is not 0/1, or it does not accept w of length n.
void validate_loss(const LossSpec& spec, Eigen::Index n);

double loss_value(const LossSpec& spec, const Vector& w);

/// Analytic dL/dw (chain rule through scorer/extractor Jacobians).
Vector loss_grad_w(const LossSpec& spec, const Vector& w);

/// Plain gradient step in W: w - lr * grad L(w). Throws NumericError on a
/// non-finite gradient.
Vector sgd_step(const LossSpec& spec, const Vector& w, double lr);

struct OptState {
  LatentPair pair;  // pair.z is empty for the Sgd driver, which moves w only
  int iter = 0;
  double loss = 0.0;
};

struct BoundedOptStep {
  OptState state;
  LocalFrame frame;  // frame at the previous point
  BoundedMove move;  // projected step taken inside `frame`
};

/// Target w_t - lr grad L(w_t), then one bounded move toward it and
/// w_{t+1} = M(z_{t+1}).
BoundedOptStep bounded_opt_step_detail(const MappingNetwork& net, const LossSpec& spec,
                                       const OptState& state, double lr, double alpha,
                                       double sv_threshold);
OptState bounded_opt_step(const MappingNetwork& net, const LossSpec& spec, const OptState& state,
                          double lr, double alpha = kDefaultAlpha,
                          double sv_threshold = kDefaultSvThreshold);

enum class Driver { Sgd, Bounded };

std::string_view driver_name(Driver d);
/// "sgd" or "bounded". Throws ConfigError.
Driver parse_driver(std::string_view name);

/// Returns iters + 1 states: the starting point (iter 0) followed by one per
/// update.
std::vector<OptState> run_optimization(const MappingNetwork& net, const LossSpec& spec,
                                       const Vector& init_z, int iters, double lr, Driver driver,
                                       double alpha = kDefaultAlpha,
                                       double sv_threshold = kDefaultSvThreshold);

/// Learning rates pairing a baseline with a larger bounded rate.
struct LearningRates {
  double sgd;
  double bounded;
};

namespace lr_preset {
// Latent-distance and score tasks: 1e-3 baseline, 5x for the bounded driver.
inline constexpr LearningRates kLatentDistance{1e-3, 5e-3};
inline constexpr LearningRates kScoreMatch{1e-3, 5e-3};
// Masked-target search: bounded driver runs at twice the baseline rate.
inline constexpr LearningRates kFeatureMatch{5e-2, 1e-1};
}  // namespace lr_preset

}  // namespace bls
