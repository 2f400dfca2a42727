#include "bls/traversal.hpp"

#include <cmath>
#include <string>

#include "bls/error.hpp"
#include "bls/metrics.hpp"

namespace bls {
namespace {

// Builds the next state and its record from a realized W displacement.
TraversalStep finish(const TraversalState& prev, LatentPair next, const Vector& delta_w,
                     Vector linear_delta_w) {
  const int iter = prev.iter + 1;
  if (!next.w.allFinite() || !next.z.allFinite() || !delta_w.allFinite())
    throw NumericError("non-finite latent update", iter);

  const double step_len = delta_w.norm();
  TraversalStep out;
  out.record.iter = iter;
  out.record.step_len = step_len;
  // A zero step has no direction; it is recorded as orthogonal.
  out.record.cos_sim = step_len > 0.0 ? cosine_similarity(delta_w, prev.direction) : 0.0;
  out.record.cum_dist = prev.cum_dist + delta_w.dot(prev.direction);
  out.record.w_norm = next.w.norm();

  out.state.pair = std::move(next);
  out.state.direction = prev.direction;
  out.state.cum_dist = out.record.cum_dist;
  out.state.iter = iter;
  out.linear_delta_w = std::move(linear_delta_w);
  return out;
}

void check_consistent(const MappingNetwork& net, const TraversalState& state) {
  if (static_cast<std::size_t>(state.pair.z.size()) != net.dim() ||
      static_cast<std::size_t>(state.pair.w.size()) != net.dim())
    throw InputError("traversal state does not match the network dimension");
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::Bounded: return "bounded";
    case Method::Linear: return "linear";
    case Method::Random: return "random";
    case Method::Ict: return "ict";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "bounded") return Method::Bounded;
  if (name == "linear") return Method::Linear;
  if (name == "random") return Method::Random;
  if (name == "ict") return Method::Ict;
  throw ConfigError("unknown traversal method '" + std::string(name) + "'");
}

void TraversalConfig::validate() const {
  if (steps < 1) throw ConfigError("steps must be at least 1");
  if (!(step_length > 0.0) || !std::isfinite(step_length))
    throw ConfigError("step_length must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be positive");
  if (!(sv_threshold >= 0.0) || !std::isfinite(sv_threshold))
    throw ConfigError("sv_threshold must be non-negative");
}

TraversalState initial_state(const MappingNetwork& net, const Vector& z, const Vector& direction) {
  if (static_cast<std::size_t>(direction.size()) != net.dim())
    throw InputError("direction length does not match the network dimension");
  if (std::abs(direction.norm() - 1.0) > 1e-9)
    throw InputError("target direction must be a unit vector");
  TraversalState s;
  s.pair = LatentPair{z, forward(net, z)};
  s.direction = direction;
  return s;
}

TraversalStep step_bounded(const MappingNetwork& net, const TraversalState& state,
                           const TraversalConfig& config) {
  check_consistent(net, state);
  const LocalFrame frame(state.pair, svd(jacobian(net, state.pair.z)), config.alpha,
                         config.sv_threshold);
  const Vector w_target = state.pair.w + config.step_length * state.direction;
  BoundedMove move = bounded_move(frame, w_target);

  LatentPair next;
  next.z = state.pair.z + move.delta_z;
  if (!next.z.allFinite()) throw NumericError("non-finite latent update", state.iter + 1);
  next.w = forward(net, next.z);
  const Vector realized = next.w - state.pair.w;
  return finish(state, std::move(next), realized, std::move(move.delta_w));
}

TraversalStep step_linear(const TraversalState& state, const TraversalConfig& config) {
  const Vector delta_w = config.step_length * state.direction;
  LatentPair next{state.pair.z, state.pair.w + delta_w};
  return finish(state, std::move(next), delta_w, Vector());
}

TraversalStep step_random(const TraversalState& state, const TraversalConfig& config, Rng& rng) {
  Vector r = rng.normal_vector(state.direction.size());
  r.normalize();
  if (r.dot(state.direction) < 0.0) r = -r;
  const Vector delta_w = config.step_length * r;
  LatentPair next{state.pair.z, state.pair.w + delta_w};
  return finish(state, std::move(next), delta_w, Vector());
}

TraversalStep step_ict(const MappingNetwork& net, const TraversalState& state,
                       const TraversalConfig& config) {
  check_consistent(net, state);
  const LocalFrame frame(state.pair, svd(jacobian(net, state.pair.z)), config.alpha,
                         config.sv_threshold);
  if (frame.rank() == 0)
    throw DegenerateFrameError("every singular value is at or below the threshold",
                               state.iter + 1);

  const SingularSystem& sys = frame.sys();
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < frame.dim(); ++i) {
    if (!frame.retained(i)) continue;
    const double a = std::abs(sys.u.col(i).dot(state.direction));
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  const double sign = sys.u.col(best).dot(state.direction) < 0.0 ? -1.0 : 1.0;
  const double scale = sign * config.step_length / sys.sigma[best];

  LatentPair next;
  next.z = state.pair.z + scale * sys.v.col(best);
  if (!next.z.allFinite()) throw NumericError("non-finite latent update", state.iter + 1);
  next.w = forward(net, next.z);
  const Vector realized = next.w - state.pair.w;
  Vector linear = sign * config.step_length * sys.u.col(best);
  return finish(state, std::move(next), realized, std::move(linear));
}

TraversalStep step_any(const MappingNetwork& net, const TraversalState& state,
                       const TraversalConfig& config, Rng& rng) {
  switch (config.method) {
    case Method::Bounded: return step_bounded(net, state, config);
    case Method::Linear: return step_linear(state, config);
    case Method::Random: return step_random(state, config, rng);
    case Method::Ict: return step_ict(net, state, config);
  }
  throw ConfigError("unknown traversal method");
}

std::vector<TraversalRecord> run_traversal(const MappingNetwork& net,
                                           const TraversalConfig& config,
                                           const Vector& init_z, const Vector& direction) {
  return run_traversal_from(net, config, initial_state(net, init_z, direction),
                            [](const TraversalState&, const TraversalRecord&) {});
}

}  // namespace bls
