#include "bls/optimize.hpp"

#include <cmath>
#include <string>

#include "bls/error.hpp"

namespace bls {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_input(const Network& net, const Vector& w, const char* what) {
  if (static_cast<std::size_t>(w.size()) != net.input_dim())
    throw InputError(std::string(what) + " expects w of length " +
                     std::to_string(net.input_dim()) + ", got " + std::to_string(w.size()));
}

}  // namespace

void validate_loss(const LossSpec& spec, Eigen::Index n) {
  std::visit(
      Overloaded{
          [&](const loss::LatentDistance& l) {
            if (l.w0.size() != n) throw InputError("latent-distance w0 has the wrong length");
            if (!(l.d_t >= 0.0)) throw InputError("latent-distance target d_t must be >= 0");
          },
          [&](const loss::ScoreMatch& l) {
            if (l.scorer.output_dim() != 1) throw InputError("scorer must have a scalar output");
            if (l.scorer.input_dim() != static_cast<std::size_t>(n))
              throw InputError("scorer input width does not match the latent dimension");
          },
          [&](const loss::FeatureMatch& l) {
            if (l.extractor.input_dim() != static_cast<std::size_t>(n))
              throw InputError("extractor input width does not match the latent dimension");
            const auto m = static_cast<Eigen::Index>(l.extractor.output_dim());
            if (l.target.size() != m || l.mask.size() != m)
              throw InputError("feature target and mask must match the extractor output width");
            for (Eigen::Index i = 0; i < m; ++i)
              if (l.mask[i] != 0.0 && l.mask[i] != 1.0)
                throw InputError("mask entries must be 0 or 1");
          },
      },
      spec);
}

double loss_value(const LossSpec& spec, const Vector& w) {
  return std::visit(
      Overloaded{
          [&](const loss::LatentDistance& l) {
            if (w.size() != l.w0.size()) throw InputError("latent-distance: length mismatch");
            const double r = (w - l.w0).squaredNorm() - l.d_t;
            return r * r;
          },
          [&](const loss::ScoreMatch& l) {
            check_input(l.scorer, w, "scorer");
            const double r = forward(l.scorer, w)[0] - l.s;
            return r * r;
          },
          [&](const loss::FeatureMatch& l) {
            check_input(l.extractor, w, "extractor");
            return (l.mask.array() * (forward(l.extractor, w) - l.target).array())
                .matrix()
                .squaredNorm();
          },
      },
      spec);
}

Vector loss_grad_w(const LossSpec& spec, const Vector& w) {
  return std::visit(
      Overloaded{
          [&](const loss::LatentDistance& l) -> Vector {
            if (w.size() != l.w0.size()) throw InputError("latent-distance: length mismatch");
            const Vector d = w - l.w0;
            return 4.0 * (d.squaredNorm() - l.d_t) * d;
          },
          [&](const loss::ScoreMatch& l) -> Vector {
            check_input(l.scorer, w, "scorer");
            auto [y, j] = forward_with_jacobian(l.scorer, w);
            return 2.0 * (y[0] - l.s) * j.row(0).transpose();
          },
          [&](const loss::FeatureMatch& l) -> Vector {
            check_input(l.extractor, w, "extractor");
            auto [y, j] = forward_with_jacobian(l.extractor, w);
            // mask^2 == mask for 0/1 entries.
            const Vector r = l.mask.cwiseProduct(y - l.target);
            return 2.0 * j.transpose() * r;
          },
      },
      spec);
}

Vector sgd_step(const LossSpec& spec, const Vector& w, double lr) {
  if (!(lr > 0.0)) throw ConfigError("learning rate must be positive");
  const Vector g = loss_grad_w(spec, w);
  if (!g.allFinite()) throw NumericError("non-finite gradient");
  return w - lr * g;
}

BoundedOptStep bounded_opt_step_detail(const MappingNetwork& net, const LossSpec& spec,
                                       const OptState& state, double lr, double alpha,
                                       double sv_threshold) {
  if (!(lr > 0.0)) throw ConfigError("learning rate must be positive");
  const int iter = state.iter + 1;
  const Vector g = loss_grad_w(spec, state.pair.w);
  if (!g.allFinite()) throw NumericError("non-finite gradient", iter);

  LocalFrame frame(state.pair, svd(jacobian(net, state.pair.z)), alpha, sv_threshold);
  BoundedMove move = bounded_move(frame, state.pair.w - lr * g);

  OptState next;
  next.pair.z = state.pair.z + move.delta_z;
  if (!next.pair.z.allFinite()) throw NumericError("non-finite latent update", iter);
  next.pair.w = forward(net, next.pair.z);
  next.iter = iter;
  next.loss = loss_value(spec, next.pair.w);
  if (!std::isfinite(next.loss)) throw NumericError("non-finite loss", iter);
  return BoundedOptStep{std::move(next), std::move(frame), std::move(move)};
}

OptState bounded_opt_step(const MappingNetwork& net, const LossSpec& spec, const OptState& state,
                          double lr, double alpha, double sv_threshold) {
  return bounded_opt_step_detail(net, spec, state, lr, alpha, sv_threshold).state;
}

std::string_view driver_name(Driver d) {
  return d == Driver::Sgd ? "sgd" : "bounded";
}

Driver parse_driver(std::string_view name) {
  if (name == "sgd") return Driver::Sgd;
  if (name == "bounded") return Driver::Bounded;
  throw ConfigError("unknown optimization driver '" + std::string(name) + "'");
}

std::vector<OptState> run_optimization(const MappingNetwork& net, const LossSpec& spec,
                                       const Vector& init_z, int iters, double lr, Driver driver,
                                       double alpha, double sv_threshold) {
  if (iters < 1) throw ConfigError("iters must be at least 1");
  if (!(lr > 0.0)) throw ConfigError("learning rate must be positive");
  validate_loss(spec, static_cast<Eigen::Index>(net.dim()));

  std::vector<OptState> out;
  out.reserve(static_cast<std::size_t>(iters) + 1);
  OptState state;
  state.pair = LatentPair{init_z, forward(net, init_z)};
  if (driver == Driver::Sgd) state.pair.z = Vector();
  state.loss = loss_value(spec, state.pair.w);
  out.push_back(state);

  for (int t = 0; t < iters; ++t) {
    if (driver == Driver::Sgd) {
      OptState next;
      try {
        next.pair.w = sgd_step(spec, state.pair.w, lr);
      } catch (const NumericError& e) {
        throw NumericError(e.what(), t + 1);
      }
      next.iter = t + 1;
      next.loss = loss_value(spec, next.pair.w);
      if (!next.pair.w.allFinite() || !std::isfinite(next.loss))
        throw NumericError("non-finite optimization state", t + 1);
      state = std::move(next);
    } else {
      state = bounded_opt_step(net, spec, state, lr, alpha, sv_threshold);
    }
    out.push_back(state);
  }
  return out;
}

}  // namespace bls
