#include "bls/basis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bls/error.hpp"

namespace bls {
namespace {

void check_len(const LocalFrame& frame, Eigen::Index len, const char* what) {
  if (len != frame.dim())
    throw InputError(std::string(what) + " has length " + std::to_string(len) +
                     ", frame dimension is " + std::to_string(frame.dim()));
}

}  // namespace

LocalFrame::LocalFrame(LatentPair pair, SingularSystem sys, double alpha, double sv_threshold)
    : pair_(std::move(pair)), sys_(std::move(sys)), alpha_(alpha), sv_threshold_(sv_threshold) {
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_))
    throw ConfigError("scaling factor alpha must be positive");
  if (!(sv_threshold_ >= 0.0) || !std::isfinite(sv_threshold_))
    throw ConfigError("singular-value threshold must be non-negative");
}

Eigen::Index LocalFrame::rank() const {
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < dim(); ++i) r += retained(i) ? 1 : 0;
  return r;
}

Vector LocalFrame::half_widths() const {
  Vector h(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) h[i] = retained(i) ? alpha_ * sys_.sigma[i] : 0.0;
  return h;
}

LocalFrame compute_frame(const MappingNetwork& net, const Vector& z, double alpha,
                         double sv_threshold) {
  auto [w, j] = forward_with_jacobian(net, z);
  return LocalFrame(LatentPair{z, std::move(w)}, svd(j), alpha, sv_threshold);
}

Coefficients coefficients(const LocalFrame& frame, const Vector& delta_w) {
  check_len(frame, delta_w.size(), "delta_w");
  return {frame.sys().u.transpose() * delta_w};
}

Coefficients clamp_coefficients(const LocalFrame& frame, const Coefficients& a) {
  check_len(frame, a.a.size(), "coefficient vector");
  Coefficients out{Vector(a.a.size())};
  for (Eigen::Index i = 0; i < a.a.size(); ++i) {
    if (!frame.retained(i)) {
      out.a[i] = 0.0;
      continue;
    }
    const double bound = frame.alpha() * frame.sys().sigma[i];
    out.a[i] = std::min(std::max(a.a[i], -bound), bound);
  }
  return out;
}

Vector reconstruct_delta(const LocalFrame& frame, const Coefficients& a_c) {
  check_len(frame, a_c.a.size(), "coefficient vector");
  return frame.sys().u * a_c.a;
}

Vector pullback(const LocalFrame& frame, const Coefficients& a_c) {
  check_len(frame, a_c.a.size(), "coefficient vector");
  Vector scaled(a_c.a.size());
  for (Eigen::Index i = 0; i < scaled.size(); ++i)
    scaled[i] = frame.retained(i) ? a_c.a[i] / frame.sys().sigma[i] : 0.0;
  return frame.sys().v * scaled;
}

bool contains(const LocalFrame& frame, const Vector& w_point, double tol) {
  check_len(frame, w_point.size(), "point");
  const Vector lambda = frame.sys().u.transpose() * (w_point - frame.w());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double bound = frame.retained(i) ? frame.alpha() * frame.sys().sigma[i] : 0.0;
    if (!(std::abs(lambda[i]) <= bound + tol)) return false;
  }
  return true;
}

BoundedMove bounded_move(const LocalFrame& frame, const Vector& w_target) {
  check_len(frame, w_target.size(), "target");
  BoundedMove m;
  m.raw = coefficients(frame, w_target - frame.w());
  m.clamped = clamp_coefficients(frame, m.raw);
  m.delta_w = reconstruct_delta(frame, m.clamped);
  m.delta_z = pullback(frame, m.clamped);
  return m;
}

}  // namespace bls
