#pragma once

#include "bls/linalg.hpp"
#include "bls/mapnet.hpp"

namespace bls {

inline constexpr double kDefaultAlpha = 1.0;
inline constexpr double kDefaultSvThreshold = 0.05;

/// Coordinates of a W-space displacement in the Local Basis. Row
/// convention: delta_w = a U^T, i.e. delta_w = sum_i a_i u_i.
struct Coefficients {
  Vector a;
};

/// One Bounded Local Space: the box
///   { w + sum_i lambda_i u_i : |lambda_i| <= alpha sigma_i }
/// around w = M(z), with directions whose sigma_i <= sv_threshold frozen
/// (lambda_i = 0).
class LocalFrame {
 public:
  LocalFrame(LatentPair pair, SingularSystem sys, double alpha, double sv_threshold);

  const Vector& z() const noexcept { return pair_.z; }
  const Vector& w() const noexcept { return pair_.w; }
  const LatentPair& pair() const noexcept { return pair_; }
  const SingularSystem& sys() const noexcept { return sys_; }
  double alpha() const noexcept { return alpha_; }
  double sv_threshold() const noexcept { return sv_threshold_; }
  Eigen::Index dim() const noexcept { return sys_.dim(); }

  bool retained(Eigen::Index i) const { return sys_.sigma[i] > sv_threshold_; }
  /// Number of directions with sigma above the threshold.
  Eigen::Index rank() const;
  /// alpha * sigma_i for retained directions, 0 for thresholded ones.
  Vector half_widths() const;

 private:
  LatentPair pair_;
  SingularSystem sys_;
  double alpha_;
  double sv_threshold_;
};

/// Frame at z: w = M(z), sys = svd(J(z)). Throws ConfigError for
/// alpha <= 0 or sv_threshold < 0; propagates mapnet/linalg errors.
LocalFrame compute_frame(const MappingNetwork& net, const Vector& z,
                         double alpha = kDefaultAlpha,
                         double sv_threshold = kDefaultSvThreshold);

/// A with A U^T = delta_w, computed as A = delta_w U (U is orthonormal).
Coefficients coefficients(const LocalFrame& frame, const Vector& delta_w);

/// a_ci = clamp(a_i, -alpha sigma_i, alpha sigma_i), or 0 if sigma_i is at
/// or below the threshold.
Coefficients clamp_coefficients(const LocalFrame& frame, const Coefficients& a);

/// A_c U^T.
Vector reconstruct_delta(const LocalFrame& frame, const Coefficients& a_c);

/// Pulls a clamped W-space step back to Z: A_c Sigma^+ V^T, where Sigma^+
/// holds 1/sigma_i for retained directions and 0 elsewhere.
Vector pullback(const LocalFrame& frame, const Coefficients& a_c);

/// True iff every Local Basis coordinate lambda_i of (w_point - w)
/// satisfies |lambda_i| <= alpha sigma_i + tol (retained directions) or
/// |lambda_i| <= tol (thresholded directions).
bool contains(const LocalFrame& frame, const Vector& w_point, double tol);

/// Everything one bounded move toward `w_target` produces.
struct BoundedMove {
  Coefficients raw;      // A
  Coefficients clamped;  // A_c
  Vector delta_w;        // A_c U^T, the linearized W step
  Vector delta_z;        // A_c Sigma^+ V^T
};

/// Projects w_target - w into the frame's box and maps the result to Z.
BoundedMove bounded_move(const LocalFrame& frame, const Vector& w_target);

}  // namespace bls
