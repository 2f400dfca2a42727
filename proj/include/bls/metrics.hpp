#pragma once

#include <vector>

#include "bls/types.hpp"

namespace bls {

/// a.b / (|a| |b|), clamped to [-1, 1]. Throws DomainError if either input
/// has zero length.
double cosine_similarity(const Vector& a, const Vector& b);

/// Gaussian fit of a feature population. `features` holds one sample per
/// row.
struct FeaturePopulation {
  Matrix features;
  Vector mean;
  Matrix cov;
  /// Fewer than m + 1 samples, or a singular covariance.
  bool degenerate = false;

  Eigen::Index count() const noexcept { return features.rows(); }
  Eigen::Index dim() const noexcept { return features.cols(); }
};

/// Sample mean and unbiased (n - 1) covariance, symmetrized. Needs at
/// least two samples of equal dimension (InputError otherwise).
FeaturePopulation fit_gaussian(const Matrix& features);
FeaturePopulation fit_gaussian(const std::vector<Vector>& features);

/// Squared Frechet distance between the Gaussian fits:
///   |mu_p - mu_q|^2 + Tr(C_p + C_q - 2 (C_p C_q)^{1/2}).
/// Results in [-1e-8 * scale, 0) are reported as 0; anything lower throws
/// NumericError. scale = max(1, Tr C_p + Tr C_q).
double frechet_distance(const FeaturePopulation& p, const FeaturePopulation& q);

}  // namespace bls
