#include "bls/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bls/error.hpp"
#include "bls/linalg.hpp"

namespace bls {

double cosine_similarity(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw InputError("cosine_similarity: length mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) throw DomainError("cosine_similarity of a zero-length vector");
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

FeaturePopulation fit_gaussian(const Matrix& features) {
  if (features.rows() < 2) throw InputError("fit_gaussian needs at least two samples");
  if (!features.allFinite()) throw InputError("fit_gaussian: non-finite feature");

  FeaturePopulation pop;
  pop.features = features;
  pop.mean = features.colwise().mean().transpose();
  const Matrix centered = features.rowwise() - pop.mean.transpose();
  pop.cov = (centered.transpose() * centered) / static_cast<double>(features.rows() - 1);
  pop.cov = 0.5 * (pop.cov + pop.cov.transpose()).eval();

  const Eigen::Index m = features.cols();
  pop.degenerate = features.rows() < m + 1;
  if (!pop.degenerate) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(pop.cov, Eigen::EigenvaluesOnly);
    const double top = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    pop.degenerate = eig.eigenvalues().minCoeff() <= 1e-12 * top;
  }
  return pop;
}

FeaturePopulation fit_gaussian(const std::vector<Vector>& features) {
  if (features.size() < 2) throw InputError("fit_gaussian needs at least two samples");
  const Eigen::Index m = features.front().size();
  Matrix rows(static_cast<Eigen::Index>(features.size()), m);
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != m) throw InputError("fit_gaussian: samples differ in dimension");
    rows.row(static_cast<Eigen::Index>(i)) = features[i].transpose();
  }
  return fit_gaussian(rows);
}

double frechet_distance(const FeaturePopulation& p, const FeaturePopulation& q) {
  if (p.mean.size() != q.mean.size())
    throw InputError("frechet_distance: dimension mismatch (" + std::to_string(p.mean.size()) +
                     " vs " + std::to_string(q.mean.size()) + ")");
  const double mean_term = (p.mean - q.mean).squaredNorm();
  const double tr_p = p.cov.trace();
  const double tr_q = q.cov.trace();
  const double d2 = mean_term + tr_p + tr_q - 2.0 * trace_sqrt_product(p.cov, q.cov);
  if (d2 >= 0.0) return d2;
  if (d2 >= -1e-8 * std::max(1.0, tr_p + tr_q)) return 0.0;
  throw NumericError("frechet_distance is negative beyond tolerance: " + std::to_string(d2));
}

}  // namespace bls
