#include "bls/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "bls/error.hpp"

namespace bls {
namespace {

constexpr double kRotationTol = 1e-14;

// Rotate columns p and q of `a` by (c, s):
//   a_p <- c a_p - s a_q,  a_q <- s a_p + c a_q.
void rotate_columns(Matrix& a, Eigen::Index p, Eigen::Index q, double c, double s) {
  double* ap = a.col(p).data();
  double* aq = a.col(q).data();
  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    const double x = ap[k];
    const double y = aq[k];
    ap[k] = c * x - s * y;
    aq[k] = s * x + c * y;
  }
}

double dot(const double* x, const double* y, Eigen::Index n) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) acc += x[k] * y[k];
  return acc;
}

// Fill `u.col(k)` for every k with `missing[k]` with a unit vector
// orthogonal to all other columns, drawing candidates from the standard
// basis and keeping the one with the largest residual.
void complete_basis(Matrix& u, const std::vector<bool>& missing) {
  const Eigen::Index n = u.rows();
  std::vector<bool> valid(missing.size());
  for (std::size_t k = 0; k < missing.size(); ++k) valid[k] = !missing[k];

  for (Eigen::Index k = 0; k < n; ++k) {
    if (valid[k]) continue;
    Vector best;
    double best_norm = -1.0;
    for (Eigen::Index m = 0; m < n; ++m) {
      Vector cand = Vector::Unit(n, m);
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index j = 0; j < n; ++j)
          if (valid[j]) cand -= u.col(j).dot(cand) * u.col(j);
      const double norm = cand.norm();
      if (norm > best_norm) {
        best_norm = norm;
        best = std::move(cand);
      }
    }
    u.col(k) = best / best_norm;
    valid[k] = true;
  }
}

}  // namespace

SingularSystem svd(const Matrix& j) {
  if (j.rows() != j.cols()) throw InputError("svd expects a square matrix");
  if (!j.allFinite()) throw InputError("svd input has non-finite entries");

  const Eigen::Index n = j.rows();
  Matrix w = j;
  Matrix v = Matrix::Identity(n, n);
  const double tol =
      std::max(kRotationTol, static_cast<double>(n) * std::numeric_limits<double>::epsilon());
  const long max_sweeps = 100 * static_cast<long>(std::max<Eigen::Index>(n, 1));

  long sweep = 0;
  for (bool rotated = true; rotated; ++sweep) {
    if (sweep >= max_sweeps)
      throw NumericError("svd did not converge", sweep);
    rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double alpha = dot(w.col(p).data(), w.col(p).data(), n);
        const double beta = dot(w.col(q).data(), w.col(q).data(), n);
        const double gamma = dot(w.col(p).data(), w.col(q).data(), n);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;

        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        rotate_columns(w, p, q, c, s);
        rotate_columns(v, p, q, c, s);
        rotated = true;
      }
    }
  }

  Vector sigma(n);
  for (Eigen::Index k = 0; k < n; ++k) sigma[k] = w.col(k).norm();

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return sigma[a] > sigma[b]; });

  SingularSystem out{Matrix(n, n), Vector(n), Matrix(n, n)};
  std::vector<bool> missing(n, false);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[k];
    out.sigma[k] = sigma[src];
    out.v.col(k) = v.col(src);
    if (sigma[src] > 0.0) {
      out.u.col(k) = w.col(src) / sigma[src];
      if (!out.u.col(k).allFinite()) missing[k] = true;
    } else {
      missing[k] = true;
    }
  }
  if (std::find(missing.begin(), missing.end(), true) != missing.end()) {
    for (Eigen::Index k = 0; k < n; ++k)
      if (missing[k]) out.u.col(k).setZero();
    complete_basis(out.u, missing);
  }

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (std::abs(out.u(i, k)) > std::abs(out.u(arg, k))) arg = i;
    if (out.u(arg, k) < 0.0) {
      out.u.col(k) *= -1.0;
      out.v.col(k) *= -1.0;
    }
  }
  return out;
}

double orthogonality_residual(const Matrix& q) {
  return (q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).norm();
}

double reconstruction_error(const Matrix& j, const SingularSystem& sys) {
  return (j - sys.u * sys.sigma.asDiagonal() * sys.v.transpose()).norm();
}

namespace {

double scale_of(const Matrix& c) {
  return std::max(1.0, c.cwiseAbs().maxCoeff());
}

// Symmetric PSD check; returns C symmetrized.
Matrix checked_covariance(const Matrix& c, const char* name) {
  if (c.rows() != c.cols()) throw InputError(std::string(name) + " must be square");
  if (!c.allFinite()) throw InputError(std::string(name) + " has non-finite entries");
  const double scale = scale_of(c);
  if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw InputError(std::string(name) + " is not symmetric");
  return 0.5 * (c + c.transpose());
}

}  // namespace

double trace_sqrt_product(const Matrix& c1, const Matrix& c2) {
  const Matrix a = checked_covariance(c1, "C1");
  const Matrix b = checked_covariance(c2, "C2");
  if (a.rows() != b.rows()) throw InputError("covariance dimensions differ");
  if (a.rows() == 0) return 0.0;

  Eigen::SelfAdjointEigenSolver<Matrix> eig_a(a);
  const double floor_a = -1e-10 * scale_of(a);
  if (eig_a.eigenvalues().minCoeff() < floor_a)
    throw InputError("C1 is not positive semi-definite");
  Eigen::SelfAdjointEigenSolver<Matrix> eig_b(b, Eigen::EigenvaluesOnly);
  if (eig_b.eigenvalues().minCoeff() < -1e-10 * scale_of(b))
    throw InputError("C2 is not positive semi-definite");

  const Vector root = eig_a.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix sqrt_a = eig_a.eigenvectors() * root.asDiagonal() * eig_a.eigenvectors().transpose();
  Matrix m = sqrt_a * b * sqrt_a;
  m = 0.5 * (m + m.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> eig_m(m, Eigen::EigenvaluesOnly);
  const Vector& lambda = eig_m.eigenvalues();
  const double floor_m = -1e-8 * scale_of(m);
  double trace = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < floor_m)
      throw InputError("C1^(1/2) C2 C1^(1/2) has a negative eigenvalue beyond tolerance");
    trace += std::sqrt(std::max(lambda[i], 0.0));
  }
  return trace;
}

}  // namespace bls
