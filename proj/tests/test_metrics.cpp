#include <doctest.h>

#include <cmath>

#include "bls/error.hpp"
#include "bls/metrics.hpp"
#include "test_util.hpp"

using namespace bls;
using bls::testing::random_matrix;

namespace {

FeaturePopulation moments(const Vector& mean, const Matrix& cov) {
  FeaturePopulation p;
  p.mean = mean;
  p.cov = cov;
  return p;
}

Matrix gaussian_rows(Rng& rng, Eigen::Index count, const Matrix& mix, const Vector& shift) {
  Matrix x = random_matrix(rng, count, mix.cols()) * mix.transpose();
  x.rowwise() += shift.transpose();
  return x;
}

}  // namespace

TEST_CASE("cosine similarity examples") {
  CHECK(cosine_similarity(Vector{{1.0, 2.0}}, Vector{{1.0, 2.0}}) == doctest::Approx(1.0));
  CHECK(cosine_similarity(Vector{{1.0, 0.0}}, Vector{{0.0, 1.0}}) == 0.0);
  CHECK(cosine_similarity(Vector{{1.0, 0.0}}, Vector{{1.0, 1.0}}) ==
        doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
  CHECK(cosine_similarity(Vector{{1.0, 0.0}}, Vector{{-3.0, 0.0}}) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(cosine_similarity(Vector::Zero(2), Vector{{1.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(cosine_similarity(Vector{{1.0, 0.0}}, Vector::Zero(2)), DomainError);
  CHECK_THROWS(cosine_similarity(Vector::Ones(2), Vector::Ones(3)));
}

TEST_CASE("cosine similarity is bounded and scale invariant") {
  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    const Vector a = rng.normal_vector(7);
    const Vector b = rng.uniform() < 0.1 ? Vector(rng.uniform(0.1, 5.0) * a) : rng.normal_vector(7);
    const double c = cosine_similarity(a, b);
    CHECK(c >= -1.0);
    CHECK(c <= 1.0);
    const double k = std::exp(rng.uniform(-5.0, 5.0));
    CHECK(std::abs(cosine_similarity(k * a, b) - c) <= 1e-12);
    CHECK(std::abs(cosine_similarity(a, k * b) - c) <= 1e-12);
  }
}

TEST_CASE("fit_gaussian by hand") {
  const FeaturePopulation p = fit_gaussian(std::vector<Vector>{Vector{{0.0, 0.0}}, Vector{{2.0, 0.0}}});
  CHECK(p.mean == Vector{{1.0, 0.0}});
  CHECK(p.cov(0, 0) == doctest::Approx(2.0));
  CHECK(p.cov(0, 1) == 0.0);
  CHECK(p.cov(1, 1) == 0.0);
  CHECK(p.degenerate);  // 2 samples < m + 1

  const FeaturePopulation dup = fit_gaussian(std::vector<Vector>(5, Vector{{1.0, -1.0}}));
  CHECK(dup.cov.isZero());
  CHECK(dup.degenerate);

  CHECK_THROWS_AS(fit_gaussian(std::vector<Vector>{Vector::Ones(2)}), InputError);
  CHECK_THROWS_AS(fit_gaussian(std::vector<Vector>{Vector::Ones(2), Vector::Ones(3)}), InputError);
}

TEST_CASE("fit_gaussian mean and covariance agree with direct sums") {
  Rng rng(2);
  const Matrix x = random_matrix(rng, 40, 3);
  const FeaturePopulation p = fit_gaussian(x);
  CHECK_FALSE(p.degenerate);
  for (Eigen::Index a = 0; a < 3; ++a) {
    double mean_a = 0.0;
    for (Eigen::Index r = 0; r < 40; ++r) mean_a += x(r, a);
    mean_a /= 40.0;
    CHECK(p.mean[a] == doctest::Approx(mean_a).epsilon(1e-12));
    for (Eigen::Index b = 0; b < 3; ++b) {
      double s = 0.0;
      for (Eigen::Index r = 0; r < 40; ++r) s += (x(r, a) - p.mean[a]) * (x(r, b) - p.mean[b]);
      CHECK(std::abs(p.cov(a, b) - s / 39.0) <= 1e-10);
    }
  }
  CHECK(p.cov == p.cov.transpose());
}

TEST_CASE("fit_gaussian of standard normal draws") {
  Rng rng(3);
  const Matrix x = random_matrix(rng, 100000, 4);
  const FeaturePopulation p = fit_gaussian(x);
  CHECK(p.mean.cwiseAbs().maxCoeff() <= 0.02);
  CHECK((p.cov - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 0.05);
}

TEST_CASE("frechet distance closed forms") {
  Rng rng(4);
  const Matrix b = random_matrix(rng, 3, 3);
  const Matrix c = b * b.transpose();
  const FeaturePopulation p = moments(Vector::Zero(3), c);
  CHECK(std::abs(frechet_distance(p, p)) <= 1e-9);

  const Matrix c2 = Matrix::Identity(2, 2) * 0.7;
  CHECK(frechet_distance(moments(Vector::Zero(2), c2), moments(Vector{{1.0, 0.0}}, c2)) ==
        doctest::Approx(1.0).epsilon(1e-9));

  const Matrix d1 = Vector{{4.0, 1.0}}.asDiagonal();
  const Matrix d2 = Vector{{1.0, 4.0}}.asDiagonal();
  CHECK(frechet_distance(moments(Vector::Zero(2), d1), moments(Vector::Zero(2), d2)) ==
        doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(frechet_distance(moments(Vector::Zero(2), d1), moments(Vector::Zero(3), c)),
                  InputError);
  Matrix indefinite = d1;
  indefinite(1, 1) = -1.0;
  CHECK_THROWS_AS(frechet_distance(moments(Vector::Zero(2), indefinite), moments(Vector::Zero(2), d2)),
                  InputError);
}

TEST_CASE("frechet distance is symmetric, non-negative and translation-additive") {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const Matrix x = gaussian_rows(rng, 200, random_matrix(rng, 4, 4), rng.normal_vector(4));
    const Matrix y = gaussian_rows(rng, 300, random_matrix(rng, 4, 4), rng.normal_vector(4));
    const FeaturePopulation p = fit_gaussian(x);
    const FeaturePopulation q = fit_gaussian(y);
    const double pq = frechet_distance(p, q);
    const double qp = frechet_distance(q, p);
    CHECK(pq >= 0.0);
    CHECK(std::abs(pq - qp) <= 1e-9 * std::max(pq, 1.0));

    const Vector v = 3.0 * rng.normal_vector(4);
    Matrix shifted = x;
    shifted.rowwise() += v.transpose();
    const double d = frechet_distance(p, fit_gaussian(shifted));
    CHECK(d == doctest::Approx(v.squaredNorm()).epsilon(1e-8));
    CHECK(frechet_distance(p, p) <= 1e-9);
  }
}
