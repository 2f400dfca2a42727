#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include <Eigen/Eigenvalues>

#include "bls/error.hpp"
#include "bls/linalg.hpp"
#include "test_util.hpp"

using namespace bls;
using bls::testing::random_matrix;
using bls::testing::random_orthogonal;

namespace {

// Denman-Beavers iteration for the principal square root of a matrix with
// positive real spectrum. Shares no code with the eigen-route under test.
Matrix db_sqrt(const Matrix& a) {
  Matrix y = a;
  Matrix z = Matrix::Identity(a.rows(), a.cols());
  for (int k = 0; k < 200; ++k) {
    const Matrix y_next = 0.5 * (y + z.inverse());
    const Matrix z_next = 0.5 * (z + y.inverse());
    const double change = (y_next - y).norm();
    y = y_next;
    z = z_next;
    if (change <= 1e-15 * y.norm()) break;
  }
  return y;
}

Matrix random_spd(Rng& rng, Eigen::Index n) {
  const Matrix b = random_matrix(rng, n, n);
  return b * b.transpose() + 0.1 * Matrix::Identity(n, n);
}

void check_invariants(const Matrix& j, const SingularSystem& s) {
  const double n = static_cast<double>(j.rows());
  CHECK(orthogonality_residual(s.u) <= 1e-10 * n);
  CHECK(orthogonality_residual(s.v) <= 1e-10 * n);
  CHECK(reconstruction_error(j, s) <= 1e-10 * std::max(j.norm(), 1e-300));
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    CHECK(s.sigma[i] >= 0.0);
    if (i > 0) CHECK(s.sigma[i - 1] >= s.sigma[i]);
  }
}

}  // namespace

TEST_CASE("svd of trivial matrices") {
  const SingularSystem id = svd(Matrix::Identity(2, 2));
  CHECK(id.sigma[0] == doctest::Approx(1.0));
  CHECK(id.sigma[1] == doctest::Approx(1.0));
  CHECK((id.u * id.sigma.asDiagonal() * id.v.transpose() - Matrix::Identity(2, 2)).norm() <= 1e-14);

  Matrix d{{3.0, 0.0}, {0.0, 1.0}};
  const SingularSystem s = svd(d);
  CHECK(s.sigma[0] == doctest::Approx(3.0));
  CHECK(s.sigma[1] == doctest::Approx(1.0));

  // Ascending diagonal gets reordered.
  Matrix asc{{1.0, 0.0}, {0.0, 3.0}};
  const SingularSystem r = svd(asc);
  CHECK(r.sigma[0] == doctest::Approx(3.0));
  CHECK(std::abs(r.u(1, 0)) == doctest::Approx(1.0));
}

TEST_CASE("svd sign rule: largest entry of each left vector is positive") {
  Matrix neg{{-2.0, 0.0}, {0.0, -1.0}};
  const SingularSystem s = svd(neg);
  CHECK(s.u(0, 0) == doctest::Approx(1.0));
  CHECK(s.u(1, 1) == doctest::Approx(1.0));
  CHECK(s.v(0, 0) == doctest::Approx(-1.0));
  check_invariants(neg, s);

  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const Matrix j = random_matrix(rng, 7, 7);
    const SingularSystem sys = svd(j);
    for (Eigen::Index c = 0; c < 7; ++c) {
      Eigen::Index arg = 0;
      sys.u.col(c).cwiseAbs().maxCoeff(&arg);
      CHECK(sys.u(arg, c) > 0.0);
    }
  }
}

TEST_CASE("svd invariants over 1000 random matrices") {
  Rng rng(1000);
  for (int t = 0; t < 1000; ++t) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.next_u64() % 16);
    const Matrix j = random_matrix(rng, n, n);
    check_invariants(j, svd(j));
  }
}

TEST_CASE("singular values agree with eigenvalues of J^T J") {
  Rng rng(77);
  for (int t = 0; t < 30; ++t) {
    const Matrix j = random_matrix(rng, 9, 9);
    const SingularSystem s = svd(j);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(j.transpose() * j);
    // Eigen sorts ascending.
    for (Eigen::Index i = 0; i < 9; ++i)
      CHECK(s.sigma[i] * s.sigma[i] ==
            doctest::Approx(eig.eigenvalues()[8 - i]).epsilon(1e-9).scale(j.squaredNorm()));
  }
}

TEST_CASE("svd of rank-deficient and prescribed-spectrum matrices") {
  Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index n = 6;
    Vector sig(n);
    sig << 4.0, 2.0, 2.0, 0.5, 0.0, 0.0;
    const Matrix q = random_orthogonal(rng, n);
    const Matrix p = random_orthogonal(rng, n);
    const Matrix j = q * sig.asDiagonal() * p.transpose();
    const SingularSystem s = svd(j);
    check_invariants(j, s);
    for (Eigen::Index i = 0; i < n; ++i) CHECK(s.sigma[i] == doctest::Approx(sig[i]).scale(1.0));
  }
  const SingularSystem zero = svd(Matrix::Zero(3, 3));
  CHECK(zero.sigma.isZero());
  CHECK(orthogonality_residual(zero.u) <= 1e-14);
  CHECK(orthogonality_residual(zero.v) <= 1e-14);
}

TEST_CASE("svd is byte-for-byte deterministic") {
  Rng rng(5);
  const Matrix j = random_matrix(rng, 16, 16);
  const SingularSystem a = svd(j);
  const SingularSystem b = svd(j);
  CHECK(std::memcmp(a.u.data(), b.u.data(), sizeof(double) * a.u.size()) == 0);
  CHECK(std::memcmp(a.v.data(), b.v.data(), sizeof(double) * a.v.size()) == 0);
  CHECK(std::memcmp(a.sigma.data(), b.sigma.data(), sizeof(double) * a.sigma.size()) == 0);
}

TEST_CASE("svd input errors") {
  Matrix bad = Matrix::Identity(3, 3);
  bad(1, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(svd(bad), InputError);
  bad(1, 2) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(svd(bad), InputError);
  CHECK_THROWS_AS(svd(Matrix::Ones(2, 3)), InputError);
}

TEST_CASE("trace_sqrt_product on hand-checkable inputs") {
  CHECK(trace_sqrt_product(Matrix::Identity(3, 3), Matrix::Identity(3, 3)) ==
        doctest::Approx(3.0).epsilon(1e-12));
  Matrix c1 = Vector{{4.0, 1.0}}.asDiagonal();
  Matrix c2 = Vector{{1.0, 4.0}}.asDiagonal();
  CHECK(trace_sqrt_product(c1, c2) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(trace_sqrt_product(Matrix::Zero(2, 2), c2) == doctest::Approx(0.0));
}

TEST_CASE("trace_sqrt_product matches a Denman-Beavers square-root oracle") {
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.next_u64() % 7);
    const Matrix c1 = random_spd(rng, n);
    const Matrix c2 = random_spd(rng, n);
    const double oracle = db_sqrt(c1 * c2).trace();
    CHECK(trace_sqrt_product(c1, c2) == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("trace_sqrt_product is symmetric in its arguments") {
  Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    const Matrix c1 = random_spd(rng, 5);
    const Matrix c2 = random_spd(rng, 5);
    const double ab = trace_sqrt_product(c1, c2);
    const double ba = trace_sqrt_product(c2, c1);
    CHECK(std::abs(ab - ba) <= 1e-9 * std::abs(ab));
  }
}

TEST_CASE("trace_sqrt_product with a rank-deficient argument") {
  // Exact zero eigenvalues come back as roundoff, and the square root
  // lifts 1e-16 to 1e-8, so agreement is only that good here.
  Rng rng(14);
  for (int t = 0; t < 100; ++t) {
    const Matrix c1 = random_spd(rng, 5);
    const Matrix b = random_matrix(rng, 5, 2);
    const Matrix c2 = b * b.transpose();
    const double ab = trace_sqrt_product(c1, c2);
    const double ba = trace_sqrt_product(c2, c1);
    CHECK(std::abs(ab - ba) <= 1e-6 * std::abs(ab));
  }
}

TEST_CASE("trace_sqrt_product rejects asymmetric or indefinite input") {
  Matrix asym = Matrix::Identity(2, 2);
  asym(0, 1) = 1e-6;
  CHECK_THROWS_AS(trace_sqrt_product(asym, Matrix::Identity(2, 2)), InputError);
  CHECK_THROWS_AS(trace_sqrt_product(Matrix::Identity(2, 2), asym), InputError);

  Matrix indef = Vector{{1.0, -0.5}}.asDiagonal();
  CHECK_THROWS_AS(trace_sqrt_product(indef, Matrix::Identity(2, 2)), InputError);
  CHECK_THROWS_AS(trace_sqrt_product(Matrix::Identity(2, 2), Matrix::Identity(3, 3)), InputError);

  // Tiny negative eigenvalues inside the tolerance are accepted.
  Matrix almost = Vector{{1.0, -1e-12}}.asDiagonal();
  CHECK(trace_sqrt_product(almost, Matrix::Identity(2, 2)) == doctest::Approx(1.0));
}
