#pragma once

#include "bls/types.hpp"

namespace bls {

/// J = U diag(sigma) V^T with sigma sorted non-increasing.
///
/// Columns of `u` are the Local Basis of W at the point the Jacobian was
/// taken; columns of `v` are the matching directions in Z.
struct SingularSystem {
  Matrix u;
  Vector sigma;
  Matrix v;

  Eigen::Index dim() const noexcept { return sigma.size(); }
};

/// Full SVD of a square matrix by one-sided (Hestenes) Jacobi rotations.
///
/// Deterministic: the rotation order is fixed (cyclic by rows), equal
/// singular values keep their column order, and every left singular vector
/// is oriented so that its entry of largest magnitude is positive (lowest
/// index wins ties); the matching right vector is flipped with it.
/// Columns for exactly-zero singular values are completed to an
/// orthonormal basis from the standard basis.
///
/// Throws InputError for non-square or non-finite input and NumericError
/// (carrying the sweep count) if rotations do not settle within 100 * n
/// sweeps.
SingularSystem svd(const Matrix& j);

/// Tr((C1 C2)^{1/2}) for symmetric positive semi-definite C1, C2, evaluated
/// as the sum of square roots of the eigenvalues of C1^{1/2} C2 C1^{1/2}.
///
/// Inputs must be symmetric to 1e-10 and have eigenvalues >= -1e-10 (both
/// scaled by max(1, max|C|)). Eigenvalues of the product within -1e-8 of
/// zero are clamped; anything more negative throws InputError.
double trace_sqrt_product(const Matrix& c1, const Matrix& c2);

/// ||Q^T Q - I||_F.
double orthogonality_residual(const Matrix& q);

/// ||J - U diag(sigma) V^T||_F.
double reconstruction_error(const Matrix& j, const SingularSystem& sys);

}  // namespace bls
