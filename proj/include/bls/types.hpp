#pragma once

#include <Eigen/Dense>

namespace bls {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace bls
