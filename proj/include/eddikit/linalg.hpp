#pragma once

#include <Eigen/Dense>

namespace eddikit {

struct LsSolution {
  Eigen::VectorXd coefficients;
  double residual_norm = 0.0;
  // Ratio of the largest to the smallest retained pivot of the
  // column-equilibrated, column-pivoted QR factor.
  double condition_estimate = 1.0;
  Eigen::Index rank = 0;
};

// Condition estimates above this are reported as ill-conditioned.
inline constexpr double kIllConditioned = 1e10;

/// Least-squares solution of A c ~= y by complete orthogonal decomposition
/// (column-pivoted Householder QR). Columns are scaled to unit 2-norm first
/// and the coefficients unscaled afterwards; when A is rank deficient the
/// result is the minimum-norm minimizer in the scaled coordinates. All-zero
/// columns get a zero coefficient.
///
/// Throws NonFiniteInput on NaN/Inf entries and InvalidArgument on empty or
/// mismatched operands.
LsSolution solve_linear_ls(const Eigen::MatrixXd& A, const Eigen::VectorXd& y);

}  // namespace eddikit
