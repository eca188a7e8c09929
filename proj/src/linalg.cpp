#include "eddikit/linalg.hpp"

#include <cmath>

#include "eddikit/error.hpp"

namespace eddikit {

LsSolution solve_linear_ls(const Eigen::MatrixXd& A, const Eigen::VectorXd& y) {
  if (A.rows() < 1 || A.cols() < 1) fail(ErrorKind::InvalidArgument, "empty least-squares system");
  if (A.rows() != y.size()) fail(ErrorKind::InvalidArgument, "row count differs from target length");
  if (!A.allFinite() || !y.allFinite()) {
    fail(ErrorKind::NonFiniteInput, "least-squares operands contain NaN or Inf");
  }

  Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < scale.size(); ++j) {
    if (scale(j) == 0.0) scale(j) = 1.0;
  }
  const Eigen::MatrixXd scaled = A * scale.cwiseInverse().asDiagonal();

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(scaled);
  LsSolution out;
  out.rank = cod.rank();
  Eigen::VectorXd c = cod.solve(y);
  out.residual_norm = (y - scaled * c).norm();
  out.coefficients = c.cwiseQuotient(scale);

  if (out.rank > 0) {
    // matrixQTZ holds R on its upper triangle; with column pivoting the
    // diagonal magnitudes are non-increasing.
    const auto& qtz = cod.matrixQTZ();
    const double first = std::abs(qtz(0, 0));
    const double last = std::abs(qtz(out.rank - 1, out.rank - 1));
    out.condition_estimate = last > 0.0 ? first / last : INFINITY;
    if (out.rank < A.cols()) out.condition_estimate = INFINITY;
  } else {
    out.condition_estimate = INFINITY;
  }
  return out;
}

}  // namespace eddikit
