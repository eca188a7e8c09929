#include <doctest.h>

#include <cmath>
#include <random>

#include "eddikit/error.hpp"
#include "eddikit/linalg.hpp"

using namespace eddikit;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd A(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) A(i, j) = n(rng);
  return A;
}

}  // namespace

TEST_CASE("identity system") {
  const Eigen::Vector3d y(1.0, 2.0, 3.0);
  const auto s = solve_linear_ls(Eigen::Matrix3d::Identity(), y);
  CHECK((s.coefficients - y).norm() < 1e-15);
  CHECK(s.residual_norm < 1e-15);
  CHECK(s.rank == 3);
  CHECK(s.condition_estimate == doctest::Approx(1.0));
}

TEST_CASE("overdetermined constant fit is the mean") {
  const Eigen::MatrixXd A = Eigen::MatrixXd::Ones(3, 1);
  const auto s = solve_linear_ls(A, Eigen::Vector3d(1.0, 2.0, 3.0));
  CHECK(s.coefficients(0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s.residual_norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("agrees with the normal equations on a well-posed problem") {
  const Eigen::MatrixXd A = random_matrix(200, 6, 7);
  const Eigen::VectorXd y = random_matrix(200, 1, 8);
  const Eigen::VectorXd ref = (A.transpose() * A).llt().solve(A.transpose() * y);
  const auto s = solve_linear_ls(A, y);
  CHECK((s.coefficients - ref).norm() < 1e-10 * ref.norm());
  CHECK(s.residual_norm == doctest::Approx((y - A * ref).norm()).epsilon(1e-10));
  // Residual is orthogonal to the column space.
  CHECK((A.transpose() * (y - A * s.coefficients)).norm() < 1e-10 * y.norm());
  CHECK(s.condition_estimate < kIllConditioned);
}

TEST_CASE("column scaling does not change the physical solution") {
  Eigen::MatrixXd A = random_matrix(100, 4, 11);
  const Eigen::VectorXd truth = Eigen::Vector4d(0.08, 2000.0, 0.2, -3.0);
  const Eigen::VectorXd y = A * truth;
  const Eigen::Vector4d w(1e-6, 1.0, 1e4, 3.0);
  const Eigen::MatrixXd B = A * w.asDiagonal();
  const auto a = solve_linear_ls(A, y);
  const auto b = solve_linear_ls(B, y);
  for (int j = 0; j < 4; ++j) {
    CHECK(a.coefficients(j) == doctest::Approx(truth(j)).epsilon(1e-12));
    CHECK(b.coefficients(j) * w(j) == doctest::Approx(truth(j)).epsilon(1e-10));
  }
  // Equilibration makes the condition estimate insensitive to column units.
  CHECK(b.condition_estimate == doctest::Approx(a.condition_estimate).epsilon(1e-6));
}

TEST_CASE("rank-deficient systems give the minimum-norm solution") {
  // Two identical unit columns: any split c0 + c1 = 4 fits; minimum norm is (2, 2).
  Eigen::MatrixXd A(3, 2);
  A << 1, 1, 1, 1, 1, 1;
  const auto s = solve_linear_ls(A, Eigen::Vector3d(4.0, 4.0, 4.0));
  CHECK(s.rank == 1);
  CHECK(s.coefficients(0) == doctest::Approx(2.0));
  CHECK(s.coefficients(1) == doctest::Approx(2.0));
  CHECK(s.condition_estimate > kIllConditioned);

  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(4, 2);
  Z.col(0).setOnes();
  const auto z = solve_linear_ls(Z, Eigen::Vector4d(1, 1, 1, 1));
  CHECK(z.coefficients(0) == doctest::Approx(1.0));
  CHECK(z.coefficients(1) == 0.0);
}

TEST_CASE("bad operands") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Ones(3, 2);
  const Eigen::VectorXd y = Eigen::VectorXd::Ones(3);
  auto kind = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;  // sentinel: nothing thrown
  };
  A(1, 1) = NAN;
  CHECK(kind([&] { solve_linear_ls(A, y); }) == ErrorKind::NonFiniteInput);
  A(1, 1) = INFINITY;
  CHECK(kind([&] { solve_linear_ls(A, y); }) == ErrorKind::NonFiniteInput);
  CHECK(kind([&] { solve_linear_ls(Eigen::MatrixXd(0, 0), Eigen::VectorXd(0)); }) == ErrorKind::InvalidArgument);
  CHECK(kind([&] { solve_linear_ls(Eigen::MatrixXd::Ones(3, 2), Eigen::VectorXd::Ones(4)); }) ==
        ErrorKind::InvalidArgument);
}
