#include "eddikit/phase1.hpp"

#include <cmath>
#include <string>

#include "eddikit/error.hpp"
#include "eddikit/kernels.hpp"
#include "eddikit/parallel.hpp"

namespace eddikit {

Phase1System assemble_phase1(const Trajectory& traj, const CrossingSet& crossings,
                             std::span<const BasisTerm> library) {
  if (library.empty()) fail(ErrorKind::EmptyLibrary, "damping library is empty");
  for (const auto& term : library) {
    if (!term.involves_velocity()) {
      fail(ErrorKind::InvalidArgument, "damping candidate " + term.describe() + " is velocity-free");
    }
  }
  require_distinct(library, "damping library");
  if (crossings.size() < 2) {
    fail(ErrorKind::InsufficientCrossings, "need at least two crossings for one energy equation");
  }

  const std::size_t n = traj.size();
  const std::size_t rows = crossings.size() - 1;
  const auto cols = static_cast<Eigen::Index>(library.size());
  Phase1System sys;
  sys.library.assign(library.begin(), library.end());
  sys.Q.resize(static_cast<Eigen::Index>(rows), cols);
  sys.R.resize(static_cast<Eigen::Index>(rows));

  const auto x = traj.x();
  const auto v = traj.v();
  const double dt = traj.axis().dt;
  parallel_for(library.size(), [&](std::size_t j) {
    std::vector<double> column(n), integrand(n);
    eval_basis_column(library[j], x, v, column);
    kernels::multiply(v, column, integrand);
    const auto work = cumulative_trapezoid(integrand, dt);
    const double at0 = value_at_position(work, crossings.positions.front());
    for (std::size_t i = 0; i < rows; ++i) {
      sys.Q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          value_at_position(work, crossings.positions[i + 1]) - at0;
    }
  });
  const double t0 = crossings.T_at_gamma.front();
  for (std::size_t i = 0; i < rows; ++i) {
    sys.R(static_cast<Eigen::Index>(i)) = t0 - crossings.T_at_gamma[i + 1];
  }
  return sys;
}

DampingFit identify_damping(const Trajectory& traj, const CrossingSet& crossings,
                            std::span<const BasisTerm> library, const Phase1Options& options) {
  Phase1System sys = assemble_phase1(traj, crossings, library);
  LsSolution sol = solve_linear_ls(sys.Q, sys.R);
  Eigen::VectorXd b = sol.coefficients;

  if (options.magnitude_threshold) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      if (std::abs(b(j)) >= *options.magnitude_threshold) keep.push_back(j);
    }
    b.setZero();
    if (!keep.empty()) {
      Eigen::MatrixXd sub(sys.Q.rows(), static_cast<Eigen::Index>(keep.size()));
      for (std::size_t c = 0; c < keep.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = sys.Q.col(keep[c]);
      sol = solve_linear_ls(sub, sys.R);
      for (std::size_t c = 0; c < keep.size(); ++c) b(keep[c]) = sol.coefficients(static_cast<Eigen::Index>(c));
    }
  }
  sys.condition_estimate = sol.condition_estimate;

  DampingFit fit;
  for (std::size_t j = 0; j < library.size(); ++j) {
    fit.terms.push_back({library[j], b(static_cast<Eigen::Index>(j))});
  }
  const Eigen::VectorXd model = sys.Q * b;
  fit.residual_norm = (model - sys.R).norm();
  const double r_norm = sys.R.norm();
  fit.relative_residual = r_norm > 0.0 ? fit.residual_norm / r_norm : fit.residual_norm;
  fit.condition_estimate = sol.condition_estimate;
  fit.ill_conditioned = !(sol.condition_estimate < kIllConditioned);
  fit.underdetermined = sys.Q.rows() < sys.Q.cols();
  fit.gammas.assign(crossings.gammas.begin() + 1, crossings.gammas.end());
  fit.dissipated_data.assign(sys.R.data(), sys.R.data() + sys.R.size());
  fit.dissipated_model.assign(model.data(), model.data() + model.size());
  return fit;
}

}  // namespace eddikit
