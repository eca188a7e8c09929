#include "eddikit/phase2.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eddikit/error.hpp"
#include "eddikit/linalg.hpp"
#include "eddikit/parallel.hpp"

namespace eddikit {

ConservativeForceSeries conservative_force(const Trajectory& traj,
                                           std::span<const WeightedTerm> damping) {
  if (!traj.has_acceleration()) {
    fail(ErrorKind::MissingAcceleration, "force balance needs the acceleration channel");
  }
  const std::size_t n = traj.size();
  const auto x = traj.x();
  const auto v = traj.v();
  const auto a = traj.a();
  const auto f = traj.f_ext();
  const double m = traj.mass();

  ConservativeForceSeries out;
  out.axis = traj.axis();
  out.x.assign(x.begin(), x.end());
  out.K.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.K[k] = f[k] - m * a[k];
  std::vector<double> column(n);
  for (const auto& w : damping) {
    eval_basis_column(w.term, x, v, column);
    for (std::size_t k = 0; k < n; ++k) out.K[k] -= w.coefficient * column[k];
  }
  return out;
}

Phase2System assemble_phase2(const ConservativeForceSeries& series,
                             std::span<const BasisTerm> library, std::size_t first_sample) {
  if (library.empty()) fail(ErrorKind::EmptyLibrary, "stiffness library is empty");
  for (const auto& term : library) {
    if (term.involves_velocity()) {
      fail(ErrorKind::InvalidArgument, "stiffness candidate " + term.describe() + " involves velocity");
    }
  }
  require_distinct(library, "stiffness library");
  if (first_sample >= series.x.size()) fail(ErrorKind::InvalidArgument, "no samples left for the regression");

  const std::span<const double> x(series.x.data() + first_sample, series.x.size() - first_sample);
  const auto rows = static_cast<Eigen::Index>(x.size());
  Phase2System sys;
  sys.library.assign(library.begin(), library.end());
  sys.Theta.resize(rows, static_cast<Eigen::Index>(library.size()));
  sys.target = Eigen::Map<const Eigen::VectorXd>(series.K.data() + first_sample, rows);
  parallel_for(library.size(), [&](std::size_t j) {
    auto col = sys.Theta.col(static_cast<Eigen::Index>(j));
    eval_basis_column(library[j], x, x, std::span<double>(col.data(), x.size()));
  });
  return sys;
}

StiffnessFit identify_stiffness(const ConservativeForceSeries& series,
                                std::span<const BasisTerm> library, std::size_t first_sample) {
  const Phase2System sys = assemble_phase2(series, library, first_sample);
  const LsSolution sol = solve_linear_ls(sys.Theta, sys.target);

  StiffnessFit fit;
  for (std::size_t j = 0; j < library.size(); ++j) {
    fit.terms.push_back({library[j], sol.coefficients(static_cast<Eigen::Index>(j))});
  }
  const Eigen::VectorXd model = sys.Theta * sol.coefficients;
  fit.residual_norm = (model - sys.target).norm();
  const double data_norm = sys.target.norm();
  fit.relative_rms = data_norm > 0.0 ? fit.residual_norm / data_norm : fit.residual_norm;
  fit.condition_estimate = sol.condition_estimate;
  fit.ill_conditioned = !(sol.condition_estimate < kIllConditioned);
  fit.restoring_force.reserve(static_cast<std::size_t>(model.size()));
  for (Eigen::Index k = 0; k < model.size(); ++k) {
    fit.restoring_force.push_back(
        {series.x[first_sample + static_cast<std::size_t>(k)], sys.target(k), model(k)});
  }
  return fit;
}

std::size_t first_sample_at(const TimeAxis& axis, double t) noexcept {
  if (t <= axis.t0) return 0;
  const double s = std::ceil((t - axis.t0) / axis.dt - 1e-9);
  return std::min(static_cast<std::size_t>(s), axis.size - 1);
}

ModelSpec compose_model(double mass, std::vector<WeightedTerm> damping,
                        std::vector<WeightedTerm> stiffness) {
  return ModelSpec(mass, std::move(damping), std::move(stiffness));
}

ClearanceSearch search_clearance(const ConservativeForceSeries& series,
                                 std::span<const BasisTerm> library, double e_min, double e_max,
                                 std::size_t points, std::size_t first_sample) {
  if (!(e_min > 0.0) || !(e_max > e_min) || points < 2) {
    fail(ErrorKind::InvalidArgument, "clearance search needs 0 < e_min < e_max and two or more points");
  }
  ClearanceSearch out;
  out.grid.resize(points);
  out.relative_rms.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    out.grid[i] = e_min + (e_max - e_min) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  for (std::size_t i = 0; i < points; ++i) {
    std::vector<BasisTerm> trial;
    for (const auto& term : library) trial.push_back(term.with_clearance(out.grid[i]));
    out.relative_rms[i] = identify_stiffness(series, trial, first_sample).relative_rms;
  }
  const auto best = std::min_element(out.relative_rms.begin(), out.relative_rms.end());
  out.best_clearance = out.grid[static_cast<std::size_t>(best - out.relative_rms.begin())];
  return out;
}

}  // namespace eddikit
