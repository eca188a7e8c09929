#include "eddikit/sindy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "eddikit/error.hpp"
#include "eddikit/linalg.hpp"
#include "eddikit/parallel.hpp"

namespace eddikit {

std::vector<WeightedTerm> SindyFit::damping() const {
  std::vector<WeightedTerm> out;
  for (const auto& w : terms) {
    if (w.term.involves_velocity()) out.push_back(w);
  }
  return out;
}

std::vector<WeightedTerm> SindyFit::stiffness() const {
  std::vector<WeightedTerm> out;
  for (const auto& w : terms) {
    if (!w.term.involves_velocity()) out.push_back(w);
  }
  return out;
}

SindyFit sindy_identify(const Trajectory& traj, std::span<const BasisTerm> library,
                        const StlsConfig& cfg, std::size_t first_sample) {
  if (library.empty()) fail(ErrorKind::EmptyLibrary, "candidate library is empty");
  if (!traj.has_acceleration()) fail(ErrorKind::MissingAcceleration, "regression target needs acceleration");
  if (!(cfg.lambda >= 0.0)) fail(ErrorKind::InvalidArgument, "lambda must be non-negative");
  if (cfg.max_iters < 1) fail(ErrorKind::InvalidArgument, "max_iters must be positive");
  require_distinct(library, "candidate library");
  if (first_sample >= traj.size()) fail(ErrorKind::InvalidArgument, "no samples left for the regression");

  const std::size_t n = traj.size() - first_sample;
  const auto rows = static_cast<Eigen::Index>(n);
  const std::span<const double> x = traj.x().subspan(first_sample);
  const std::span<const double> v = traj.v().subspan(first_sample);
  const auto a = traj.a().subspan(first_sample);
  const auto f = traj.f_ext().subspan(first_sample);

  Eigen::MatrixXd theta(rows, static_cast<Eigen::Index>(library.size()));
  parallel_for(library.size(), [&](std::size_t j) {
    auto col = theta.col(static_cast<Eigen::Index>(j));
    eval_basis_column(library[j], x, v, std::span<double>(col.data(), n));
  });
  Eigen::VectorXd y(rows);
  for (std::size_t k = 0; k < n; ++k) y(static_cast<Eigen::Index>(k)) = f[k] - traj.mass() * a[k];

  const std::size_t m = library.size();
  std::vector<bool> active(m, true);
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  SindyFit fit;
  double condition = 0.0;
  for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
    std::vector<Eigen::Index> cols;
    for (std::size_t j = 0; j < m; ++j) {
      if (active[j]) cols.push_back(static_cast<Eigen::Index>(j));
    }
    if (cols.empty()) {
      fail(ErrorKind::AllTermsEliminated,
           "threshold " + std::to_string(cfg.lambda) + " removed every candidate");
    }
    Eigen::MatrixXd sub(rows, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = theta.col(cols[c]);
    const LsSolution sol = solve_linear_ls(sub, y);
    condition = sol.condition_estimate;
    coef.setZero();
    for (std::size_t c = 0; c < cols.size(); ++c) coef(cols[c]) = sol.coefficients(static_cast<Eigen::Index>(c));
    fit.iterations = iter + 1;

    bool changed = false;
    for (std::size_t j = 0; j < m; ++j) {
      if (active[j] && std::abs(coef(static_cast<Eigen::Index>(j))) < cfg.lambda) {
        active[j] = false;
        changed = true;
      }
    }
    if (!changed) break;
    if (iter + 1 == cfg.max_iters) {
      // Out of passes: report the last fit with the newly dropped terms zeroed.
      for (std::size_t j = 0; j < m; ++j) {
        if (!active[j]) coef(static_cast<Eigen::Index>(j)) = 0.0;
      }
    }
  }
  if (std::none_of(active.begin(), active.end(), [](bool b) { return b; })) {
    fail(ErrorKind::AllTermsEliminated, "threshold " + std::to_string(cfg.lambda) + " removed every candidate");
  }

  for (std::size_t j = 0; j < m; ++j) fit.terms.push_back({library[j], coef(static_cast<Eigen::Index>(j))});
  fit.active = active;
  fit.residual_norm = (theta * coef - y).norm();
  const double y_norm = y.norm();
  fit.relative_rms = y_norm > 0.0 ? fit.residual_norm / y_norm : fit.residual_norm;
  fit.condition_estimate = condition;
  return fit;
}

}  // namespace eddikit
