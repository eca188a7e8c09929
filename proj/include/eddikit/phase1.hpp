#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "eddikit/linalg.hpp"
#include "eddikit/model.hpp"
#include "eddikit/preprocess.hpp"

namespace eddikit {

/// Dissipated-energy system Q b = R over the crossings gamma_1..gamma_N:
///   Q(i, j) = int_{gamma_0}^{gamma_i} v B_j(x, v) dt
///   R(i)    = T(gamma_0) - T(gamma_i)
struct Phase1System {
  Eigen::MatrixXd Q;
  Eigen::VectorXd R;
  std::vector<BasisTerm> library;
  double condition_estimate = 0.0;  // filled by the solve
};

Phase1System assemble_phase1(const Trajectory& traj, const CrossingSet& crossings,
                             std::span<const BasisTerm> library);

struct Phase1Options {
  // Coefficients below this magnitude are zeroed and the rest refit once.
  // Off by default.
  std::optional<double> magnitude_threshold;
};

struct DampingFit {
  std::vector<WeightedTerm> terms;
  double residual_norm = 0.0;
  double relative_residual = 0.0;  // ||Q b - R|| / ||R||
  double condition_estimate = 0.0;
  bool ill_conditioned = false;
  bool underdetermined = false;  // fewer equations than candidates
  // Dissipated energy since gamma_0 at each gamma_i: measured (R) and model (Q b).
  std::vector<double> gammas;
  std::vector<double> dissipated_data;
  std::vector<double> dissipated_model;
};

DampingFit identify_damping(const Trajectory& traj, const CrossingSet& crossings,
                            std::span<const BasisTerm> library, const Phase1Options& options = {});

}  // namespace eddikit
