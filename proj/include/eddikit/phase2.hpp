#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "eddikit/model.hpp"
#include "eddikit/signal.hpp"

namespace eddikit {

// Conservative force from the force balance K = F - B - m a, per sample.
struct ConservativeForceSeries {
  TimeAxis axis;
  std::vector<double> K;  // N
  std::vector<double> x;  // m
};

ConservativeForceSeries conservative_force(const Trajectory& traj,
                                           std::span<const WeightedTerm> damping);

struct Phase2System {
  Eigen::MatrixXd Theta;  // rows: samples, columns: library terms at x
  Eigen::VectorXd target;
  std::vector<BasisTerm> library;
};

// Rows start at first_sample (earlier samples are excluded).
Phase2System assemble_phase2(const ConservativeForceSeries& series,
                             std::span<const BasisTerm> library, std::size_t first_sample = 0);

struct RestoringForceSample {
  double x, K_data, K_model;
};

struct StiffnessFit {
  std::vector<WeightedTerm> terms;
  double residual_norm = 0.0;
  double relative_rms = 0.0;  // RMS(K_model - K_data) / RMS(K_data)
  double condition_estimate = 0.0;
  bool ill_conditioned = false;
  std::vector<RestoringForceSample> restoring_force;  // one per regression row
};

StiffnessFit identify_stiffness(const ConservativeForceSeries& series,
                                std::span<const BasisTerm> library, std::size_t first_sample = 0);

// Index of the first sample at or after time t (clamped to the grid).
std::size_t first_sample_at(const TimeAxis& axis, double t) noexcept;

ModelSpec compose_model(double mass, std::vector<WeightedTerm> damping,
                        std::vector<WeightedTerm> stiffness);

struct ClearanceSearch {
  double best_clearance = 0.0;
  std::vector<double> grid;
  std::vector<double> relative_rms;  // Phase-2 misfit for each grid value
};

/// Grid search of the clearance minimising the Phase-2 misfit, for records
/// where the gap is not known. Every gated term in the library takes the
/// trial clearance; damping is held fixed.
ClearanceSearch search_clearance(const ConservativeForceSeries& series,
                                 std::span<const BasisTerm> library, double e_min, double e_max,
                                 std::size_t points, std::size_t first_sample = 0);

}  // namespace eddikit
