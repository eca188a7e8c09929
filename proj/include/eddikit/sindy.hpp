#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eddikit/model.hpp"
#include "eddikit/signal.hpp"

namespace eddikit {

struct StlsConfig {
  // Absolute threshold on coefficients in their physical units.
  double lambda = 0.05;
  std::size_t max_iters = 20;
};

struct SindyFit {
  // One entry per library term, eliminated terms carry exactly 0.
  std::vector<WeightedTerm> terms;
  std::vector<bool> active;
  std::size_t iterations = 0;
  double residual_norm = 0.0;
  double relative_rms = 0.0;
  double condition_estimate = 0.0;

  // Split into damping (velocity) and stiffness (velocity-free) terms.
  std::vector<WeightedTerm> damping() const;
  std::vector<WeightedTerm> stiffness() const;
};

/// Sequential thresholded least squares on the force target
/// f_ext - m a = sum_j c_j Theta_j(x, v). Each pass fits the active columns and
/// drops those with |c_j| < lambda, stopping when the active set no longer
/// changes or after max_iters passes. Throws AllTermsEliminated when nothing
/// survives.
SindyFit sindy_identify(const Trajectory& traj, std::span<const BasisTerm> library,
                        const StlsConfig& cfg = {}, std::size_t first_sample = 0);

}  // namespace eddikit
