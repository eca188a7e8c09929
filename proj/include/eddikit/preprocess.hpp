#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "eddikit/model.hpp"
#include "eddikit/signal.hpp"

namespace eddikit {

/// Instants where the displacement changes sign, with the interpolated
/// velocity and the kinetic energy 0.5 m v^2 at each one. At a zero of x the
/// potential energy vanishes, so T(gamma_i) is the mechanical energy there.
struct CrossingSet {
  std::vector<double> gammas;       // s, strictly increasing
  std::vector<double> v_at_gamma;   // m/s
  std::vector<double> T_at_gamma;   // J
  std::vector<double> positions;    // fractional sample index of each gamma
  double mass = 0.0;

  std::size_t size() const noexcept { return gammas.size(); }
  // Keeps crossings [first, last).
  CrossingSet slice(std::size_t first, std::size_t last) const;
};

/// Linear interpolation of x between samples of opposite sign. A sample that
/// is exactly zero counts only when its nonzero neighbours have opposite signs
/// (touching zero is not a crossing); a zero first sample counts when the
/// signal leaves zero. Throws NoCrossings when fewer than two are found.
CrossingSet find_zero_crossings(const SampledSignal& x, const SampledSignal& v, double mass);

struct CrossingOptions {
  // Under forcing, gamma_0 is the first crossing after |f_ext| last exceeds
  // this fraction of max |f_ext|.
  double force_threshold_ratio = 1e-3;
  // Crossings stop at the first one whose kinetic energy falls below this
  // fraction of T(gamma_0).
  double energy_floor_ratio = 1e-6;
  std::optional<double> end_time;
};

// Applies the gamma_0 and truncation rules. Throws InsufficientCrossings when
// fewer than two remain.
CrossingSet select_crossings(const CrossingSet& all, std::span<const double> f_ext,
                             const TimeAxis& axis, const CrossingOptions& options = {});

// Convenience: find + select on a trajectory.
CrossingSet crossings_for_identification(const Trajectory& traj,
                                         const CrossingOptions& options = {});

// Cumulative trapezoidal integral, first value 0.
SampledSignal cumulative_integral(const SampledSignal& y);
std::vector<double> cumulative_trapezoid(std::span<const double> y, double dt);

// Value of a per-sample series at a fractional sample index.
double value_at_position(std::span<const double> series, double position) noexcept;

struct FilterSettings {
  int order = 3;
  double cutoff_hz = 1.5;
};

/// Velocity and displacement from an acceleration record: v = hp(int a) and
/// x = hp(int v), each high-pass zero-phase. External force is zero-filled.
Trajectory reconstruct_states(const SampledSignal& a, double mass, const FilterSettings& filter = {});

struct EnergyTrace {
  TimeAxis axis;
  std::vector<double> kinetic;      // T(t), J
  std::vector<double> dissipated;   // D(t), J
  std::vector<double> mechanical;   // E(t), J, with E(gamma_0) = T(gamma_0)
};

/// D(t) = int v B(x, v) dt for the given damping terms; E(t) = T(gamma_0) -
/// (D(t) - D(gamma_0)), gamma_0 being the first crossing in `crossings`.
EnergyTrace dissipated_energy_of_model(const Trajectory& traj,
                                       std::span<const WeightedTerm> damping,
                                       const CrossingSet& crossings);

}  // namespace eddikit
