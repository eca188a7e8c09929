#pragma once

#include <cstddef>
#include <variant>

#include "eddikit/model.hpp"
#include "eddikit/signal.hpp"

namespace eddikit {

// Half-sine force pulse of the given peak and base width, centred at t_center.
struct HalfSinePulse {
  double amplitude = 0.0;  // N
  double t_center = 0.0;   // s
  double width = 0.0;      // s

  double operator()(double t) const noexcept;
  // Integral of the pulse: amplitude * width * 2 / pi.
  double impulse() const noexcept;
};

using Forcing = std::variant<std::monostate, SampledSignal, HalfSinePulse>;

double forcing_at(const Forcing& forcing, double t) noexcept;

struct InitialCondition {
  double x0 = 0.0;  // m
  double v0 = 0.0;  // m/s
};

struct SimConfig {
  double t_start = 0.0;
  double t_end = 10.0;
  double rel_tol = 1e-12;
  // Per state component, in state units.
  double abs_tol = 1e-16;
  // Rate of the returned uniform grid (Hz). The integrator step is capped at
  // 1 / (4 * output_rate).
  double output_rate = 20000.0;
  InitialCondition ic;
  Forcing forcing;

  // Throws InvalidArgument when the span, tolerances or rate are out of range.
  void validate() const;
  std::size_t output_samples() const;
};

struct SimStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
  double min_step = 0.0;
  double max_step = 0.0;
};

/// Integrates m x'' + B(x, x') + K(x) = F(t) with an embedded Dormand-Prince
/// 5(4) pair and PI step control, then samples x and v on the output grid from
/// the pair's continuous extension. The acceleration channel is rebuilt from
/// the equation of motion at each output sample.
///
/// Throws StepSizeUnderflow if the step falls below 16 ulp of the time span
/// and NonFiniteState if the state stops being finite.
Trajectory simulate(const ModelSpec& spec, const SimConfig& cfg, SimStats* stats = nullptr);

// Samples a half-sine pulse on the given grid.
SampledSignal impulse_force(double amplitude, double t_center, double width, const TimeAxis& grid);

}  // namespace eddikit
