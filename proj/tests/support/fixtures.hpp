#pragma once
// Simulated records shared by the tests, built once per test binary.

#include "eddikit/model.hpp"
#include "eddikit/simulator.hpp"

namespace fixtures {

inline eddikit::SimConfig duffing_config() {
  eddikit::SimConfig cfg;
  cfg.t_start = 0.0;
  cfg.t_end = 10.0;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-16;
  cfg.output_rate = 20000.0;
  cfg.ic = {0.0, 1.0};
  return cfg;
}

// Clearance Duffing oscillator, ic (0, 1), 10 s at 20 kHz.
inline const eddikit::Trajectory& duffing() {
  static const eddikit::Trajectory t = eddikit::simulate(eddikit::duffing_clearance_model(), duffing_config());
  return t;
}

// Synthetic stand-in for the flexure rig: its identified damping and
// stiffness values, excited by a 37 N half-sine hammer pulse and recorded
// for 12 s at 19.2 kHz.
inline constexpr double kRigClearance = 0.00535;

inline eddikit::ModelSpec rig_model() {
  using eddikit::BasisTerm;
  const double e = kRigClearance;
  return eddikit::ModelSpec(0.088,
                            {{BasisTerm::vel_power(1), 0.056}, {BasisTerm::vel_gate_two_sided(e), 0.146}},
                            {{BasisTerm::disp_power(1), 33.7},
                             {BasisTerm::disp_power(2), 145.5},
                             {BasisTerm::disp_power(3), 1.83e5},
                             {BasisTerm::clearance_spring_two_sided(e), 195.8}});
}

inline eddikit::SimConfig rig_config() {
  eddikit::SimConfig cfg;
  cfg.t_end = 12.0;
  cfg.output_rate = 19200.0;
  cfg.forcing = eddikit::HalfSinePulse{37.0, 0.05, 0.002};
  return cfg;
}

inline const eddikit::Trajectory& rig() {
  static const eddikit::Trajectory t = eddikit::simulate(rig_model(), rig_config());
  return t;
}

}  // namespace fixtures
