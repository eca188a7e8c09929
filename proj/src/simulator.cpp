#include "eddikit/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "eddikit/error.hpp"

namespace eddikit {

namespace {

using State = std::array<double, 2>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
// Difference between the 5th and embedded 4th order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (4th order).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

// PI controller constants.
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kFacMinInv = 5.0;   // step may shrink by at most 5x
constexpr double kFacMaxInv = 0.1;   // and grow by at most 10x

class Oscillator {
 public:
  Oscillator(const ModelSpec& spec, const Forcing& forcing) : spec_(spec), forcing_(forcing) {}

  State operator()(double t, const State& y) const noexcept {
    ++evals;
    return {y[1], acceleration(t, y[0], y[1])};
  }

  double acceleration(double t, double x, double v) const noexcept {
    return (forcing_at(forcing_, t) - spec_.damping_force(x, v) - spec_.stiffness_force(x)) /
           spec_.mass();
  }

  mutable std::size_t evals = 0;

 private:
  const ModelSpec& spec_;
  const Forcing& forcing_;
};

bool finite(const State& y) noexcept { return std::isfinite(y[0]) && std::isfinite(y[1]); }

}  // namespace

double HalfSinePulse::operator()(double t) const noexcept {
  const double s = (t - t_center) / width;
  if (s <= -0.5 || s >= 0.5) return 0.0;
  return amplitude * std::cos(std::numbers::pi * s);
}

double HalfSinePulse::impulse() const noexcept { return amplitude * width * 2.0 / std::numbers::pi; }

double forcing_at(const Forcing& forcing, double t) noexcept {
  if (const auto* signal = std::get_if<SampledSignal>(&forcing)) return signal->interpolate(t);
  if (const auto* pulse = std::get_if<HalfSinePulse>(&forcing)) return (*pulse)(t);
  return 0.0;
}

void SimConfig::validate() const {
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start)) {
    fail(ErrorKind::InvalidArgument, "simulation span needs t_end > t_start");
  }
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) fail(ErrorKind::InvalidArgument, "rel_tol must lie in (0, 1)");
  if (!(abs_tol > 0.0 && abs_tol < 1.0)) fail(ErrorKind::InvalidArgument, "abs_tol must lie in (0, 1)");
  if (!(output_rate > 0.0) || !std::isfinite(output_rate)) {
    fail(ErrorKind::InvalidArgument, "output_rate must be positive");
  }
  if (!std::isfinite(ic.x0) || !std::isfinite(ic.v0)) {
    fail(ErrorKind::InvalidArgument, "initial condition must be finite");
  }
  if (const auto* pulse = std::get_if<HalfSinePulse>(&forcing)) {
    if (!(pulse->amplitude > 0.0) || !(pulse->width > 0.0)) {
      fail(ErrorKind::InvalidArgument, "impulse amplitude and width must be positive");
    }
  }
  if (output_samples() < 2) fail(ErrorKind::InvalidArgument, "span shorter than one output sample");
}

std::size_t SimConfig::output_samples() const {
  const double count = (t_end - t_start) * output_rate;
  return static_cast<std::size_t>(std::floor(count + 1e-9)) + 1;
}

Trajectory simulate(const ModelSpec& spec, const SimConfig& cfg, SimStats* stats) {
  cfg.validate();
  const Oscillator rhs(spec, cfg.forcing);

  const double dt_out = 1.0 / cfg.output_rate;
  const std::size_t n_out = cfg.output_samples();
  const TimeAxis axis{cfg.t_start, dt_out, n_out};
  const double t_final = axis.back();
  const double h_max = 1.0 / (4.0 * cfg.output_rate);
  const double h_min =
      16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(cfg.t_start), std::abs(t_final));

  std::vector<double> xs(n_out), vs(n_out), as(n_out), fs(n_out);
  auto emit = [&](std::size_t k, double x, double v) {
    const double t = axis.at(k);
    xs[k] = x;
    vs[k] = v;
    fs[k] = forcing_at(cfg.forcing, t);
    as[k] = rhs.acceleration(t, x, v);
  };

  double t = cfg.t_start;
  State y{cfg.ic.x0, cfg.ic.v0};
  emit(0, y[0], y[1]);
  std::size_t next_out = 1;

  State k1 = rhs(t, y);
  auto scale = [&](std::size_t i, const State& y0, const State& y1) {
    return cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
  };

  // Initial step from the size of the state and its derivative.
  double h;
  {
    const double d0 = std::max(std::abs(y[0]) / scale(0, y, y), std::abs(y[1]) / scale(1, y, y));
    const double d1 = std::max(std::abs(k1[0]) / scale(0, y, y), std::abs(k1[1]) / scale(1, y, y));
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::clamp(h, 1e3 * h_min, h_max);
  }

  SimStats st;
  st.min_step = INFINITY;
  double fac_old = 1e-4;
  bool last_rejected = false;

  while (next_out < n_out) {
    if (h < h_min) {
      fail(ErrorKind::StepSizeUnderflow, "step size " + std::to_string(h) + " s at t = " +
                                             std::to_string(t) + " s");
    }
    h = std::min(h, h_max);
    if (t + h > t_final) h = t_final - t;
    const bool final_step = (t + h >= t_final);

    auto stage = [&](double c, std::initializer_list<std::pair<double, const State*>> terms) {
      State yy = y;
      for (auto [a, k] : terms) {
        yy[0] += h * a * (*k)[0];
        yy[1] += h * a * (*k)[1];
      }
      return rhs(t + c * h, yy);
    };
    const State k2 = stage(c2, {{a21, &k1}});
    const State k3 = stage(c3, {{a31, &k1}, {a32, &k2}});
    const State k4 = stage(c4, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    const State k5 = stage(c5, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    const State k6 = stage(1.0, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    State y_new;
    for (int i = 0; i < 2; ++i) {
      y_new[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    }
    const double t_new = final_step ? t_final : t + h;
    const State k7 = rhs(t_new, y_new);

    double err = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      const double ei =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      err = std::max(err, std::abs(ei) / scale(i, y, y_new));
    }

    if (!finite(y_new) || !std::isfinite(err)) {
      ++st.rejected;
      h *= 0.2;
      last_rejected = true;
      if (h < h_min) fail(ErrorKind::NonFiniteState, "state left the finite range at t = " + std::to_string(t));
      continue;
    }

    const double fac11 = std::pow(err, kExpo);
    if (err <= 1.0) {
      // Dense output on (t, t_new].
      State r2, r3, r4, r5;
      for (int i = 0; i < 2; ++i) {
        r2[i] = y_new[i] - y[i];
        r3[i] = h * k1[i] - r2[i];
        r4[i] = r2[i] - h * k7[i] - r3[i];
        r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      while (next_out < n_out && (axis.at(next_out) <= t_new || final_step)) {
        const double theta = final_step && next_out + 1 == n_out ? 1.0 : (axis.at(next_out) - t) / h;
        const double theta1 = 1.0 - theta;
        State yi;
        for (int i = 0; i < 2; ++i) {
          yi[i] = y[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
        }
        emit(next_out, yi[0], yi[1]);
        ++next_out;
      }

      ++st.accepted;
      st.min_step = std::min(st.min_step, h);
      st.max_step = std::max(st.max_step, h);
      t = t_new;
      y = y_new;
      k1 = k7;

      double fac = fac11 / std::pow(fac_old, kBeta);
      fac = std::max(kFacMaxInv, std::min(kFacMinInv, fac / kSafety));
      fac_old = std::max(err, 1e-4);
      double h_new = h / fac;
      if (last_rejected) h_new = std::min(h_new, h);
      last_rejected = false;
      h = h_new;
    } else {
      ++st.rejected;
      h /= std::min(kFacMinInv, fac11 / kSafety);
      last_rejected = true;
    }
  }

  st.rhs_evals = rhs.evals;
  if (stats) *stats = st;
  return Trajectory(axis, std::move(xs), std::move(vs), std::move(as), std::move(fs), spec.mass());
}

SampledSignal impulse_force(double amplitude, double t_center, double width, const TimeAxis& grid) {
  if (!(amplitude > 0.0) || !(width > 0.0)) {
    fail(ErrorKind::InvalidArgument, "impulse amplitude and width must be positive");
  }
  const HalfSinePulse pulse{amplitude, t_center, width};
  std::vector<double> values(grid.size);
  for (std::size_t k = 0; k < grid.size; ++k) values[k] = pulse(grid.at(k));
  return SampledSignal(grid, std::move(values));
}

}  // namespace eddikit
