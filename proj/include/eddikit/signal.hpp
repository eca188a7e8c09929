#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace eddikit {

// Uniform time grid: t_k = t0 + k * dt for k in [0, size).
struct TimeAxis {
  double t0 = 0.0;
  double dt = 1.0;
  std::size_t size = 0;

  double at(std::size_t k) const noexcept { return t0 + static_cast<double>(k) * dt; }
  double back() const noexcept { return at(size - 1); }
  double rate() const noexcept { return 1.0 / dt; }
  bool same_grid(const TimeAxis& other) const noexcept;
};

// Uniformly sampled scalar series. Invariants: dt > 0, at least two samples,
// every value finite. Checked on construction.
class SampledSignal {
 public:
  SampledSignal(double t0, double dt, std::vector<double> values);
  SampledSignal(const TimeAxis& axis, std::vector<double> values);

  const TimeAxis& axis() const noexcept { return axis_; }
  double t0() const noexcept { return axis_.t0; }
  double dt() const noexcept { return axis_.dt; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  double time(std::size_t k) const noexcept { return axis_.at(k); }

  // Linear interpolation; zero outside [t0, t_last].
  double interpolate(double t) const noexcept;

 private:
  TimeAxis axis_;
  std::vector<double> values_;
};

// Aligned displacement, velocity, acceleration and external force channels.
// Units: m, m/s, m/s^2, N; mass in kg.
class Trajectory {
 public:
  Trajectory(TimeAxis axis, std::vector<double> x, std::vector<double> v,
             std::vector<double> a, std::vector<double> f_ext, double mass);

  const TimeAxis& axis() const noexcept { return axis_; }
  std::size_t size() const noexcept { return axis_.size; }
  double mass() const noexcept { return mass_; }

  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> v() const noexcept { return v_; }
  std::span<const double> a() const noexcept { return a_; }
  std::span<const double> f_ext() const noexcept { return f_; }
  bool has_acceleration() const noexcept { return !a_.empty(); }
  bool is_forced() const noexcept;

  // Momentum rate p' = m * a.
  std::vector<double> momentum_rate() const;

  SampledSignal x_signal() const { return {axis_, x_}; }
  SampledSignal v_signal() const { return {axis_, v_}; }

  Trajectory with_mass(double mass) const;

 private:
  TimeAxis axis_;
  std::vector<double> x_, v_, a_, f_;
  double mass_;
};

}  // namespace eddikit
