#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "eddikit/signal.hpp"

namespace eddikit {

// One second-order (or first-order, with b2 = a2 = 0) section, a0 = 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  // Steady-state transposed direct-form II state for a constant input u.
  std::array<double, 2> steady_state(double u) const noexcept;
  double dc_gain() const noexcept { return (b0 + b1 + b2) / (1.0 + a1 + a2); }
};

/// Digital Butterworth high-pass as a cascade of sections, designed from the
/// analog prototype by the bilinear transform with the cutoff prewarped so the
/// -3 dB point lands exactly on cutoff_hz.
class ButterworthHighpass {
 public:
  // Throws CutoffOutOfRange unless 0 < cutoff_hz < sample_rate / 2, and
  // InvalidArgument for order < 1.
  ButterworthHighpass(int order, double cutoff_hz, double sample_rate);

  int order() const noexcept { return order_; }
  double cutoff() const noexcept { return cutoff_; }
  double sample_rate() const noexcept { return rate_; }
  const std::vector<Biquad>& sections() const noexcept { return sections_; }

  // |H(e^{jw})| at frequency f (Hz) for a single pass.
  double magnitude(double f) const noexcept;

  // Causal single pass; the state starts at the steady state for y[0].
  std::vector<double> filter(std::span<const double> y) const;

  // Samples until the unit-step response stays within 1% of its final value.
  std::size_t settling_samples() const;

  // Forward-backward filtering with reflect padding of three settling lengths
  // at each end; the padding is dropped from the result.
  std::vector<double> filtfilt(std::span<const double> y) const;

 private:
  int order_;
  double cutoff_;
  double rate_;
  std::vector<Biquad> sections_;
};

// Zero-phase Butterworth high-pass of a sampled signal.
SampledSignal butterworth_highpass(const SampledSignal& y, int order = 3, double cutoff_hz = 1.5);

}  // namespace eddikit
