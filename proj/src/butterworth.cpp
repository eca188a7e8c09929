#include "eddikit/butterworth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "eddikit/error.hpp"

namespace eddikit {

namespace {

using cdouble = std::complex<double>;

void run_section(const Biquad& s, std::vector<double>& y, std::array<double, 2> z) {
  for (double& sample : y) {
    const double in = sample;
    const double out = s.b0 * in + z[0];
    z[0] = s.b1 * in - s.a1 * out + z[1];
    z[1] = s.b2 * in - s.a2 * out;
    sample = out;
  }
}

// numpy-style "reflect" index folding (edge sample not repeated).
std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<std::ptrdiff_t>(n)) m = period - m;
  return static_cast<std::size_t>(m);
}

}  // namespace

std::array<double, 2> Biquad::steady_state(double u) const noexcept {
  const double out = dc_gain() * u;
  const double z1 = b2 * u - a2 * out;
  const double z0 = b1 * u - a1 * out + z1;
  return {z0, z1};
}

ButterworthHighpass::ButterworthHighpass(int order, double cutoff_hz, double sample_rate)
    : order_(order), cutoff_(cutoff_hz), rate_(sample_rate) {
  if (order < 1) fail(ErrorKind::InvalidArgument, "filter order must be at least 1");
  if (!(sample_rate > 0.0)) fail(ErrorKind::InvalidArgument, "sample rate must be positive");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < 0.5 * sample_rate)) {
    fail(ErrorKind::CutoffOutOfRange, "cutoff " + std::to_string(cutoff_hz) +
                                          " Hz is outside (0, Nyquist = " +
                                          std::to_string(0.5 * sample_rate) + " Hz)");
  }
  const double k = 2.0 * sample_rate;
  const double wc = k * std::tan(std::numbers::pi * cutoff_hz / sample_rate);

  // High-pass poles wc * p for the prototype poles p on the left unit
  // semicircle; zeros all at s = 0.
  for (int i = 0; i < order / 2; ++i) {
    const double angle = std::numbers::pi * (2.0 * i + order + 1) / (2.0 * order);
    const cdouble p = wc * std::polar(1.0, angle);
    const double re = p.real(), mag2 = std::norm(p);
    const double a0 = k * k - 2.0 * re * k + mag2;
    Biquad s;
    s.b0 = k * k / a0;
    s.b1 = -2.0 * k * k / a0;
    s.b2 = k * k / a0;
    s.a1 = (2.0 * mag2 - 2.0 * k * k) / a0;
    s.a2 = (k * k + 2.0 * re * k + mag2) / a0;
    sections_.push_back(s);
  }
  if (order % 2 == 1) {
    const double p = -wc;
    Biquad s;
    s.b0 = k / (k - p);
    s.b1 = -k / (k - p);
    s.a1 = -(k + p) / (k - p);
    sections_.push_back(s);
  }
}

double ButterworthHighpass::magnitude(double f) const noexcept {
  const cdouble z1 = std::polar(1.0, -2.0 * std::numbers::pi * f / rate_);
  cdouble h = 1.0;
  for (const auto& s : sections_) {
    h *= (s.b0 + s.b1 * z1 + s.b2 * z1 * z1) / (1.0 + s.a1 * z1 + s.a2 * z1 * z1);
  }
  return std::abs(h);
}

std::vector<double> ButterworthHighpass::filter(std::span<const double> y) const {
  std::vector<double> out(y.begin(), y.end());
  if (out.empty()) return out;
  for (const auto& s : sections_) run_section(s, out, s.steady_state(out.front()));
  return out;
}

std::size_t ButterworthHighpass::settling_samples() const {
  // Step response from rest; the high-pass settles to 0.
  const auto limit = static_cast<std::size_t>(std::ceil(50.0 * rate_ / cutoff_)) + 16;
  std::vector<double> step(limit, 1.0);
  for (const auto& s : sections_) run_section(s, step, {0.0, 0.0});
  std::size_t last = 0;
  for (std::size_t k = 0; k < step.size(); ++k) {
    if (std::abs(step[k]) > 0.01) last = k;
  }
  return last + 1;
}

std::vector<double> ButterworthHighpass::filtfilt(std::span<const double> y) const {
  const std::size_t n = y.size();
  if (n < 2) fail(ErrorKind::InvalidArgument, "filtering needs at least two samples");
  const std::size_t pad = 3 * settling_samples();

  std::vector<double> work(n + 2 * pad);
  for (std::size_t i = 0; i < work.size(); ++i) {
    work[i] = y[reflect_index(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(pad), n)];
  }
  for (const auto& s : sections_) run_section(s, work, s.steady_state(work.front()));
  std::reverse(work.begin(), work.end());
  for (const auto& s : sections_) run_section(s, work, s.steady_state(work.front()));
  std::reverse(work.begin(), work.end());
  return {work.begin() + static_cast<std::ptrdiff_t>(pad),
          work.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

SampledSignal butterworth_highpass(const SampledSignal& y, int order, double cutoff_hz) {
  const ButterworthHighpass hp(order, cutoff_hz, y.axis().rate());
  return SampledSignal(y.axis(), hp.filtfilt(y.values()));
}

}  // namespace eddikit
