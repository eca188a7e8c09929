#pragma once

#include <cstddef>
#include <vector>

#include "eddikit/signal.hpp"

namespace eddikit {

struct Spectrum {
  std::vector<double> freqs;      // Hz, k / (n dt)
  std::vector<double> magnitude;  // single-sided amplitude
};

// Single-sided amplitude spectrum of the mean-removed signal: a unit sinusoid
// on a bin centre reads 1.
Spectrum fourier_spectrum(const SampledSignal& y);

struct Scalogram {
  std::vector<double> freqs;      // Hz, ascending
  std::vector<double> times;      // s
  std::vector<double> magnitude;  // freqs.size() x times.size(), row per frequency
  // Lowest frequency free of edge effects at each time (cone of influence).
  std::vector<double> coi_hz;

  double at(std::size_t f, std::size_t t) const noexcept { return magnitude[f * times.size() + t]; }
  double max() const noexcept;
  // Frequency of the largest magnitude in each time column.
  std::vector<double> ridge() const;
};

// n log-spaced frequencies from f_lo to f_hi inclusive.
std::vector<double> log_frequency_grid(double f_lo, double f_hi, std::size_t n);

/// Complex Morlet transform magnitude, computed by frequency-domain
/// convolution with the analytic wavelet 2 exp(-(s w - w0)^2 / 2), scale
/// s = w0 / (2 pi f). With this normalisation a unit tone reads 1 on its
/// ridge. Output columns are every time_stride-th sample; the result is scaled
/// so its largest entry is 1 unless the signal is identically zero.
///
/// Throws FrequencyOutOfRange for frequencies outside (0, Nyquist).
Scalogram cwt_morlet(const SampledSignal& y, const std::vector<double>& freqs,
                     double center_freq_cycles = 6.0, std::size_t time_stride = 1);

}  // namespace eddikit
