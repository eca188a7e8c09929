#include "eddikit/spectra.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

#include "eddikit/error.hpp"
#include "eddikit/kernels.hpp"
#include "eddikit/parallel.hpp"

namespace eddikit {

namespace {

// Plan creation is not thread-safe in FFTW; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const noexcept {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (!p) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

Spectrum fourier_spectrum(const SampledSignal& y) {
  const std::size_t n = y.size();
  const auto values = y.values();
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);

  auto in = fftw_buffer<double>(n);
  auto out = fftw_buffer<fftw_complex>(n / 2 + 1);
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
  }
  for (std::size_t k = 0; k < n; ++k) in[k] = values[k] - mean;
  fftw_execute(plan.get());

  Spectrum s;
  const std::size_t bins = n / 2 + 1;
  s.freqs.resize(bins);
  s.magnitude.resize(bins);
  const double df = 1.0 / (static_cast<double>(n) * y.dt());
  kernels::active().complex_abs(&out[0][0], s.magnitude.data(), bins);
  for (std::size_t k = 0; k < bins; ++k) {
    s.freqs[k] = static_cast<double>(k) * df;
    const bool edge = (k == 0) || (n % 2 == 0 && k == n / 2);
    s.magnitude[k] *= (edge ? 1.0 : 2.0) / static_cast<double>(n);
  }
  return s;
}

double Scalogram::max() const noexcept {
  return magnitude.empty() ? 0.0 : *std::max_element(magnitude.begin(), magnitude.end());
}

std::vector<double> Scalogram::ridge() const {
  std::vector<double> out(times.size(), 0.0);
  for (std::size_t t = 0; t < times.size(); ++t) {
    std::size_t best = 0;
    for (std::size_t f = 1; f < freqs.size(); ++f) {
      if (at(f, t) > at(best, t)) best = f;
    }
    out[t] = freqs[best];
  }
  return out;
}

std::vector<double> log_frequency_grid(double f_lo, double f_hi, std::size_t n) {
  if (!(f_lo > 0.0) || !(f_hi > f_lo) || n < 2) {
    fail(ErrorKind::InvalidArgument, "log grid needs 0 < f_lo < f_hi and at least two points");
  }
  std::vector<double> out(n);
  const double ratio = std::log(f_hi / f_lo);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = f_lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.back() = f_hi;
  return out;
}

Scalogram cwt_morlet(const SampledSignal& y, const std::vector<double>& freqs,
                     double center_freq_cycles, std::size_t time_stride) {
  const double nyquist = 0.5 * y.axis().rate();
  if (freqs.empty()) fail(ErrorKind::InvalidArgument, "empty frequency grid");
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (!(freqs[i] > 0.0) || !(freqs[i] < nyquist)) {
      fail(ErrorKind::FrequencyOutOfRange, "frequency " + std::to_string(freqs[i]) +
                                               " Hz is outside (0, " + std::to_string(nyquist) + ")");
    }
    if (i > 0 && !(freqs[i] > freqs[i - 1])) {
      fail(ErrorKind::InvalidArgument, "frequency grid must be strictly ascending");
    }
  }
  if (!(center_freq_cycles > 0.0)) fail(ErrorKind::InvalidArgument, "wavelet centre frequency must be positive");
  if (time_stride < 1) fail(ErrorKind::InvalidArgument, "time stride must be positive");

  const std::size_t n = y.size();
  const std::size_t nfft = next_pow2(2 * n);
  const double w0 = center_freq_cycles;
  const double dw = 2.0 * std::numbers::pi / (static_cast<double>(nfft) * y.dt());

  Scalogram sg;
  sg.freqs = freqs;
  for (std::size_t k = 0; k < n; k += time_stride) sg.times.push_back(y.time(k));
  const std::size_t cols = sg.times.size();
  sg.magnitude.assign(freqs.size() * cols, 0.0);

  // Spectrum of the zero-padded record.
  auto spectrum = fftw_buffer<fftw_complex>(nfft);
  {
    auto in = fftw_buffer<fftw_complex>(nfft);
    for (std::size_t k = 0; k < nfft; ++k) {
      in[k][0] = k < n ? y[k] : 0.0;
      in[k][1] = 0.0;
    }
    Plan forward;
    {
      std::lock_guard lock(planner_mutex());
      forward.reset(fftw_plan_dft_1d(static_cast<int>(nfft), in.get(), spectrum.get(), FFTW_FORWARD,
                                     FFTW_ESTIMATE));
    }
    fftw_execute(forward.get());
  }

  Plan backward;
  {
    auto a = fftw_buffer<fftw_complex>(nfft);
    auto b = fftw_buffer<fftw_complex>(nfft);
    std::lock_guard lock(planner_mutex());
    backward.reset(fftw_plan_dft_1d(static_cast<int>(nfft), a.get(), b.get(), FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED));
  }

  const std::size_t half = nfft / 2;
  parallel_for(freqs.size(), [&](std::size_t fi) {
    const double scale = w0 / (2.0 * std::numbers::pi * freqs[fi]);
    std::vector<double> window(nfft, 0.0);
    for (std::size_t k = 1; k <= half; ++k) {
      const double arg = scale * dw * static_cast<double>(k) - w0;
      // exp(-x^2/2) underflows to 0 beyond |x| ~ 38.
      window[k] = std::abs(arg) < 40.0 ? 2.0 * std::exp(-0.5 * arg * arg) / static_cast<double>(nfft) : 0.0;
    }
    auto product = fftw_buffer<fftw_complex>(nfft);
    auto result = fftw_buffer<fftw_complex>(nfft);
    kernels::active().complex_scale(&spectrum[0][0], window.data(), &product[0][0], nfft);
    fftw_execute_dft(backward.get(), product.get(), result.get());
    std::vector<double> mags(n);
    kernels::active().complex_abs(&result[0][0], mags.data(), n);
    double* row = sg.magnitude.data() + fi * cols;
    for (std::size_t c = 0; c < cols; ++c) row[c] = mags[c * time_stride];
  });

  const double peak = sg.max();
  if (peak > 0.0) {
    for (double& m : sg.magnitude) m /= peak;
  }

  // e-folding time of the Morlet power at scale s is sqrt(2) s.
  sg.coi_hz.resize(cols);
  const double t_first = y.t0(), t_last = y.time(n - 1);
  for (std::size_t c = 0; c < cols; ++c) {
    const double edge = std::min(sg.times[c] - t_first, t_last - sg.times[c]);
    sg.coi_hz[c] = edge > 0.0 ? std::numbers::sqrt2 * w0 / (2.0 * std::numbers::pi * edge) : INFINITY;
  }
  return sg;
}

}  // namespace eddikit
