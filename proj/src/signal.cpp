#include "eddikit/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eddikit/error.hpp"

namespace eddikit {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      fail(ErrorKind::NonFiniteInput,
           std::string(what) + " has a non-finite value at sample " + std::to_string(k));
    }
  }
}

}  // namespace

bool TimeAxis::same_grid(const TimeAxis& other) const noexcept {
  return size == other.size && std::abs(t0 - other.t0) <= 1e-12 * std::max(1.0, std::abs(t0)) &&
         std::abs(dt - other.dt) <= 1e-12 * dt;
}

SampledSignal::SampledSignal(double t0, double dt, std::vector<double> values)
    : SampledSignal(TimeAxis{t0, dt, values.size()}, std::move(values)) {}

SampledSignal::SampledSignal(const TimeAxis& axis, std::vector<double> values)
    : axis_{axis.t0, axis.dt, values.size()}, values_(std::move(values)) {
  if (!(axis_.dt > 0.0) || !std::isfinite(axis_.dt) || !std::isfinite(axis_.t0)) {
    fail(ErrorKind::InvalidArgument, "sample spacing must be positive and finite");
  }
  if (values_.size() < 2) fail(ErrorKind::InvalidArgument, "a signal needs at least two samples");
  require_finite(values_, "signal");
}

double SampledSignal::interpolate(double t) const noexcept {
  const double s = (t - axis_.t0) / axis_.dt;
  if (s < 0.0 || s > static_cast<double>(values_.size() - 1)) return 0.0;
  auto k = static_cast<std::size_t>(s);
  if (k >= values_.size() - 1) return values_.back();
  const double w = s - static_cast<double>(k);
  return values_[k] + w * (values_[k + 1] - values_[k]);
}

Trajectory::Trajectory(TimeAxis axis, std::vector<double> x, std::vector<double> v,
                       std::vector<double> a, std::vector<double> f_ext, double mass)
    : axis_(axis), x_(std::move(x)), v_(std::move(v)), a_(std::move(a)), f_(std::move(f_ext)),
      mass_(mass) {
  if (!(mass_ > 0.0) || !std::isfinite(mass_)) fail(ErrorKind::InvalidArgument, "mass must be positive");
  if (!(axis_.dt > 0.0)) fail(ErrorKind::InvalidArgument, "sample spacing must be positive");
  axis_.size = x_.size();
  if (axis_.size < 2) fail(ErrorKind::InvalidArgument, "a trajectory needs at least two samples");
  if (v_.size() != axis_.size) fail(ErrorKind::InvalidArgument, "velocity channel length mismatch");
  if (!a_.empty() && a_.size() != axis_.size) {
    fail(ErrorKind::InvalidArgument, "acceleration channel length mismatch");
  }
  if (f_.empty()) f_.assign(axis_.size, 0.0);
  if (f_.size() != axis_.size) fail(ErrorKind::InvalidArgument, "force channel length mismatch");
  require_finite(x_, "displacement");
  require_finite(v_, "velocity");
  require_finite(a_, "acceleration");
  require_finite(f_, "external force");
}

bool Trajectory::is_forced() const noexcept {
  return std::any_of(f_.begin(), f_.end(), [](double f) { return f != 0.0; });
}

std::vector<double> Trajectory::momentum_rate() const {
  std::vector<double> out(a_.size());
  std::transform(a_.begin(), a_.end(), out.begin(), [m = mass_](double a) { return m * a; });
  return out;
}

Trajectory Trajectory::with_mass(double mass) const {
  return Trajectory(axis_, x_, v_, a_, f_, mass);
}

}  // namespace eddikit
