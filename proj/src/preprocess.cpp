#include "eddikit/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eddikit/butterworth.hpp"
#include "eddikit/error.hpp"
#include "eddikit/kernels.hpp"

namespace eddikit {

namespace {

int sign_of(double value) noexcept { return (value > 0.0) - (value < 0.0); }

}  // namespace

CrossingSet CrossingSet::slice(std::size_t first, std::size_t last) const {
  CrossingSet out;
  out.mass = mass;
  auto copy = [&](const std::vector<double>& src, std::vector<double>& dst) {
    dst.assign(src.begin() + static_cast<std::ptrdiff_t>(first),
               src.begin() + static_cast<std::ptrdiff_t>(last));
  };
  copy(gammas, out.gammas);
  copy(v_at_gamma, out.v_at_gamma);
  copy(T_at_gamma, out.T_at_gamma);
  copy(positions, out.positions);
  return out;
}

double value_at_position(std::span<const double> series, double position) noexcept {
  if (series.empty()) return 0.0;
  if (position <= 0.0) return series.front();
  const auto k = static_cast<std::size_t>(position);
  if (k + 1 >= series.size()) return series.back();
  const double w = position - static_cast<double>(k);
  return series[k] + w * (series[k + 1] - series[k]);
}

CrossingSet find_zero_crossings(const SampledSignal& x, const SampledSignal& v, double mass) {
  if (!x.axis().same_grid(v.axis())) {
    fail(ErrorKind::InvalidArgument, "displacement and velocity are not aligned");
  }
  if (!(mass > 0.0)) fail(ErrorKind::InvalidArgument, "mass must be positive");

  const auto xs = x.values();
  const auto vs = v.values();
  const std::size_t n = xs.size();
  CrossingSet out;
  out.mass = mass;
  auto push = [&](double position) {
    const double vel = value_at_position(vs, position);
    out.positions.push_back(position);
    out.gammas.push_back(x.t0() + position * x.dt());
    out.v_at_gamma.push_back(vel);
    out.T_at_gamma.push_back(0.5 * mass * vel * vel);
  };

  std::size_t k = 0;
  while (k < n) {
    if (xs[k] == 0.0) {
      // Run of exact zeros [k, j).
      std::size_t j = k;
      while (j < n && xs[j] == 0.0) ++j;
      const int before = k > 0 ? sign_of(xs[k - 1]) : 0;
      const int after = j < n ? sign_of(xs[j]) : 0;
      if (k == 0 && after != 0) {
        push(static_cast<double>(j - 1));
      } else if (before != 0 && after != 0 && before != after) {
        push(0.5 * static_cast<double>(k + j - 1));
      }
      k = j;
      continue;
    }
    if (k + 1 < n && xs[k + 1] != 0.0 && sign_of(xs[k]) != sign_of(xs[k + 1])) {
      const double w = xs[k] / (xs[k] - xs[k + 1]);
      push(static_cast<double>(k) + w);
    }
    ++k;
  }

  if (out.size() < 2) {
    fail(ErrorKind::NoCrossings, "found " + std::to_string(out.size()) +
                                     " displacement zero crossing(s); at least two are needed. "
                                     "Check that the record is a free decay around x = 0 "
                                     "(remove any static offset first)");
  }
  return out;
}

CrossingSet select_crossings(const CrossingSet& all, std::span<const double> f_ext,
                             const TimeAxis& axis, const CrossingOptions& options) {
  std::size_t first = 0;
  double f_max = 0.0;
  for (double f : f_ext) f_max = std::max(f_max, std::abs(f));
  if (f_max > 0.0) {
    const double threshold = options.force_threshold_ratio * f_max;
    std::size_t last_loaded = 0;
    for (std::size_t k = 0; k < f_ext.size(); ++k) {
      if (std::abs(f_ext[k]) >= threshold) last_loaded = k;
    }
    const double free_from = axis.at(last_loaded);
    while (first < all.size() && all.gammas[first] <= free_from) ++first;
  }
  if (first >= all.size()) {
    fail(ErrorKind::InsufficientCrossings, "no displacement zero crossing after the forcing ends");
  }

  const double floor = options.energy_floor_ratio * all.T_at_gamma[first];
  std::size_t last = first + 1;
  while (last < all.size()) {
    if (options.end_time && all.gammas[last] > *options.end_time) break;
    if (all.T_at_gamma[last] < floor) break;
    ++last;
  }
  if (last - first < 2) {
    fail(ErrorKind::InsufficientCrossings,
         "only " + std::to_string(last - first) + " usable crossing(s) after selection");
  }
  return all.slice(first, last);
}

CrossingSet crossings_for_identification(const Trajectory& traj, const CrossingOptions& options) {
  const auto all = find_zero_crossings(traj.x_signal(), traj.v_signal(), traj.mass());
  return select_crossings(all, traj.f_ext(), traj.axis(), options);
}

std::vector<double> cumulative_trapezoid(std::span<const double> y, double dt) {
  std::vector<double> out(y.size(), 0.0);
  double acc = 0.0;
  for (std::size_t k = 1; k < y.size(); ++k) {
    acc += 0.5 * dt * (y[k - 1] + y[k]);
    out[k] = acc;
  }
  return out;
}

SampledSignal cumulative_integral(const SampledSignal& y) {
  return SampledSignal(y.axis(), cumulative_trapezoid(y.values(), y.dt()));
}

Trajectory reconstruct_states(const SampledSignal& a, double mass, const FilterSettings& filter) {
  const ButterworthHighpass hp(filter.order, filter.cutoff_hz, a.axis().rate());
  std::vector<double> v = hp.filtfilt(cumulative_trapezoid(a.values(), a.dt()));
  std::vector<double> x = hp.filtfilt(cumulative_trapezoid(v, a.dt()));
  std::vector<double> acc(a.values().begin(), a.values().end());
  return Trajectory(a.axis(), std::move(x), std::move(v), std::move(acc), {}, mass);
}

EnergyTrace dissipated_energy_of_model(const Trajectory& traj,
                                       std::span<const WeightedTerm> damping,
                                       const CrossingSet& crossings) {
  if (crossings.size() == 0) fail(ErrorKind::InsufficientCrossings, "no reference crossing");
  const std::size_t n = traj.size();
  const auto x = traj.x();
  const auto v = traj.v();

  std::vector<double> force(n, 0.0), column(n);
  for (const auto& w : damping) {
    eval_basis_column(w.term, x, v, column);
    for (std::size_t k = 0; k < n; ++k) force[k] += w.coefficient * column[k];
  }
  std::vector<double> power(n);
  kernels::multiply(v, force, power);

  EnergyTrace out;
  out.axis = traj.axis();
  out.dissipated = cumulative_trapezoid(power, traj.axis().dt);
  out.kinetic.resize(n);
  out.mechanical.resize(n);
  const double m = traj.mass();
  const double d0 = value_at_position(out.dissipated, crossings.positions.front());
  const double t0 = crossings.T_at_gamma.front();
  for (std::size_t k = 0; k < n; ++k) {
    out.kinetic[k] = 0.5 * m * v[k] * v[k];
    out.mechanical[k] = t0 - (out.dissipated[k] - d0);
  }
  return out;
}

}  // namespace eddikit
