#include <doctest.h>

#include <cmath>
#include <vector>

#include "eddikit/error.hpp"
#include "eddikit/phase1.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace eddikit;

namespace {

const DampingFit& duffing_fit() {
  static const DampingFit fit = [] {
    const auto& traj = fixtures::duffing();
    return identify_damping(traj, crossings_for_identification(traj), duffing_damping_library(0.005));
  }();
  return fit;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("linear viscous damper is recovered") {
  const ModelSpec spec(1.0, {{BasisTerm::vel_power(1), 0.2}}, {{BasisTerm::disp_power(1), 10.0}});
  SimConfig cfg = fixtures::duffing_config();
  const auto traj = simulate(spec, cfg);
  const std::vector<BasisTerm> lib{BasisTerm::vel_power(1)};
  const auto fit = identify_damping(traj, crossings_for_identification(traj), lib);
  CHECK(rel_err(fit.terms[0].coefficient, 0.2) < 0.005);
  CHECK_FALSE(fit.underdetermined);
  CHECK_FALSE(fit.ill_conditioned);
}

TEST_CASE("true coefficients satisfy the energy system") {
  const auto& traj = fixtures::duffing();
  const auto sys = assemble_phase1(traj, crossings_for_identification(traj), duffing_damping_library(0.005));
  REQUIRE(sys.Q.cols() == 6);
  Eigen::VectorXd b_true = Eigen::VectorXd::Zero(6);
  b_true << 0.08, 0.0, 0.0, 2000.0, 0.0, 0.2;
  CHECK((sys.Q * b_true - sys.R).norm() / sys.R.norm() < 1e-3);
  // Passive damping: the kinetic-energy drop never shrinks.
  double prev = 0.0;
  for (Eigen::Index i = 0; i < sys.R.size(); ++i) {
    CHECK(sys.R(i) >= prev);
    prev = sys.R(i);
  }
}

TEST_CASE("Q entries match an independent quadrature") {
  // Cumulative trapezoid, linearly interpolated inside the partial cell.
  auto cumulative_at = [](const std::vector<double>& g, double dt, double p) {
    const auto i = static_cast<std::size_t>(std::floor(p));
    double sum = 0.0;
    for (std::size_t k = 0; k < i; ++k) sum += 0.5 * dt * (g[k] + g[k + 1]);
    if (i + 1 >= g.size()) return sum;
    return sum + (p - static_cast<double>(i)) * 0.5 * dt * (g[i] + g[i + 1]);
  };
  const auto& traj = fixtures::duffing();
  const auto c = crossings_for_identification(traj);
  const auto lib = duffing_damping_library(0.005);
  const auto sys = assemble_phase1(traj, c, lib);
  const double dt = traj.axis().dt;
  for (std::size_t j = 0; j < lib.size(); ++j) {
    std::vector<double> g(traj.size());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = traj.v()[k] * lib[j](traj.x()[k], traj.v()[k]);
    for (std::size_t i : {std::size_t{1}, std::size_t{7}, c.size() - 1}) {
      const double want = cumulative_at(g, dt, c.positions[i]) - cumulative_at(g, dt, c.positions[0]);
      const double got = sys.Q(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j));
      CHECK(got == doctest::Approx(want).epsilon(1e-9).scale(1e-12));
    }
  }
}

TEST_CASE("damping coefficients of the clearance oscillator") {
  const auto& fit = duffing_fit();
  REQUIRE(fit.terms.size() == 6);
  const double b1 = fit.terms[0].coefficient, b2 = fit.terms[1].coefficient, b3 = fit.terms[2].coefficient;
  const double b4 = fit.terms[3].coefficient, b5 = fit.terms[4].coefficient, b6 = fit.terms[5].coefficient;
  CHECK(rel_err(b1, 0.08) < 0.01);
  CHECK(rel_err(b4, 2000.0) < 0.02);
  CHECK(rel_err(b6, 0.2) < 0.01);
  CHECK(std::abs(b2) < 0.01);
  CHECK(std::abs(b3) < 0.01);
  CHECK(std::abs(b5) < 0.01);
  CHECK(fit.relative_residual < 1e-3);
  REQUIRE(fit.dissipated_data.size() == fit.gammas.size());
  REQUIRE(fit.dissipated_model.size() == fit.gammas.size());
  for (std::size_t i = 0; i < fit.gammas.size(); ++i) {
    CHECK(std::abs(fit.dissipated_model[i] - fit.dissipated_data[i]) < 1e-3 * fit.dissipated_data.back());
  }
}

TEST_CASE("reference damping values are consistent with its error column") {
  // Exact, identified, quoted error (%) for b_1, b_4, b_6 by EDDI and SINDy.
  struct Row {
    double exact, eddi, eddi_pct, sindy, sindy_pct;
  };
  const Row rows[] = {{0.08, 0.07996, 0.05, 0.08016, 0.2}, {2000.0, 2017.1, 0.85, 2003.3, 0.16},
                      {0.2, 0.19982, 0.09, 0.19926, 0.37}};
  for (const auto& r : rows) {
    CHECK(100.0 * rel_err(r.eddi, r.exact) == doctest::Approx(r.eddi_pct).epsilon(0.03));
    CHECK(100.0 * rel_err(r.sindy, r.exact) == doctest::Approx(r.sindy_pct).epsilon(0.03));
  }
  // Our fit is at least as close to the exact b_4 as the reference one.
  CHECK(rel_err(duffing_fit().terms[3].coefficient, 2000.0) <= rel_err(2017.1, 2000.0));
}

TEST_CASE("undamped motion identifies no damping") {
  const ModelSpec spec(0.1, {}, {{BasisTerm::disp_power(1), 40.0}, {BasisTerm::disp_power(3), 5000.0}});
  const auto traj = simulate(spec, fixtures::duffing_config());
  const auto c = crossings_for_identification(traj);
  // Each half cycle repeats exactly, so every Q column grows linearly in the
  // crossing index and only one candidate at a time is identifiable.
  for (const auto& term : duffing_damping_library(0.005)) {
    if (term == BasisTerm::vel_power(2)) continue;  // no net work per half cycle
    const std::vector<BasisTerm> lib{term};
    const auto fit = identify_damping(traj, c, lib);
    INFO(term.describe());
    if (term == BasisTerm::mixed_disp_sq_vel()) {
      // Its work column is ~1e-5 J per unit coefficient per half cycle while R
      // carries ~1e-8 J of crossing-interpolation noise, so bound the energy
      // the fitted term would dissipate instead of the raw coefficient.
      const auto sys = assemble_phase1(traj, c, lib);
      CHECK(std::abs(fit.terms[0].coefficient) * sys.Q.col(0).cwiseAbs().maxCoeff() < 1e-6 * c.T_at_gamma[0]);
    } else {
      CHECK(std::abs(fit.terms[0].coefficient) < 1e-8);
    }
  }
  CHECK(identify_damping(traj, c, duffing_damping_library(0.005)).ill_conditioned);
}

TEST_CASE("rig damping values are recovered from a hammer-excited record") {
  const auto& traj = fixtures::rig();
  const std::vector<BasisTerm> lib{BasisTerm::vel_power(1), BasisTerm::vel_gate_two_sided(fixtures::kRigClearance)};
  const auto fit = identify_damping(traj, crossings_for_identification(traj), lib);
  CHECK(rel_err(fit.terms[0].coefficient, 0.056) < 0.02);
  CHECK(rel_err(fit.terms[1].coefficient, 0.146) < 0.02);
}

TEST_CASE("scaling mass and forces together scales the damping") {
  // Mass c m with every force scaled by c leaves x(t) unchanged.
  const auto& traj = fixtures::duffing();
  const auto lib = duffing_damping_library(0.005);
  const double c = 3.5;
  const auto scaled = traj.with_mass(c * traj.mass());
  const auto base = duffing_fit();
  const auto fit = identify_damping(scaled, crossings_for_identification(scaled), lib);
  for (std::size_t j = 0; j < lib.size(); ++j) {
    CHECK(fit.terms[j].coefficient ==
          doctest::Approx(c * base.terms[j].coefficient).epsilon(1e-9).scale(1e-12));
  }
}

TEST_CASE("half the crossings give nearly the same damping") {
  const auto& traj = fixtures::duffing();
  const auto all = crossings_for_identification(traj);
  const auto half = all.slice(0, all.size() / 2);
  const auto fit = identify_damping(traj, half, duffing_damping_library(0.005));
  for (std::size_t j : {0u, 3u, 5u}) {
    CHECK(rel_err(fit.terms[j].coefficient, duffing_fit().terms[j].coefficient) < 0.01);
  }
}

TEST_CASE("optional magnitude threshold zeroes small terms and refits") {
  const auto& traj = fixtures::duffing();
  Phase1Options opts;
  opts.magnitude_threshold = 0.01;
  const auto fit =
      identify_damping(traj, crossings_for_identification(traj), duffing_damping_library(0.005), opts);
  CHECK(fit.terms[1].coefficient == 0.0);
  CHECK(fit.terms[2].coefficient == 0.0);
  CHECK(fit.terms[4].coefficient == 0.0);
  CHECK(rel_err(fit.terms[0].coefficient, 0.08) < 0.01);
  CHECK(rel_err(fit.terms[3].coefficient, 2000.0) < 0.02);
  CHECK(rel_err(fit.terms[5].coefficient, 0.2) < 0.01);
}

TEST_CASE("phase-one errors") {
  const auto& traj = fixtures::duffing();
  const auto c = crossings_for_identification(traj);
  auto kind = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  CHECK(kind([&] { assemble_phase1(traj, c, {}); }) == ErrorKind::EmptyLibrary);
  const std::vector<BasisTerm> bad{BasisTerm::disp_power(1)};
  CHECK(kind([&] { assemble_phase1(traj, c, bad); }) == ErrorKind::InvalidArgument);
  const std::vector<BasisTerm> lib{BasisTerm::vel_power(1)};
  CHECK(kind([&] { assemble_phase1(traj, c.slice(0, 1), lib); }) == ErrorKind::InsufficientCrossings);
  // Fewer equations than candidates is reported, not fatal.
  const auto fit = identify_damping(traj, c.slice(0, 4), duffing_damping_library(0.005));
  CHECK(fit.underdetermined);
}
