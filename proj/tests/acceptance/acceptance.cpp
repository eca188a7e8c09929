// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any fails.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eddikit/cli/commands.hpp"
#include "eddikit/cli/csv.hpp"
#include "eddikit/phase1.hpp"
#include "eddikit/phase2.hpp"
#include "eddikit/simulator.hpp"
#include "fixtures.hpp"

using namespace eddikit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double coefficient(const cli::IdentificationReport& r, cli::TermRole role, const BasisTerm& term) {
  for (const auto& row : r.coefficients) {
    if (row.role == role && row.term == term) return row.active ? row.value : 0.0;
  }
  return NAN;
}

// Largest |sum of the listed stiffness rows| over x in [-span, span].
double stiffness_contribution(const cli::IdentificationReport& r, const std::vector<BasisTerm>& which, double span) {
  double worst = 0.0;
  for (int i = -400; i <= 400; ++i) {
    const double x = span * i / 400.0;
    double s = 0.0;
    for (const auto& t : which) s += coefficient(r, cli::TermRole::Stiffness, t) * t(x, 0.0);
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

struct Context {
  fs::path work;
  fs::path config;
  fs::path record;    // simulated clearance oscillator
  fs::path identify;  // cmd_identify output
  cli::IdentificationReport eddi, sindy;
};

const cli::CommandOptions kQuiet{true, nullptr};

Outcome damping_table(const Context& c) {
  Outcome o;
  const double e = 0.005;
  const auto b = [&](const BasisTerm& t) { return coefficient(c.eddi, cli::TermRole::Damping, t); };
  const double b1 = b(BasisTerm::vel_power(1)), b2 = b(BasisTerm::vel_power(2)), b3 = b(BasisTerm::vel_power(3));
  const double b4 = b(BasisTerm::mixed_disp_sq_vel()), b5 = b(BasisTerm::vel_gate_one_sided(e));
  const double b6 = b(BasisTerm::vel_gate_two_sided(e));
  o.require(rel_err(b1, 0.08) < 0.01, "b1");
  o.require(rel_err(b4, 2000.0) < 0.02, "b4");
  o.require(rel_err(b6, 0.2) < 0.01, "b6");
  o.require(std::abs(b2) < 0.01 && std::abs(b3) < 0.01 && std::abs(b5) < 0.01, "extraneous");
  o.detail = fmt("b1 %.5g (%.3f%%), b4 %.5g (%.3f%%), b6 %.5g (%.3f%%), |b2|,|b3|,|b5| %.2g %.2g %.2g", b1,
                 100 * rel_err(b1, 0.08), b4, 100 * rel_err(b4, 2000.0), b6, 100 * rel_err(b6, 0.2), std::abs(b2),
                 std::abs(b3), std::abs(b5)) +
             (o.pass ? "" : " [" + o.detail + "]");
  return o;
}

Outcome stiffness_table(const Context& c) {
  Outcome o;
  const double e = 0.005;
  const auto k = [&](const BasisTerm& t) { return coefficient(c.eddi, cli::TermRole::Stiffness, t); };
  const double k1 = k(BasisTerm::disp_power(1)), k3 = k(BasisTerm::disp_power(3));
  const double k7 = k(BasisTerm::clearance_spring_two_sided(e));
  const std::vector<BasisTerm> extra{BasisTerm::disp_power(2), BasisTerm::disp_power(4), BasisTerm::disp_power(5),
                                     BasisTerm::clearance_spring_one_sided(e)};
  // max|K| of the generating stiffness over the same range.
  const ModelSpec truth = duffing_clearance_model();
  const double kmax = std::max(std::abs(truth.stiffness_force(0.02)), std::abs(truth.stiffness_force(-0.02)));
  const double spurious = stiffness_contribution(c.eddi, extra, 0.02) / kmax;
  o.require(rel_err(k1, 40.0) < 0.005, "k1");
  o.require(rel_err(k3, 5000.0) < 0.02, "k3");
  o.require(rel_err(k7, 200.0) < 0.005, "k7");
  o.require(spurious < 0.02, "extraneous");
  o.detail = fmt("k1 %.5g (%.3f%%), k3 %.5g (%.3f%%), k7 %.5g (%.3f%%), extraneous %.3f%% of max|K|", k1,
                 100 * rel_err(k1, 40.0), k3, 100 * rel_err(k3, 5000.0), k7, 100 * rel_err(k7, 200.0),
                 100 * spurious) +
             (o.pass ? "" : " [" + o.detail + "]");
  return o;
}

Outcome sindy_columns(const Context& c) {
  Outcome o;
  const double e = 0.005;
  const auto b = [&](const BasisTerm& t) { return coefficient(c.sindy, cli::TermRole::Damping, t); };
  const auto k = [&](const BasisTerm& t) { return coefficient(c.sindy, cli::TermRole::Stiffness, t); };
  o.require(b(BasisTerm::vel_power(2)) == 0.0 && b(BasisTerm::vel_power(3)) == 0.0 &&
                b(BasisTerm::vel_gate_one_sided(e)) == 0.0 && k(BasisTerm::clearance_spring_one_sided(e)) == 0.0,
            "b2, b3, b5, k6 not eliminated");
  const std::pair<double, double> kept[] = {{b(BasisTerm::vel_power(1)), 0.08},
                                            {b(BasisTerm::mixed_disp_sq_vel()), 2000.0},
                                            {b(BasisTerm::vel_gate_two_sided(e)), 0.2},
                                            {k(BasisTerm::disp_power(1)), 40.0},
                                            {k(BasisTerm::disp_power(3)), 5000.0},
                                            {k(BasisTerm::clearance_spring_two_sided(e)), 200.0}};
  double worst = 0.0;
  for (const auto& [got, want] : kept) worst = std::max(worst, rel_err(got, want));
  o.require(worst < 0.02, "survivor off by more than 2%");
  std::size_t active = 0;
  for (const auto& row : c.sindy.coefficients) active += row.active;
  o.detail = fmt("%zu of %zu terms active, worst survivor error %.3f%%, %zu STLS passes", active,
                 c.sindy.coefficients.size(), 100 * worst, c.sindy.iterations) +
             (o.pass ? "" : " [" + o.detail + "]");
  return o;
}

Outcome cross_ic(const Context& c) {
  Outcome o;
  const auto metrics = cli::cmd_validate(c.identify / "report_eddi.json", c.config, c.work / "validate", std::nullopt,
                                         kQuiet);
  std::string d;
  for (const auto& m : metrics) {
    o.require(m.nrmse < 0.05, fmt("v0 = %g", m.ic.v0));
    d += fmt("%s(%g, %g): %.4f%%", d.empty() ? "" : ", ", m.ic.x0, m.ic.v0, 100 * m.nrmse);
  }
  o.require(metrics.size() == 2, "expected two initial conditions");
  o.detail = "NRMSE " + d;
  return o;
}

Outcome energy_balance() {
  Outcome o;
  const auto& traj = fixtures::duffing();
  const auto sys = assemble_phase1(traj, crossings_for_identification(traj), duffing_damping_library(0.005));
  Eigen::VectorXd b(6);
  b << 0.08, 0.0, 0.0, 2000.0, 0.0, 0.2;
  const double r = (sys.Q * b - sys.R).norm() / sys.R.norm();
  o.require(r < 1e-3, "residual");
  o.detail = fmt("||Q b - R|| / ||R|| = %.3g over %ld crossings", r, static_cast<long>(sys.R.size()) + 1);
  return o;
}

// Randomised clearance oscillators built from the same term families as
// the worked example: one- or two-sided gate and spring, optional cubic.
ModelSpec random_spec(std::uint64_t seed, double& clearance) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto lu = [&](double ref) { return ref * std::exp(std::log(0.5) + u(rng) * std::log(4.0)); };
  const double e = 0.002 + 0.008 * u(rng);
  const double m = lu(0.1);
  std::vector<WeightedTerm> d{{BasisTerm::vel_power(1), lu(0.08)}};
  d.push_back({BasisTerm::mixed_disp_sq_vel(), lu(2000.0)});
  if (u(rng) < 0.5) {
    d.push_back({BasisTerm::vel_gate_two_sided(e), lu(0.2)});
  } else {
    d.push_back({BasisTerm::vel_gate_one_sided(e), lu(0.2)});
  }
  std::vector<WeightedTerm> k{{BasisTerm::disp_power(1), lu(40.0)}};
  if (u(rng) < 0.7) k.push_back({BasisTerm::disp_power(3), lu(5000.0)});
  if (u(rng) < 0.5) {
    k.push_back({BasisTerm::clearance_spring_two_sided(e), lu(200.0)});
  } else {
    k.push_back({BasisTerm::clearance_spring_one_sided(e), lu(200.0)});
  }
  clearance = e;
  return ModelSpec(m, d, k);
}

// Worst generating-coefficient error and worst spurious share (largest
// |spurious force| along the record over largest |true force|) of one fit.
struct Recovery {
  double coef = 0.0, spurious = 0.0;
};

Recovery score(const Trajectory& traj, const std::vector<WeightedTerm>& truth, const std::vector<BasisTerm>& lib,
               const std::vector<WeightedTerm>& fit, bool damping) {
  Recovery r;
  std::vector<bool> generating(lib.size(), false);
  for (const auto& w : truth) {
    for (std::size_t j = 0; j < lib.size(); ++j) {
      if (lib[j] == w.term) {
        generating[j] = true;
        r.coef = std::max(r.coef, rel_err(fit[j].coefficient, w.coefficient));
      }
    }
  }
  double true_max = 0.0, spurious_max = 0.0;
  for (std::size_t s = 0; s < traj.size(); ++s) {
    const double x = traj.x()[s], v = damping ? traj.v()[s] : 0.0;
    double t = 0.0, sp = 0.0;
    for (const auto& w : truth) t += w.coefficient * w.term(x, v);
    for (std::size_t j = 0; j < lib.size(); ++j) {
      if (!generating[j]) sp += fit[j].coefficient * lib[j](x, v);
    }
    true_max = std::max(true_max, std::abs(t));
    spurious_max = std::max(spurious_max, std::abs(sp));
  }
  r.spurious = spurious_max / true_max;
  return r;
}

Outcome recovery_suite() {
  Outcome o;
  std::string d;
  double worst_coef = 0.0, worst_spur = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    double e = 0.0;
    const ModelSpec spec = random_spec(seed, e);
    auto cfg = fixtures::duffing_config();
    const Trajectory traj = simulate(spec, cfg);
    const auto dlib = duffing_damping_library(e);
    const auto slib = duffing_stiffness_library(e);
    const auto damping = identify_damping(traj, crossings_for_identification(traj), dlib);
    const auto stiffness = identify_stiffness(conservative_force(traj, damping.terms), slib);
    const Recovery rd = score(traj, spec.damping(), dlib, damping.terms, true);
    const Recovery rs = score(traj, spec.stiffness(), slib, stiffness.terms, false);
    const double coef = std::max(rd.coef, rs.coef), spur = std::max(rd.spurious, rs.spurious);
    o.require(coef < 0.03, fmt("seed %d coefficient %.2f%%", static_cast<int>(seed), 100 * coef));
    o.require(spur < 0.02, fmt("seed %d spurious %.2f%%", static_cast<int>(seed), 100 * spur));
    worst_coef = std::max(worst_coef, coef);
    worst_spur = std::max(worst_spur, spur);
  }

  // Mirror of the flexure rig: its reference values, hammer-excited.
  const auto& rig = fixtures::rig();
  const double e = fixtures::kRigClearance;
  const auto spec = fixtures::rig_model();
  const std::vector<BasisTerm> dlib{BasisTerm::vel_power(1), BasisTerm::vel_gate_two_sided(e)};
  const std::vector<BasisTerm> slib{BasisTerm::disp_power(1), BasisTerm::disp_power(2), BasisTerm::disp_power(3),
                                    BasisTerm::clearance_spring_two_sided(e)};
  const auto crossings = crossings_for_identification(rig);
  const auto damping = identify_damping(rig, crossings, dlib);
  const auto first = static_cast<std::size_t>(std::ceil(crossings.positions.front()));
  const auto stiffness = identify_stiffness(conservative_force(rig, damping.terms), slib, first);
  const double rig_coef = std::max(score(rig, spec.damping(), dlib, damping.terms, true).coef,
                                   score(rig, spec.stiffness(), slib, stiffness.terms, false).coef);
  o.require(rig_coef < 0.03, fmt("rig mirror %.2f%%", 100 * rig_coef));

  d = fmt("5 random specs: worst coefficient %.3f%%, worst spurious %.3f%%; rig mirror worst %.3f%%",
          100 * worst_coef, 100 * worst_spur, 100 * rig_coef);
  o.detail = d + (o.pass ? "" : " [" + o.detail + "]");
  return o;
}

Outcome reconstruction() {
  Outcome o;
  const auto& traj = fixtures::rig();  // 19200 Hz
  const SampledSignal a(traj.axis(), {traj.a().begin(), traj.a().end()});
  const Trajectory rec = reconstruct_states(a, traj.mass(), FilterSettings{3, 1.5});
  const std::size_t n = traj.size(), from = n / 20, to = n - n / 20;
  double err = 0.0, ref = 0.0;
  for (std::size_t k = from; k < to; ++k) {
    err += (rec.x()[k] - traj.x()[k]) * (rec.x()[k] - traj.x()[k]);
    ref += traj.x()[k] * traj.x()[k];
  }
  const double nrmse = std::sqrt(err / ref);
  o.require(nrmse < 0.02, "NRMSE");
  o.detail = fmt("displacement NRMSE %.3f%% over the central 90%% of a %.0f Hz record", 100 * nrmse,
                 traj.axis().rate());
  return o;
}

Outcome conservation() {
  Outcome o;
  const double m = 0.1, k = 40.0;
  const ModelSpec spec(m, {}, {{BasisTerm::disp_power(1), k}});
  const Trajectory traj = simulate(spec, fixtures::duffing_config());
  const double e0 = 0.5 * m * traj.v()[0] * traj.v()[0] + 0.5 * k * traj.x()[0] * traj.x()[0];
  double drift = 0.0;
  for (std::size_t s = 0; s < traj.size(); ++s) {
    const double en = 0.5 * m * traj.v()[s] * traj.v()[s] + 0.5 * k * traj.x()[s] * traj.x()[s];
    drift = std::max(drift, std::abs(en - e0) / e0);
  }
  o.require(drift < 1e-9, "drift");
  o.detail = fmt("max relative energy drift %.3g over 10 s", drift);
  return o;
}

Outcome spectra(const Context& c) {
  Outcome o;
  const fs::path out = c.work / "spectra";
  cli::cmd_spectra(c.record, out, c.config, kQuiet);
  const auto ridge = cli::read_csv(out / "scalogram_ridge.csv");
  const auto& t = ridge.column("t");
  const auto& f = ridge.column("ridge_hz");
  double early_lo = INFINITY, early_hi = 0.0, late_lo = INFINITY, late_hi = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] <= 0.5) {
      early_lo = std::min(early_lo, f[k]);
      early_hi = std::max(early_hi, f[k]);
    } else if (t[k] > 5.0) {
      late_lo = std::min(late_lo, f[k]);
      late_hi = std::max(late_hi, f[k]);
    }
  }
  o.require(early_lo >= 5.0 && early_hi <= 7.0, "early ridge");
  o.require(late_lo >= 3.0 && late_hi <= 4.0, "late ridge");
  const auto map = cli::read_csv(out / "scalogram.csv");
  double peak = 0.0;
  for (std::size_t col = 1; col < map.columns.size(); ++col) {
    peak = std::max(peak, *std::max_element(map.columns[col].begin(), map.columns[col].end()));
  }
  o.require(peak == 1.0, "max not 1");
  o.detail = fmt("ridge %.2f-%.2f Hz for t <= 0.5 s, %.2f-%.2f Hz for t > 5 s, max %.17g", early_lo, early_hi,
                 late_lo, late_hi, peak);
  return o;
}

Outcome determinism(const Context& c) {
  Outcome o;
  const fs::path again = c.work / "identify_again";
  cli::cmd_identify(c.config, c.record, again, std::nullopt, kQuiet);
  for (const char* name : {"report_eddi.json", "report_sindy.json"}) {
    const std::string a = slurp(c.identify / name), b = slurp(again / name);
    o.require(!a.empty() && a == b, std::string(name) + " differs");
  }
  o.detail = "two identify runs give byte-identical report_eddi.json and report_sindy.json";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eddikit acceptance checks"};
  std::string workdir = (fs::temp_directory_path() / "eddikit_acceptance").string();
  std::string config = EDDIKIT_SOURCE_DIR "/configs/duffing_clearance.yaml";
  app.add_option("--workdir", workdir, "Scratch directory for generated files");
  app.add_option("--config", config, "Clearance-oscillator configuration");
  CLI11_PARSE(app, argc, argv);

  Context c;
  c.work = workdir;
  c.config = config;
  fs::remove_all(c.work);
  fs::create_directories(c.work);
  c.record = c.work / "duffing_clearance.csv";
  c.identify = c.work / "identify";

  int failures = 0;
  auto run = [&](int id, const char* title, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  };

  // Shared pipeline: simulate the configured oscillator and identify it with both methods.
  try {
    cli::cmd_simulate(c.config, c.record, kQuiet);
    cli::cmd_identify(c.config, c.record, c.identify, std::nullopt, kQuiet);
    c.eddi = cli::load_report(c.identify / "report_eddi.json");
    c.sindy = cli::load_report(c.identify / "report_sindy.json");
  } catch (const std::exception& e) {
    std::printf("pipeline setup failed: %s\n", e.what());
    return 1;
  }

  run(1, "damping coefficients (energy method)", [&] { return damping_table(c); });
  run(2, "stiffness coefficients (force balance)", [&] { return stiffness_table(c); });
  run(3, "SINDy survivors", [&] { return sindy_columns(c); });
  run(4, "cross initial-condition validation", [&] { return cross_ic(c); });
  run(5, "energy balance with true coefficients", energy_balance);
  run(6, "randomised recovery suite", recovery_suite);
  run(7, "acceleration-only reconstruction", reconstruction);
  run(8, "simulator energy conservation", conservation);
  run(9, "scalogram ridge", [&] { return spectra(c); });
  run(10, "determinism", [&] { return determinism(c); });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
