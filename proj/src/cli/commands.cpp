#include "eddikit/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "eddikit/cli/csv.hpp"
#include "eddikit/cli/svg.hpp"
#include "eddikit/parallel.hpp"
#include "eddikit/simulator.hpp"
#include "eddikit/spectra.hpp"

namespace eddikit::cli {

namespace fs = std::filesystem;

int exit_code_for(const Error& e) noexcept {
  switch (e.category()) {
    case ErrorCategory::Usage: return kExitUsage;
    case ErrorCategory::Config: return kExitConfig;
    case ErrorCategory::Numerical: return kExitNumerical;
    case ErrorCategory::Io: return kExitIo;
  }
  return kExitNumerical;
}

double nrmse(std::span<const double> x_id, std::span<const double> x_ref) {
  if (x_id.size() != x_ref.size() || x_ref.empty()) {
    fail(ErrorKind::InvalidArgument, "NRMSE needs two series of equal, nonzero length");
  }
  double err = 0.0, ref = 0.0;
  for (std::size_t k = 0; k < x_ref.size(); ++k) {
    const double d = x_id[k] - x_ref[k];
    err += d * d;
    ref += x_ref[k] * x_ref[k];
  }
  if (ref == 0.0) return err == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(err / ref);
}

namespace {

class Log {
 public:
  explicit Log(const CommandOptions& o) : quiet_(o.quiet), out_(o.log ? o.log : &std::cerr) {}
  template <class... Args>
  void operator()(const Args&... args) const {
    if (quiet_) return;
    ((*out_) << ... << args) << '\n';
  }

 private:
  bool quiet_;
  std::ostream* out_;
};

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) fail(ErrorKind::Io, "cannot create directory '" + dir.string() + "'");
}

// Runs a stage, prefixing any library error with what was being attempted.
template <class F>
auto stage(const char* what, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw e.with_context(what);
  }
}

std::vector<double> times_of(const TimeAxis& axis) {
  std::vector<double> t(axis.size);
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = axis.at(k);
  return t;
}

void write_columns(const fs::path& path, std::vector<std::string> header,
                   std::initializer_list<std::span<const double>> cols) {
  const std::vector<std::span<const double>> c(cols);
  write_csv(path, header, c);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void log_terms(const Log& log, const IdentificationReport& r) {
  for (const auto& row : r.coefficients) {
    if (!row.active) continue;
    log("  ", row.role == TermRole::Damping ? "B " : "K ", row.term.describe(), " = ", sci(row.value), " ",
        row.term.coefficient_unit());
  }
}

}  // namespace

IdentificationOutcome run_identification(const Trajectory& traj, const IdentifySection& identify,
                                         const PreprocessSection& preprocess, Method method) {
  IdentificationOutcome out;
  const std::size_t first_fit = first_sample_at(traj.axis(), identify.fit_start_time);
  if (method != Method::Sindy) {
    EddiOutcome e{};
    e.crossings = stage("selecting zero crossings",
                        [&] { return crossings_for_identification(traj, preprocess.crossings); });
    e.damping = stage("phase 1 (damping)", [&] {
      return identify_damping(traj, e.crossings, identify.damping_library, Phase1Options{identify.damping_threshold});
    });
    e.series = stage("conservative force", [&] { return conservative_force(traj, e.damping.terms); });
    // Under forcing, the stiffness regression uses the same free-decay window as phase 1.
    std::size_t first = first_fit;
    if (traj.is_forced()) {
      first = std::max(first, static_cast<std::size_t>(std::ceil(e.crossings.positions.front())));
    }
    std::vector<BasisTerm> library = identify.stiffness_library;
    if (identify.clearance_search) {
      const auto& cs = *identify.clearance_search;
      e.clearance_search = stage("clearance search", [&] {
        return search_clearance(e.series, library, cs.e_min, cs.e_max, cs.points, first);
      });
      for (auto& t : library) t = t.with_clearance(e.clearance_search->best_clearance);
    }
    e.stiffness = stage("phase 2 (stiffness)", [&] { return identify_stiffness(e.series, library, first); });
    e.report = eddi_report(traj.mass(), e.damping, e.stiffness, e.crossings.size());
    e.report.clearance_search = e.clearance_search;
    out.eddi = std::move(e);
  }
  if (method != Method::Eddi) {
    std::vector<BasisTerm> library = identify.damping_library;
    library.insert(library.end(), identify.stiffness_library.begin(), identify.stiffness_library.end());
    SindyOutcome s{};
    s.fit = stage("SINDy", [&] { return sindy_identify(traj, library, identify.sindy, first_fit); });
    s.report = sindy_report(traj.mass(), identify, s.fit);
    out.sindy = std::move(s);
  }
  return out;
}

void cmd_simulate(const fs::path& config, const fs::path& out, const CommandOptions& opts) {
  const Log log(opts);
  const RunConfig cfg = load_config(config);
  if (!cfg.model) fail(ErrorKind::Config, cfg.source + ": simulate needs a 'model' section");
  const SimConfig sim = cfg.sim_config();
  SimStats stats;
  const Trajectory traj = stage("simulation", [&] { return simulate(*cfg.model, sim, &stats); });
  if (out.has_parent_path()) ensure_directory(out.parent_path());
  write_trajectory_csv(out, traj);
  log("simulate: ", traj.size(), " samples at ", sim.output_rate, " Hz -> ", out.string(), " (", stats.accepted,
      " steps accepted, ", stats.rejected, " rejected)");
}

void cmd_identify(const fs::path& config, const fs::path& input, const fs::path& out_dir,
                  std::optional<Method> method, const CommandOptions& opts) {
  const Log log(opts);
  const RunConfig cfg = load_config(config);
  if (!cfg.identify) fail(ErrorKind::Config, cfg.source + ": identify needs an 'identify' section");
  const IdentifySection& id = *cfg.identify;
  const Method m = method.value_or(id.method);
  const double mass = cfg.identification_mass();

  const std::string input_bytes = read_file(input);
  const LoadedRecord rec = stage("reading input", [&] {
    return read_record(input, mass, cfg.preprocess.filter_order, cfg.preprocess.cutoff_hz);
  });
  if (rec.reconstructed) log("identify: rebuilt velocity and displacement from acceleration");
  const Trajectory& traj = rec.trajectory;

  IdentificationOutcome result = run_identification(traj, id, cfg.preprocess, m);

  Provenance prov;
  prov.config_sha256 = cfg.sha256;
  prov.input_sha256 = sha256_hex(input_bytes);
  prov.created = source_date_epoch();

  // Everything is computed; now write.
  ensure_directory(out_dir);
  if (result.eddi) {
    auto& e = *result.eddi;
    e.report.provenance = prov;
    e.report.reconstructed_input = rec.reconstructed;
    save_report(out_dir / "report_eddi.json", e.report);

    std::vector<double> x, kd, km;
    for (const auto& s : e.stiffness.restoring_force) {
      x.push_back(s.x);
      kd.push_back(s.K_data);
      km.push_back(s.K_model);
    }
    write_columns(out_dir / "restoring_force_eddi.csv", {"x", "K_data", "K_model"}, {x, kd, km});

    const EnergyTrace energy = dissipated_energy_of_model(traj, e.damping.terms, e.crossings);
    const auto t = times_of(energy.axis);
    write_columns(out_dir / "dissipated_energy.csv", {"t", "kinetic", "dissipated", "mechanical"},
                  {t, energy.kinetic, energy.dissipated, energy.mechanical});
    write_columns(out_dir / "dissipated_energy_crossings.csv", {"gamma", "D_data", "D_model"},
                  {e.damping.gammas, e.damping.dissipated_data, e.damping.dissipated_model});

    if (cfg.output.svg) {
      svg::write(out_dir / "restoring_force_eddi.svg",
                 svg::render(svg::LinePlot{"Restoring force (EDDI)", "x [m]", "K [N]",
                                           {{"data", x, kd, "#9aa7b8", true}, {"model", x, km, "#b22222", true}}}));
      svg::write(out_dir / "dissipated_energy.svg",
                 svg::render(svg::LinePlot{"Dissipated energy at zero crossings", "t [s]", "D [J]",
                                           {{"T(gamma_0) - T(gamma_i)", e.damping.gammas, e.damping.dissipated_data,
                                             "#1f4e79", true},
                                            {"model", e.damping.gammas, e.damping.dissipated_model, "#b22222", false}}}));
    }
    log("identify (eddi): ", e.crossings.size(), " crossings, phase 1 relative residual ",
        sci(e.damping.relative_residual), ", phase 2 relative RMS ", sci(e.stiffness.relative_rms));
    if (e.report.ill_conditioned) log("identify (eddi): warning: ill-conditioned least-squares system");
    log_terms(log, e.report);
  }
  if (result.sindy) {
    auto& s = *result.sindy;
    s.report.provenance = prov;
    s.report.reconstructed_input = rec.reconstructed;
    save_report(out_dir / "report_sindy.json", s.report);

    const auto damping = s.fit.damping();
    const auto stiffness = s.fit.stiffness();
    std::vector<double> x(traj.x().begin(), traj.x().end()), kd(traj.size()), km(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
      kd[k] = traj.f_ext()[k] - traj.mass() * traj.a()[k] - eval_terms(damping, traj.x()[k], traj.v()[k]);
      km[k] = eval_terms(stiffness, traj.x()[k], 0.0);
    }
    write_columns(out_dir / "restoring_force_sindy.csv", {"x", "K_data", "K_model"}, {x, kd, km});
    if (cfg.output.svg) {
      svg::write(out_dir / "restoring_force_sindy.svg",
                 svg::render(svg::LinePlot{"Restoring force (SINDy)", "x [m]", "K [N]",
                                           {{"data", x, kd, "#9aa7b8", true}, {"model", x, km, "#b22222", true}}}));
    }
    log("identify (sindy): ", s.fit.iterations, " passes, relative RMS ", sci(s.fit.relative_rms));
    log_terms(log, s.report);
  }
}

std::vector<ValidationMetric> cmd_validate(const fs::path& report_path, const fs::path& config,
                                           const fs::path& out_dir, const std::optional<fs::path>& reference,
                                           const CommandOptions& opts) {
  const Log log(opts);
  IdentificationReport report = load_report(report_path);
  const RunConfig cfg = load_config(config);
  const ModelSpec identified = stage("composing the identified model", [&] { return report.model(); });

  struct Run {
    std::string name;
    std::string reference_kind;
    InitialCondition ic;
    std::vector<double> t, x_ref, x_id;
    double nrmse = 0.0;
  };
  std::vector<Run> runs;

  if (reference) {
    const LoadedRecord rec = read_record(*reference, report.mass, cfg.preprocess.filter_order,
                                         cfg.preprocess.cutoff_hz);
    const Trajectory& meas = rec.trajectory;
    SimConfig sim;
    if (cfg.sim) sim = cfg.sim->sim;
    sim.t_start = meas.axis().t0;
    sim.t_end = meas.axis().back();
    sim.output_rate = meas.axis().rate();
    sim.ic = {meas.x()[0], meas.v()[0]};
    sim.forcing = std::monostate{};
    if (meas.is_forced()) sim.forcing = SampledSignal(meas.axis(), {meas.f_ext().begin(), meas.f_ext().end()});
    const Trajectory sim_id = stage("simulating the identified model", [&] { return simulate(identified, sim); });
    const std::size_t n = std::min(sim_id.size(), meas.size());
    Run r{"measured", "measured", sim.ic, {}, {}, {}, 0.0};
    r.t = times_of(meas.axis());
    r.t.resize(n);
    r.x_ref.assign(meas.x().begin(), meas.x().begin() + static_cast<std::ptrdiff_t>(n));
    r.x_id.assign(sim_id.x().begin(), sim_id.x().begin() + static_cast<std::ptrdiff_t>(n));
    r.nrmse = nrmse(r.x_id, r.x_ref);
    runs.push_back(std::move(r));
  } else {
    if (!cfg.model) {
      fail(ErrorKind::Config, cfg.source + ": validate needs a 'model' section or a measured reference trajectory");
    }
    const SimConfig base = cfg.sim_config();
    const auto& ics = cfg.validation_ics;
    if (ics.empty()) fail(ErrorKind::Config, cfg.source + ": validation.initial_conditions is empty");
    runs.resize(ics.size());
    // Independent initial conditions simulate concurrently.
    parallel_for(ics.size(), [&](std::size_t i) {
      SimConfig sim = base;
      sim.ic = ics[i];
      const Trajectory ref = stage("simulating the exact model", [&] { return simulate(*cfg.model, sim); });
      const Trajectory id = stage("simulating the identified model", [&] { return simulate(identified, sim); });
      Run& r = runs[i];
      r.name = "ic" + std::to_string(i + 1);
      r.reference_kind = "exact";
      r.ic = ics[i];
      r.t = times_of(ref.axis());
      r.x_ref.assign(ref.x().begin(), ref.x().end());
      r.x_id.assign(id.x().begin(), id.x().end());
      r.nrmse = nrmse(r.x_id, r.x_ref);
    });
  }

  ensure_directory(out_dir);
  std::vector<ValidationMetric> metrics;
  nlohmann::ordered_json doc;
  doc["report"] = report_path.filename().string();
  doc["method"] = method_name(report.method);
  doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& r : runs) {
    const std::string csv = "validation_" + r.name + ".csv";
    write_columns(out_dir / csv, {"t", "x_ref", "x_id"}, {r.t, r.x_ref, r.x_id});
    if (cfg.output.svg) {
      svg::write(out_dir / ("validation_" + r.name + ".svg"),
                 svg::render(svg::LinePlot{"Validation, x0 = " + sci(r.ic.x0) + " m, v0 = " + sci(r.ic.v0) + " m/s",
                                           "t [s]", "x [m]",
                                           {{r.reference_kind, r.t, r.x_ref, "#1f4e79", false},
                                            {"identified", r.t, r.x_id, "#b22222", false}}}));
    }
    metrics.push_back({r.ic, r.nrmse, r.reference_kind});
    doc["entries"].push_back({{"x0", r.ic.x0},
                              {"v0", r.ic.v0},
                              {"reference", r.reference_kind},
                              {"nrmse", std::isfinite(r.nrmse) ? nlohmann::ordered_json(r.nrmse) : nullptr},
                              {"series", csv}});
    log("validate: x0 = ", r.ic.x0, ", v0 = ", r.ic.v0, " -> NRMSE ", sci(r.nrmse), " vs ", r.reference_kind);
  }
  write_text(out_dir / "validation.json", doc.dump(2) + "\n");
  report.validation = metrics;
  save_report(out_dir / (report_path.stem().string() + "_validated.json"), report);
  return metrics;
}

void cmd_spectra(const fs::path& input, const fs::path& out_dir, const std::optional<fs::path>& config,
                 const CommandOptions& opts) {
  const Log log(opts);
  SpectraSection settings;
  bool svg_out = true;
  if (config) {
    const RunConfig cfg = load_config(*config);
    settings = cfg.spectra;
    svg_out = cfg.output.svg;
  }
  const CsvTable table = read_csv(input);
  if (!table.has_column("t")) fail(ErrorKind::Io, input.string() + ": no 't' column");
  const auto axis = uniform_axis(table.column("t"), input);
  std::vector<double> y;
  if (table.has_column("x")) {
    y = table.column("x");
  } else if (table.header.size() == 2) {
    y = table.columns[1];
  } else {
    fail(ErrorKind::Io, input.string() + ": expected an 'x' column or a two-column t,<signal> file");
  }
  const SampledSignal signal = stage("reading the signal", [&] { return SampledSignal(axis, y); });

  const Spectrum spectrum = fourier_spectrum(signal);
  const std::size_t stride = std::max<std::size_t>(1, (signal.size() + settings.max_columns - 1) / settings.max_columns);
  const auto freqs = log_frequency_grid(settings.f_min, settings.f_max, settings.points);
  const Scalogram sg = stage("wavelet transform", [&] { return cwt_morlet(signal, freqs, settings.center_freq, stride); });

  ensure_directory(out_dir);
  write_columns(out_dir / "spectrum.csv", {"freq_hz", "magnitude"}, {spectrum.freqs, spectrum.magnitude});

  // Wide layout: header row holds the frequencies, first column the times.
  std::vector<std::string> header{"t"};
  for (double f : sg.freqs) header.push_back(format_double(f));
  std::vector<std::vector<double>> columns(sg.freqs.size());
  for (std::size_t f = 0; f < sg.freqs.size(); ++f) {
    columns[f].assign(sg.magnitude.begin() + static_cast<std::ptrdiff_t>(f * sg.times.size()),
                      sg.magnitude.begin() + static_cast<std::ptrdiff_t>((f + 1) * sg.times.size()));
  }
  std::vector<std::span<const double>> spans{sg.times};
  for (const auto& c : columns) spans.emplace_back(c);
  write_csv(out_dir / "scalogram.csv", header, spans);

  const auto ridge = sg.ridge();
  std::vector<double> coi = sg.coi_hz;
  for (double& c : coi) {
    if (!std::isfinite(c)) c = 0.5 * axis.rate();
  }
  write_columns(out_dir / "scalogram_ridge.csv", {"t", "ridge_hz", "coi_hz"}, {sg.times, ridge, coi});

  if (svg_out) {
    std::vector<double> fs_, mag;
    for (std::size_t k = 0; k < spectrum.freqs.size() && spectrum.freqs[k] <= settings.f_max; ++k) {
      fs_.push_back(spectrum.freqs[k]);
      mag.push_back(spectrum.magnitude[k]);
    }
    svg::write(out_dir / "spectrum.svg",
               svg::render(svg::LinePlot{"Fourier spectrum", "f [Hz]", "|Y|", {{"", fs_, mag, "#1f4e79", false}}}));
    svg::write(out_dir / "scalogram.svg",
               svg::render(svg::Heatmap{"Morlet scalogram (normalised)", "t [s]", "f [Hz]", sg.times, sg.freqs,
                                        sg.magnitude}));
  }
  log("spectra: ", sg.freqs.size(), " scales x ", sg.times.size(), " times -> ", out_dir.string());
}

void cmd_report(const fs::path& report_path, const std::optional<fs::path>& config, std::ostream& out) {
  const IdentificationReport report = load_report(report_path);
  std::optional<ModelSpec> exact;
  if (config) exact = load_config(*config).model;

  auto exact_value = [&](const CoefficientRow& row) -> std::optional<double> {
    if (!exact) return std::nullopt;
    const auto& list = row.role == TermRole::Damping ? exact->damping() : exact->stiffness();
    for (const auto& w : list) {
      if (w.term == row.term) return w.coefficient;
    }
    return 0.0;
  };

  out << "# " << method_name(report.method) << " identification (" << report_path.filename().string() << ")\n\n";
  out << "mass: " << sci(report.mass) << " kg\n\n";
  out << (exact ? "| role | term | value | unit | exact | error |\n|---|---|---|---|---|---|\n"
                : "| role | term | value | unit |\n|---|---|---|---|\n");
  for (const auto& row : report.coefficients) {
    out << "| " << (row.role == TermRole::Damping ? "damping" : "stiffness") << " | " << row.term.describe()
        << " | " << (row.active ? sci(row.value) : "eliminated") << " | " << row.term.coefficient_unit() << " |";
    if (exact) {
      const double e = *exact_value(row);
      out << " " << sci(e) << " | ";
      if (e != 0.0) {
        out << sci(100.0 * std::abs(row.value - e) / std::abs(e)) << "% |";
      } else {
        out << "- |";
      }
    }
    out << "\n";
  }
  out << "\n";
  for (const auto& [name, v] : report.residuals) out << "residual " << name << ": " << sci(v) << "\n";
  for (const auto& [name, v] : report.condition) out << "condition " << name << ": " << sci(v) << "\n";
  if (report.ill_conditioned) out << "warning: ill-conditioned least-squares system\n";
  for (const auto& m : report.validation) {
    out << "validation x0=" << sci(m.ic.x0) << " v0=" << sci(m.ic.v0) << ": NRMSE " << sci(m.nrmse) << " ("
        << m.reference << ")\n";
  }
}

}  // namespace eddikit::cli
