// eddikit command-line front end.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "eddikit/cli/commands.hpp"
#include "eddikit/kernels.hpp"

namespace cli = eddikit::cli;

int main(int argc, char** argv) {
  CLI::App app{"Equation-of-motion identification for oscillators with clearance nonlinearities"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet,-q", quiet, "Suppress progress messages");
  app.set_version_flag("--version", "eddikit 0.1.0");

  std::string config, input, out, method, reference;

  auto* simulate = app.add_subcommand("simulate", "Simulate the configured model and write a trajectory CSV");
  simulate->add_option("--config", config, "Run configuration (YAML)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", out, "Output trajectory CSV")->required();

  auto* identify = app.add_subcommand("identify", "Identify damping and stiffness models from a record");
  identify->add_option("--config", config, "Run configuration (YAML)")->required()->check(CLI::ExistingFile);
  identify->add_option("--input", input, "Trajectory CSV (t,x,v,a,f_ext) or acceleration CSV (t,a)")->required();
  identify->add_option("--out", out, "Output directory")->required();
  identify->add_option("--method", method, "eddi, sindy or both (overrides the config)")
      ->check(CLI::IsMember({"eddi", "sindy", "both"}));

  auto* validate = app.add_subcommand("validate", "Re-simulate an identified model against references");
  validate->add_option("--input", input, "Report JSON from identify")->required();
  validate->add_option("--config", config, "Run configuration (YAML)")->required()->check(CLI::ExistingFile);
  validate->add_option("--out", out, "Output directory")->required();
  validate->add_option("--reference", reference, "Measured trajectory CSV to compare against instead");

  auto* spectra = app.add_subcommand("spectra", "Fourier spectrum and Morlet scalogram of a record");
  spectra->add_option("--input", input, "Trajectory CSV or two-column t,<signal> CSV")->required();
  spectra->add_option("--out", out, "Output directory")->required();
  spectra->add_option("--config", config, "Run configuration with a 'spectra' section");

  auto* report = app.add_subcommand("report", "Print a report's coefficient table as Markdown");
  report->add_option("--input", input, "Report JSON")->required();
  report->add_option("--config", config, "Configuration whose model gives the exact values");
  report->add_option("--out", out, "Write the table to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  const cli::CommandOptions opts{quiet, nullptr};
  auto optional_path = [](const std::string& s) -> std::optional<std::filesystem::path> {
    if (s.empty()) return std::nullopt;
    return std::filesystem::path(s);
  };

  try {
    if (!quiet) std::cerr << "eddikit: kernels " << eddikit::kernels::isa_name(eddikit::kernels::active_isa()) << "\n";
    if (*simulate) {
      cli::cmd_simulate(config, out, opts);
    } else if (*identify) {
      std::optional<cli::Method> m;
      if (!method.empty()) m = cli::parse_method(method);
      cli::cmd_identify(config, input, out, m, opts);
    } else if (*validate) {
      cli::cmd_validate(input, config, out, optional_path(reference), opts);
    } else if (*spectra) {
      cli::cmd_spectra(input, out, optional_path(config), opts);
    } else if (*report) {
      if (out.empty()) {
        cli::cmd_report(input, optional_path(config), std::cout);
      } else {
        std::ofstream file(out);
        if (!file) throw eddikit::Error(eddikit::ErrorKind::Io, "cannot write '" + out + "'");
        cli::cmd_report(input, optional_path(config), file);
      }
    }
  } catch (const eddikit::Error& e) {
    std::cerr << "eddikit: error: " << e.what() << "\n";
    return cli::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "eddikit: internal error: " << e.what() << "\n";
    return cli::kExitNumerical;
  }
  return cli::kExitOk;
}
