#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "eddikit/cli/config.hpp"
#include "eddikit/cli/report.hpp"
#include "eddikit/error.hpp"
#include "eddikit/phase1.hpp"
#include "eddikit/phase2.hpp"
#include "eddikit/preprocess.hpp"
#include "eddikit/sindy.hpp"

namespace eddikit::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

int exit_code_for(const Error& e) noexcept;

struct EddiOutcome {
  CrossingSet crossings;
  DampingFit damping;
  ConservativeForceSeries series;
  StiffnessFit stiffness;
  std::optional<ClearanceSearch> clearance_search;
  IdentificationReport report;
};

struct SindyOutcome {
  SindyFit fit;
  IdentificationReport report;
};

struct IdentificationOutcome {
  std::optional<EddiOutcome> eddi;
  std::optional<SindyOutcome> sindy;
};

// The in-memory pipeline behind cmd_identify; reports carry no provenance.
IdentificationOutcome run_identification(const Trajectory& traj, const IdentifySection& identify,
                                         const PreprocessSection& preprocess, Method method);

// RMS(x_id - x_ref) / RMS(x_ref) over the full record.
double nrmse(std::span<const double> x_id, std::span<const double> x_ref);

struct CommandOptions {
  bool quiet = false;
  std::ostream* log = nullptr;  // progress messages; null means std::cerr
};

void cmd_simulate(const std::filesystem::path& config, const std::filesystem::path& out,
                  const CommandOptions& opts = {});

void cmd_identify(const std::filesystem::path& config, const std::filesystem::path& input,
                  const std::filesystem::path& out_dir, std::optional<Method> method = std::nullopt,
                  const CommandOptions& opts = {});

// Re-simulates the identified model (and the exact model when the config has
// one) at each validation initial condition. With a measured reference
// trajectory the identified model is driven by its recorded force from its
// recorded initial state instead. Returns the metrics written to disk.
std::vector<ValidationMetric> cmd_validate(const std::filesystem::path& report,
                                           const std::filesystem::path& config,
                                           const std::filesystem::path& out_dir,
                                           const std::optional<std::filesystem::path>& reference = std::nullopt,
                                           const CommandOptions& opts = {});

// Spectrum and scalogram of a trajectory's displacement (or the second
// column of any two-column t,<signal> CSV).
void cmd_spectra(const std::filesystem::path& input, const std::filesystem::path& out_dir,
                 const std::optional<std::filesystem::path>& config = std::nullopt,
                 const CommandOptions& opts = {});

// Coefficient table of a report as Markdown; with a config carrying a model,
// adds the generating values and relative errors.
void cmd_report(const std::filesystem::path& report, const std::optional<std::filesystem::path>& config,
                std::ostream& out);

}  // namespace eddikit::cli
