#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eddikit/cli/config.hpp"
#include "eddikit/model.hpp"
#include "eddikit/phase1.hpp"
#include "eddikit/phase2.hpp"
#include "eddikit/sindy.hpp"

namespace eddikit::cli {

enum class TermRole { Damping, Stiffness };

struct CoefficientRow {
  TermRole role = TermRole::Damping;
  std::size_t library_index = 0;  // position in the configured candidate list
  BasisTerm term = BasisTerm::disp_power(1);
  double value = 0.0;
  bool active = true;  // false for terms eliminated by thresholding
};

struct ValidationMetric {
  InitialCondition ic;
  double nrmse = 0.0;
  std::string reference;  // "exact" or "measured"
};

struct Provenance {
  std::string tool = "eddikit 0.1.0";
  std::string config_sha256;
  std::string input_sha256;
  // No randomness in the pipeline; kept so reports from seeded studies fit.
  std::optional<std::uint64_t> seed;
  // Seconds since the epoch from SOURCE_DATE_EPOCH, or absent so repeated
  // runs stay byte-identical.
  std::optional<std::int64_t> created;
};

struct EnergyCurve {
  std::vector<double> gammas, dissipated_data, dissipated_model;
};

struct IdentificationReport {
  Method method = Method::Eddi;  // Eddi or Sindy
  double mass = 0.0;
  std::vector<CoefficientRow> coefficients;
  // Ordered name/value pairs; non-finite values serialize as null.
  std::vector<std::pair<std::string, double>> residuals;
  std::vector<std::pair<std::string, double>> condition;
  bool ill_conditioned = false;
  std::size_t crossings = 0;
  std::size_t iterations = 0;  // STLS passes
  bool reconstructed_input = false;
  EnergyCurve energy;
  std::optional<ClearanceSearch> clearance_search;
  std::vector<ValidationMetric> validation;
  Provenance provenance;

  // The identified equation of motion (inactive rows dropped).
  ModelSpec model() const;
};

IdentificationReport eddi_report(double mass, const DampingFit& damping, const StiffnessFit& stiffness,
                                 std::size_t crossings);
IdentificationReport sindy_report(double mass, const IdentifySection& lib, const SindyFit& fit);

std::optional<std::int64_t> source_date_epoch();

std::string report_to_json(const IdentificationReport& report);
// Throws Io on malformed documents.
IdentificationReport report_from_json(const std::string& text, const std::string& source = "<report>");
IdentificationReport load_report(const std::filesystem::path& path);
void save_report(const std::filesystem::path& path, const IdentificationReport& report);

}  // namespace eddikit::cli
