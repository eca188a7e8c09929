#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eddikit/model.hpp"
#include "eddikit/preprocess.hpp"
#include "eddikit/simulator.hpp"
#include "eddikit/sindy.hpp"

namespace eddikit::cli {

inline constexpr int kSchemaVersion = 1;

enum class Method { Eddi, Sindy, Both };
Method parse_method(const std::string& text);  // throws Config
const char* method_name(Method m) noexcept;

// Simulation settings; forcing is a half-sine pulse or nothing.
struct SimSection {
  SimConfig sim;
  std::optional<HalfSinePulse> impulse;
};

struct ClearanceSearchSection {
  double e_min = 0.0;
  double e_max = 0.0;
  std::size_t points = 0;
};

struct IdentifySection {
  std::optional<double> mass;  // falls back to model.mass
  Method method = Method::Both;
  std::vector<BasisTerm> damping_library;
  std::vector<BasisTerm> stiffness_library;
  std::optional<double> damping_threshold;
  StlsConfig sindy;
  std::optional<ClearanceSearchSection> clearance_search;
  // Regression rows for the stiffness fit and SINDy start here.
  double fit_start_time = 0.0;
};

struct PreprocessSection {
  int filter_order = 3;
  double cutoff_hz = 1.5;
  CrossingOptions crossings;
};

struct SpectraSection {
  double f_min = 1.0;
  double f_max = 100.0;
  std::size_t points = 200;
  double center_freq = 6.0;
  std::size_t max_columns = 2000;
};

struct OutputSection {
  bool svg = true;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::optional<ModelSpec> model;
  std::optional<SimSection> sim;
  std::optional<IdentifySection> identify;
  PreprocessSection preprocess;
  std::vector<InitialCondition> validation_ics{{0.0, 0.5}, {0.0, 2.0}};
  SpectraSection spectra;
  OutputSection output;
  std::string sha256;  // of the config text
  std::string source;  // file name used in messages

  double identification_mass() const;  // identify.mass or model.mass; throws Config
  SimConfig sim_config() const;        // throws Config when the sim section is absent
};

// Errors are ErrorKind::Config with "source:line:column: message".
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

std::string sha256_hex(const std::string& bytes);
std::string read_file(const std::filesystem::path& path);  // throws Io

}  // namespace eddikit::cli
