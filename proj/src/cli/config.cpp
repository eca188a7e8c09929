#include "eddikit/cli/config.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <sstream>
#include <string_view>

#include "eddikit/error.hpp"

namespace eddikit::cli {

Method parse_method(const std::string& text) {
  if (text == "eddi") return Method::Eddi;
  if (text == "sindy") return Method::Sindy;
  if (text == "both") return Method::Both;
  fail(ErrorKind::Config, "method must be eddi, sindy or both (got '" + text + "')");
}

const char* method_name(Method m) noexcept {
  switch (m) {
    case Method::Eddi: return "eddi";
    case Method::Sindy: return "sindy";
    case Method::Both: return "both";
  }
  return "?";
}

double RunConfig::identification_mass() const {
  if (identify && identify->mass) return *identify->mass;
  if (model) return model->mass();
  fail(ErrorKind::Config, source + ": identify.mass is required when there is no model section");
}

SimConfig RunConfig::sim_config() const {
  if (!sim) fail(ErrorKind::Config, source + ": missing 'sim' section");
  SimConfig cfg = sim->sim;
  if (sim->impulse) cfg.forcing = *sim->impulse;
  return cfg;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::Io, "SHA-256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void error(const YAML::Node& at, const std::string& msg) const {
    const YAML::Mark m = at.Mark();
    if (m.line < 0) fail(ErrorKind::Config, source_ + ": " + msg);
    fail(ErrorKind::Config, source_ + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1) +
                                ": " + msg);
  }

  void require_map(const YAML::Node& n, const std::string& what) const {
    if (!n.IsMap()) error(n, "'" + what + "' must be a mapping");
  }

  void check_keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed,
                  const std::string& what) const {
    require_map(map, what);
    for (const auto& kv : map) {
      const auto key = kv.first.Scalar();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        std::string list;
        for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
        error(kv.first, "unknown key '" + key + "' in " + what + " (allowed: " + list + ")");
      }
    }
  }

  double number(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) error(n, what + " must be a number");
    const std::string& s = n.Scalar();
    double value = 0.0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
      error(n, what + " must be a finite number (got '" + s + "')");
    }
    return value;
  }

  long integer(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) error(n, what + " must be an integer");
    const std::string& s = n.Scalar();
    long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) error(n, what + " must be an integer (got '" + s + "')");
    return value;
  }

  std::size_t count(const YAML::Node& n, const std::string& what) const {
    const long v = integer(n, what);
    if (v < 1) error(n, what + " must be positive");
    return static_cast<std::size_t>(v);
  }

  bool boolean(const YAML::Node& n, const std::string& what) const {
    if (n.IsScalar()) {
      const std::string& s = n.Scalar();
      if (s == "true") return true;
      if (s == "false") return false;
    }
    error(n, what + " must be true or false");
  }

  std::string text(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) error(n, what + " must be a string");
    return n.Scalar();
  }

  // One term entry: {kind, power?, clearance?, coefficient?}.
  BasisTerm term(const YAML::Node& n, const std::string& what, std::optional<double> default_clearance,
                 bool want_coefficient, double* coefficient) const {
    if (want_coefficient) {
      check_keys(n, {"kind", "power", "clearance", "coefficient"}, what);
    } else {
      check_keys(n, {"kind", "power", "clearance"}, what);
    }
    if (!n["kind"]) error(n, what + " needs a 'kind'");
    const auto kind_text = text(n["kind"], what + ".kind");
    const auto kind = parse_kind_name(kind_text);
    if (!kind) error(n["kind"], "unknown term kind '" + kind_text + "'");

    const bool powered = *kind == TermKind::DispPower || *kind == TermKind::VelPower;
    const bool gated = !powered && *kind != TermKind::MixedDispSqVel;
    if (powered && !n["power"]) error(n, what + ": kind " + kind_text + " needs 'power'");
    if (!powered && n["power"]) error(n["power"], what + ": kind " + kind_text + " takes no 'power'");
    if (!gated && n["clearance"]) error(n["clearance"], what + ": kind " + kind_text + " takes no 'clearance'");
    std::optional<double> clearance = default_clearance;
    if (n["clearance"]) clearance = number(n["clearance"], what + ".clearance");
    if (gated && !clearance) error(n, what + ": kind " + kind_text + " needs 'clearance'");
    if (want_coefficient) {
      if (!n["coefficient"]) error(n, what + " needs a 'coefficient'");
      *coefficient = number(n["coefficient"], what + ".coefficient");
    }

    try {
      switch (*kind) {
        case TermKind::DispPower: return BasisTerm::disp_power(static_cast<int>(integer(n["power"], what + ".power")));
        case TermKind::VelPower: return BasisTerm::vel_power(static_cast<int>(integer(n["power"], what + ".power")));
        case TermKind::MixedDispSqVel: return BasisTerm::mixed_disp_sq_vel();
        case TermKind::VelGateOneSided: return BasisTerm::vel_gate_one_sided(*clearance);
        case TermKind::VelGateTwoSided: return BasisTerm::vel_gate_two_sided(*clearance);
        case TermKind::ClearanceSpringOneSided: return BasisTerm::clearance_spring_one_sided(*clearance);
        case TermKind::ClearanceSpringTwoSided: return BasisTerm::clearance_spring_two_sided(*clearance);
      }
    } catch (const Error& e) {
      error(n, what + ": " + e.what());
    }
    error(n, what + ": unsupported kind");
  }

  std::vector<WeightedTerm> weighted_list(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence()) error(n, "'" + what + "' must be a list of terms");
    std::vector<WeightedTerm> out;
    for (std::size_t i = 0; i < n.size(); ++i) {
      double c = 0.0;
      const auto label = what + "[" + std::to_string(i) + "]";
      auto t = term(n[i], label, std::nullopt, true, &c);
      out.push_back({t, c});
    }
    return out;
  }

  std::vector<BasisTerm> library(const YAML::Node& n, const std::string& what,
                                 std::optional<double> default_clearance) const {
    if (!n.IsSequence() || n.size() == 0) error(n, "'" + what + "' must be a non-empty list of terms");
    std::vector<BasisTerm> out;
    for (std::size_t i = 0; i < n.size(); ++i) {
      out.push_back(term(n[i], what + "[" + std::to_string(i) + "]", default_clearance, false, nullptr));
    }
    try {
      require_distinct(out, what);
    } catch (const Error& e) {
      error(n, e.what());
    }
    return out;
  }

  ModelSpec model(const YAML::Node& n) const {
    check_keys(n, {"mass", "damping", "stiffness"}, "model");
    if (!n["mass"]) error(n, "model needs 'mass'");
    const double mass = number(n["mass"], "model.mass");
    std::vector<WeightedTerm> damping, stiffness;
    if (n["damping"]) damping = weighted_list(n["damping"], "model.damping");
    if (n["stiffness"]) stiffness = weighted_list(n["stiffness"], "model.stiffness");
    try {
      return ModelSpec(mass, std::move(damping), std::move(stiffness));
    } catch (const Error& e) {
      error(n, std::string("model: ") + e.what());
    }
  }

  SimSection sim(const YAML::Node& n) const {
    check_keys(n, {"t_start", "t_end", "rel_tol", "abs_tol", "output_rate", "initial_condition", "impulse"}, "sim");
    SimSection s;
    auto& c = s.sim;
    if (n["t_start"]) c.t_start = number(n["t_start"], "sim.t_start");
    if (n["t_end"]) c.t_end = number(n["t_end"], "sim.t_end");
    if (n["rel_tol"]) c.rel_tol = number(n["rel_tol"], "sim.rel_tol");
    if (n["abs_tol"]) c.abs_tol = number(n["abs_tol"], "sim.abs_tol");
    if (n["output_rate"]) c.output_rate = number(n["output_rate"], "sim.output_rate");
    if (const auto ic = n["initial_condition"]) c.ic = initial_condition(ic, "sim.initial_condition");
    if (const auto p = n["impulse"]) {
      check_keys(p, {"amplitude", "t_center", "width"}, "sim.impulse");
      HalfSinePulse pulse;
      for (const char* key : {"amplitude", "t_center", "width"}) {
        if (!p[key]) error(p, std::string("sim.impulse needs '") + key + "'");
      }
      pulse.amplitude = number(p["amplitude"], "sim.impulse.amplitude");
      pulse.t_center = number(p["t_center"], "sim.impulse.t_center");
      pulse.width = number(p["width"], "sim.impulse.width");
      if (!(pulse.width > 0.0)) error(p["width"], "sim.impulse.width must be positive");
      s.impulse = pulse;
    }
    try {
      c.validate();
    } catch (const Error& e) {
      error(n, std::string("sim: ") + e.what());
    }
    return s;
  }

  InitialCondition initial_condition(const YAML::Node& n, const std::string& what) const {
    check_keys(n, {"x0", "v0"}, what);
    InitialCondition ic;
    if (n["x0"]) ic.x0 = number(n["x0"], what + ".x0");
    if (n["v0"]) ic.v0 = number(n["v0"], what + ".v0");
    return ic;
  }

  IdentifySection identify(const YAML::Node& n) const {
    check_keys(n, {"mass", "method", "clearance", "damping_library", "stiffness_library", "damping_threshold",
                   "sindy", "clearance_search", "fit_start_time"},
               "identify");
    IdentifySection s;
    if (n["mass"]) {
      s.mass = number(n["mass"], "identify.mass");
      if (!(*s.mass > 0.0)) error(n["mass"], "identify.mass must be positive");
    }
    if (n["method"]) {
      try {
        s.method = parse_method(text(n["method"], "identify.method"));
      } catch (const Error& e) {
        error(n["method"], e.what());
      }
    }
    std::optional<double> e;
    if (n["clearance"]) {
      e = number(n["clearance"], "identify.clearance");
      if (!(*e > 0.0)) error(n["clearance"], "identify.clearance must be positive");
    }
    if (!n["damping_library"]) error(n, "identify needs 'damping_library'");
    if (!n["stiffness_library"]) error(n, "identify needs 'stiffness_library'");
    s.damping_library = library(n["damping_library"], "identify.damping_library", e);
    s.stiffness_library = library(n["stiffness_library"], "identify.stiffness_library", e);
    for (std::size_t i = 0; i < s.damping_library.size(); ++i) {
      if (!s.damping_library[i].involves_velocity()) {
        error(n["damping_library"][i], "damping candidate " + s.damping_library[i].describe() + " does not involve velocity");
      }
    }
    for (std::size_t i = 0; i < s.stiffness_library.size(); ++i) {
      if (s.stiffness_library[i].involves_velocity()) {
        error(n["stiffness_library"][i], "stiffness candidate " + s.stiffness_library[i].describe() + " involves velocity");
      }
    }
    if (n["damping_threshold"]) {
      s.damping_threshold = number(n["damping_threshold"], "identify.damping_threshold");
      if (!(*s.damping_threshold >= 0.0)) error(n["damping_threshold"], "identify.damping_threshold must be non-negative");
    }
    if (const auto sn = n["sindy"]) {
      check_keys(sn, {"lambda", "max_iters"}, "identify.sindy");
      if (sn["lambda"]) {
        s.sindy.lambda = number(sn["lambda"], "identify.sindy.lambda");
        if (!(s.sindy.lambda >= 0.0)) error(sn["lambda"], "identify.sindy.lambda must be non-negative");
      }
      if (sn["max_iters"]) s.sindy.max_iters = count(sn["max_iters"], "identify.sindy.max_iters");
    }
    if (const auto cs = n["clearance_search"]) {
      check_keys(cs, {"min", "max", "points"}, "identify.clearance_search");
      for (const char* key : {"min", "max", "points"}) {
        if (!cs[key]) error(cs, std::string("identify.clearance_search needs '") + key + "'");
      }
      ClearanceSearchSection c;
      c.e_min = number(cs["min"], "identify.clearance_search.min");
      c.e_max = number(cs["max"], "identify.clearance_search.max");
      c.points = count(cs["points"], "identify.clearance_search.points");
      if (!(c.e_min > 0.0) || !(c.e_max > c.e_min) || c.points < 2) {
        error(cs, "identify.clearance_search needs 0 < min < max and at least two points");
      }
      s.clearance_search = c;
    }
    if (n["fit_start_time"]) s.fit_start_time = number(n["fit_start_time"], "identify.fit_start_time");
    return s;
  }

  PreprocessSection preprocess(const YAML::Node& n) const {
    check_keys(n, {"filter_order", "cutoff_hz", "force_threshold_ratio", "energy_floor_ratio", "end_time"},
               "preprocess");
    PreprocessSection s;
    if (n["filter_order"]) {
      const long order = integer(n["filter_order"], "preprocess.filter_order");
      if (order < 1 || order > 12) error(n["filter_order"], "preprocess.filter_order must be in [1, 12]");
      s.filter_order = static_cast<int>(order);
    }
    if (n["cutoff_hz"]) {
      s.cutoff_hz = number(n["cutoff_hz"], "preprocess.cutoff_hz");
      if (!(s.cutoff_hz > 0.0)) error(n["cutoff_hz"], "preprocess.cutoff_hz must be positive");
    }
    if (n["force_threshold_ratio"]) {
      s.crossings.force_threshold_ratio = number(n["force_threshold_ratio"], "preprocess.force_threshold_ratio");
    }
    if (n["energy_floor_ratio"]) {
      s.crossings.energy_floor_ratio = number(n["energy_floor_ratio"], "preprocess.energy_floor_ratio");
    }
    if (n["end_time"]) s.crossings.end_time = number(n["end_time"], "preprocess.end_time");
    return s;
  }

  std::vector<InitialCondition> validation(const YAML::Node& n) const {
    check_keys(n, {"initial_conditions"}, "validation");
    std::vector<InitialCondition> out;
    if (!n["initial_conditions"]) return out;
    const auto list = n["initial_conditions"];
    if (!list.IsSequence()) error(list, "validation.initial_conditions must be a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      out.push_back(initial_condition(list[i], "validation.initial_conditions[" + std::to_string(i) + "]"));
    }
    return out;
  }

  SpectraSection spectra(const YAML::Node& n) const {
    check_keys(n, {"f_min", "f_max", "points", "center_freq", "max_columns"}, "spectra");
    SpectraSection s;
    if (n["f_min"]) s.f_min = number(n["f_min"], "spectra.f_min");
    if (n["f_max"]) s.f_max = number(n["f_max"], "spectra.f_max");
    if (n["points"]) s.points = count(n["points"], "spectra.points");
    if (n["center_freq"]) s.center_freq = number(n["center_freq"], "spectra.center_freq");
    if (n["max_columns"]) s.max_columns = count(n["max_columns"], "spectra.max_columns");
    if (!(s.f_min > 0.0) || !(s.f_max > s.f_min) || s.points < 2) {
      error(n, "spectra needs 0 < f_min < f_max and at least two points");
    }
    if (!(s.center_freq > 0.0)) error(n, "spectra.center_freq must be positive");
    return s;
  }

  OutputSection output(const YAML::Node& n) const {
    check_keys(n, {"svg"}, "output");
    OutputSection s;
    if (n["svg"]) s.svg = boolean(n["svg"], "output.svg");
    return s;
  }

 private:
  std::string source_;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    fail(ErrorKind::Config, source + ":" + std::to_string(e.mark.line + 1) + ":" +
                                std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  const Reader r(source);
  if (!root.IsMap()) fail(ErrorKind::Config, source + ": top level must be a mapping");
  r.check_keys(root, {"schema_version", "model", "sim", "identify", "preprocess", "validation", "spectra", "output"},
               "the top level");

  RunConfig cfg;
  cfg.source = source;
  cfg.sha256 = sha256_hex(text);
  if (!root["schema_version"]) r.error(root, "missing 'schema_version'");
  cfg.schema_version = static_cast<int>(r.integer(root["schema_version"], "schema_version"));
  if (cfg.schema_version != kSchemaVersion) {
    r.error(root["schema_version"], "unsupported schema_version " + std::to_string(cfg.schema_version) +
                                        " (this build reads " + std::to_string(kSchemaVersion) + ")");
  }
  if (root["model"]) cfg.model = r.model(root["model"]);
  if (root["sim"]) cfg.sim = r.sim(root["sim"]);
  if (root["identify"]) cfg.identify = r.identify(root["identify"]);
  if (root["preprocess"]) cfg.preprocess = r.preprocess(root["preprocess"]);
  if (root["validation"]) cfg.validation_ics = r.validation(root["validation"]);
  if (root["spectra"]) cfg.spectra = r.spectra(root["spectra"]);
  if (root["output"]) cfg.output = r.output(root["output"]);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.string());
}

}  // namespace eddikit::cli
