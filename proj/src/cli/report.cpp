#include "eddikit/cli/report.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include "eddikit/error.hpp"

namespace eddikit::cli {

using json = nlohmann::ordered_json;

ModelSpec IdentificationReport::model() const {
  std::vector<WeightedTerm> damping, stiffness;
  for (const auto& row : coefficients) {
    if (!row.active) continue;
    (row.role == TermRole::Damping ? damping : stiffness).push_back({row.term, row.value});
  }
  return ModelSpec(mass, std::move(damping), std::move(stiffness));
}

std::optional<std::int64_t> source_date_epoch() {
  const char* s = std::getenv("SOURCE_DATE_EPOCH");
  if (!s || !*s) return std::nullopt;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s, s + std::strlen(s), v);
  if (ec != std::errc() || *ptr != '\0') return std::nullopt;
  return v;
}

namespace {

std::vector<CoefficientRow> rows_for(TermRole role, const std::vector<WeightedTerm>& terms) {
  std::vector<CoefficientRow> out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    out.push_back({role, i, terms[i].term, terms[i].coefficient, terms[i].coefficient != 0.0});
  }
  return out;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json term_json(const BasisTerm& t) {
  json j;
  j["kind"] = std::string(kind_name(t.kind()));
  const bool powered = t.kind() == TermKind::DispPower || t.kind() == TermKind::VelPower;
  j["power"] = powered ? json(t.power()) : json(nullptr);
  j["clearance"] = t.has_clearance() ? json(t.clearance()) : json(nullptr);
  return j;
}

[[noreturn]] void bad(const std::string& source, const std::string& msg) {
  fail(ErrorKind::Io, source + ": " + msg);
}

double get_number(const json& j, const char* key, const std::string& source) {
  if (!j.contains(key)) bad(source, std::string("missing '") + key + "'");
  const auto& v = j.at(key);
  if (v.is_null()) return INFINITY;
  if (!v.is_number()) bad(source, std::string("'") + key + "' is not a number");
  return v.get<double>();
}

BasisTerm term_from_json(const json& j, const std::string& source) {
  const auto name = j.value("kind", std::string());
  const auto kind = parse_kind_name(name);
  if (!kind) bad(source, "unknown term kind '" + name + "'");
  auto power = [&] {
    if (!j.contains("power") || !j["power"].is_number_integer()) bad(source, "term " + name + " needs an integer power");
    return j["power"].get<int>();
  };
  auto clearance = [&] {
    if (!j.contains("clearance") || !j["clearance"].is_number()) bad(source, "term " + name + " needs a clearance");
    return j["clearance"].get<double>();
  };
  switch (*kind) {
    case TermKind::DispPower: return BasisTerm::disp_power(power());
    case TermKind::VelPower: return BasisTerm::vel_power(power());
    case TermKind::MixedDispSqVel: return BasisTerm::mixed_disp_sq_vel();
    case TermKind::VelGateOneSided: return BasisTerm::vel_gate_one_sided(clearance());
    case TermKind::VelGateTwoSided: return BasisTerm::vel_gate_two_sided(clearance());
    case TermKind::ClearanceSpringOneSided: return BasisTerm::clearance_spring_one_sided(clearance());
    case TermKind::ClearanceSpringTwoSided: return BasisTerm::clearance_spring_two_sided(clearance());
  }
  bad(source, "unsupported term kind");
}

}  // namespace

IdentificationReport eddi_report(double mass, const DampingFit& damping, const StiffnessFit& stiffness,
                                 std::size_t crossings) {
  IdentificationReport r;
  r.method = Method::Eddi;
  r.mass = mass;
  r.coefficients = rows_for(TermRole::Damping, damping.terms);
  auto k = rows_for(TermRole::Stiffness, stiffness.terms);
  r.coefficients.insert(r.coefficients.end(), k.begin(), k.end());
  r.residuals = {{"phase1_norm", damping.residual_norm},
                 {"phase1_relative", damping.relative_residual},
                 {"phase2_norm", stiffness.residual_norm},
                 {"phase2_relative_rms", stiffness.relative_rms}};
  r.condition = {{"phase1", damping.condition_estimate}, {"phase2", stiffness.condition_estimate}};
  r.ill_conditioned = damping.ill_conditioned || stiffness.ill_conditioned;
  r.crossings = crossings;
  r.energy = {damping.gammas, damping.dissipated_data, damping.dissipated_model};
  return r;
}

IdentificationReport sindy_report(double mass, const IdentifySection& lib, const SindyFit& fit) {
  IdentificationReport r;
  r.method = Method::Sindy;
  r.mass = mass;
  // fit.terms follows the combined library: damping candidates first.
  const std::size_t nd = lib.damping_library.size();
  for (std::size_t j = 0; j < fit.terms.size(); ++j) {
    const bool is_damping = j < nd;
    r.coefficients.push_back({is_damping ? TermRole::Damping : TermRole::Stiffness, is_damping ? j : j - nd,
                              fit.terms[j].term, fit.terms[j].coefficient, static_cast<bool>(fit.active[j])});
  }
  r.residuals = {{"norm", fit.residual_norm}, {"relative_rms", fit.relative_rms}};
  r.condition = {{"final_fit", fit.condition_estimate}};
  r.ill_conditioned = fit.condition_estimate > kIllConditioned;
  r.iterations = fit.iterations;
  return r;
}

std::string report_to_json(const IdentificationReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["method"] = method_name(r.method);
  j["mass"] = r.mass;
  j["input_reconstructed"] = r.reconstructed_input;

  json rows = json::array();
  for (const auto& row : r.coefficients) {
    json c;
    c["role"] = row.role == TermRole::Damping ? "damping" : "stiffness";
    c["library_index"] = row.library_index;
    c["term"] = row.term.describe();
    c.update(term_json(row.term));
    c["value"] = row.value;
    c["unit"] = row.term.coefficient_unit();
    c["active"] = row.active;
    rows.push_back(std::move(c));
  }
  j["coefficients"] = std::move(rows);

  json res = json::object();
  for (const auto& [name, v] : r.residuals) res[name] = number_or_null(v);
  j["residuals"] = std::move(res);
  json cond = json::object();
  for (const auto& [name, v] : r.condition) cond[name] = number_or_null(v);
  cond["ill_conditioned"] = r.ill_conditioned;
  j["condition"] = std::move(cond);

  if (r.method == Method::Eddi) {
    j["crossings"] = r.crossings;
    json e;
    e["gamma"] = r.energy.gammas;
    e["dissipated_data"] = r.energy.dissipated_data;
    e["dissipated_model"] = r.energy.dissipated_model;
    j["energy_curve"] = std::move(e);
    if (r.clearance_search) {
      json cs;
      cs["best_clearance"] = r.clearance_search->best_clearance;
      cs["grid"] = r.clearance_search->grid;
      json rms = json::array();
      for (double v : r.clearance_search->relative_rms) rms.push_back(number_or_null(v));
      cs["relative_rms"] = std::move(rms);
      j["clearance_search"] = std::move(cs);
    }
  } else {
    j["iterations"] = r.iterations;
  }

  json val = json::array();
  for (const auto& m : r.validation) {
    val.push_back({{"x0", m.ic.x0}, {"v0", m.ic.v0}, {"nrmse", number_or_null(m.nrmse)}, {"reference", m.reference}});
  }
  j["validation"] = std::move(val);

  json p;
  p["tool"] = r.provenance.tool;
  p["config_sha256"] = r.provenance.config_sha256;
  p["input_sha256"] = r.provenance.input_sha256;
  p["seed"] = r.provenance.seed ? json(*r.provenance.seed) : json(nullptr);
  p["created"] = r.provenance.created ? json(*r.provenance.created) : json(nullptr);
  j["provenance"] = std::move(p);
  return j.dump(2) + "\n";
}

IdentificationReport report_from_json(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(source, std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad(source, "report must be a JSON object");
  try {
    IdentificationReport r;
    const auto method = j.value("method", std::string());
    if (method == "eddi") {
      r.method = Method::Eddi;
    } else if (method == "sindy") {
      r.method = Method::Sindy;
    } else {
      bad(source, "unknown method '" + method + "'");
    }
    r.mass = get_number(j, "mass", source);
    r.reconstructed_input = j.value("input_reconstructed", false);
    if (!j.contains("coefficients") || !j["coefficients"].is_array()) bad(source, "missing coefficient table");
    for (const auto& c : j["coefficients"]) {
      CoefficientRow row;
      const auto role = c.value("role", std::string());
      if (role != "damping" && role != "stiffness") bad(source, "coefficient role must be damping or stiffness");
      row.role = role == "damping" ? TermRole::Damping : TermRole::Stiffness;
      row.library_index = c.value("library_index", std::size_t{0});
      row.term = term_from_json(c, source);
      row.value = get_number(c, "value", source);
      row.active = c.value("active", true);
      r.coefficients.push_back(row);
    }
    if (j.contains("residuals")) {
      for (const auto& [k, v] : j["residuals"].items()) r.residuals.emplace_back(k, v.is_number() ? v.get<double>() : INFINITY);
    }
    if (j.contains("condition")) {
      for (const auto& [k, v] : j["condition"].items()) {
        if (k == "ill_conditioned") {
          r.ill_conditioned = v.get<bool>();
        } else {
          r.condition.emplace_back(k, v.is_number() ? v.get<double>() : INFINITY);
        }
      }
    }
    r.crossings = j.value("crossings", std::size_t{0});
    r.iterations = j.value("iterations", std::size_t{0});
    if (j.contains("energy_curve")) {
      const auto& e = j["energy_curve"];
      r.energy.gammas = e.at("gamma").get<std::vector<double>>();
      r.energy.dissipated_data = e.at("dissipated_data").get<std::vector<double>>();
      r.energy.dissipated_model = e.at("dissipated_model").get<std::vector<double>>();
    }
    if (j.contains("clearance_search")) {
      const auto& cs = j["clearance_search"];
      ClearanceSearch s;
      s.best_clearance = cs.at("best_clearance").get<double>();
      s.grid = cs.at("grid").get<std::vector<double>>();
      for (const auto& v : cs.at("relative_rms")) s.relative_rms.push_back(v.is_number() ? v.get<double>() : INFINITY);
      r.clearance_search = std::move(s);
    }
    if (j.contains("validation")) {
      for (const auto& m : j["validation"]) {
        r.validation.push_back({{m.at("x0").get<double>(), m.at("v0").get<double>()},
                                m.at("nrmse").is_number() ? m.at("nrmse").get<double>() : INFINITY,
                                m.value("reference", std::string())});
      }
    }
    if (j.contains("provenance")) {
      const auto& p = j["provenance"];
      r.provenance.tool = p.value("tool", std::string());
      r.provenance.config_sha256 = p.value("config_sha256", std::string());
      r.provenance.input_sha256 = p.value("input_sha256", std::string());
      if (p.contains("seed") && p["seed"].is_number_unsigned()) r.provenance.seed = p["seed"].get<std::uint64_t>();
      if (p.contains("created") && p["created"].is_number_integer()) r.provenance.created = p["created"].get<std::int64_t>();
    }
    return r;
  } catch (const json::exception& e) {
    bad(source, std::string("malformed report: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    bad(source, std::string("malformed report: ") + e.what());
  }
}

IdentificationReport load_report(const std::filesystem::path& path) {
  return report_from_json(read_file(path), path.string());
}

void save_report(const std::filesystem::path& path, const IdentificationReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << report_to_json(report);
  if (!out) fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

}  // namespace eddikit::cli
