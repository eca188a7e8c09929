#include "eddikit/model.hpp"

#include <cmath>

#include "eddikit/error.hpp"
#include "eddikit/kernels.hpp"

namespace eddikit {

namespace {

bool gated(TermKind kind) noexcept {
  switch (kind) {
    case TermKind::VelGateOneSided:
    case TermKind::VelGateTwoSided:
    case TermKind::ClearanceSpringOneSided:
    case TermKind::ClearanceSpringTwoSided:
      return true;
    default:
      return false;
  }
}

void require_power(int power) {
  if (power < 1) fail(ErrorKind::InvalidArgument, "term power must be a positive integer");
}

void require_clearance(double e) {
  if (!(e > 0.0) || !std::isfinite(e)) fail(ErrorKind::InvalidArgument, "clearance must be positive");
}

std::string power_suffix(int power) {
  return power == 1 ? std::string() : "^" + std::to_string(power);
}

}  // namespace

BasisTerm BasisTerm::disp_power(int power) {
  require_power(power);
  return {TermKind::DispPower, power, 0.0};
}

BasisTerm BasisTerm::vel_power(int power) {
  require_power(power);
  return {TermKind::VelPower, power, 0.0};
}

BasisTerm BasisTerm::mixed_disp_sq_vel() { return {TermKind::MixedDispSqVel, 0, 0.0}; }

BasisTerm BasisTerm::vel_gate_one_sided(double clearance) {
  require_clearance(clearance);
  return {TermKind::VelGateOneSided, 0, clearance};
}

BasisTerm BasisTerm::vel_gate_two_sided(double clearance) {
  require_clearance(clearance);
  return {TermKind::VelGateTwoSided, 0, clearance};
}

BasisTerm BasisTerm::clearance_spring_one_sided(double clearance) {
  require_clearance(clearance);
  return {TermKind::ClearanceSpringOneSided, 0, clearance};
}

BasisTerm BasisTerm::clearance_spring_two_sided(double clearance) {
  require_clearance(clearance);
  return {TermKind::ClearanceSpringTwoSided, 0, clearance};
}

bool BasisTerm::has_clearance() const noexcept { return gated(kind_); }

bool BasisTerm::involves_velocity() const noexcept {
  switch (kind_) {
    case TermKind::VelPower:
    case TermKind::MixedDispSqVel:
    case TermKind::VelGateOneSided:
    case TermKind::VelGateTwoSided:
      return true;
    default:
      return false;
  }
}

BasisTerm BasisTerm::with_clearance(double clearance) const {
  if (!has_clearance()) return *this;
  require_clearance(clearance);
  return {kind_, power_, clearance};
}

double BasisTerm::operator()(double x, double v) const noexcept {
  switch (kind_) {
    case TermKind::DispPower: {
      double r = x;
      for (int p = 1; p < power_; ++p) r *= x;
      return r;
    }
    case TermKind::VelPower: {
      double r = v;
      for (int p = 1; p < power_; ++p) r *= v;
      return r;
    }
    case TermKind::MixedDispSqVel:
      return (x * x) * v;
    case TermKind::VelGateOneSided:
      return (x - clearance_ > 0.0) ? v : 0.0;
    case TermKind::VelGateTwoSided:
      return (std::fabs(x) - clearance_ > 0.0) ? v : 0.0;
    case TermKind::ClearanceSpringOneSided: {
      const double d = x - clearance_;
      return d > 0.0 ? d : 0.0;
    }
    case TermKind::ClearanceSpringTwoSided: {
      const double d = std::fabs(x) - clearance_;
      return d > 0.0 ? std::copysign(d, x) : 0.0;
    }
  }
  return 0.0;
}

std::string BasisTerm::describe() const {
  switch (kind_) {
    case TermKind::DispPower: return "x" + power_suffix(power_);
    case TermKind::VelPower: return "v" + power_suffix(power_);
    case TermKind::MixedDispSqVel: return "x^2*v";
    case TermKind::VelGateOneSided: return "v*H(x-e)";
    case TermKind::VelGateTwoSided: return "v*H(|x|-e)";
    case TermKind::ClearanceSpringOneSided: return "(x-e)*H(x-e)";
    case TermKind::ClearanceSpringTwoSided: return "(|x|-e)*sgn(x)*H(|x|-e)";
  }
  return "?";
}

std::string BasisTerm::coefficient_unit() const {
  switch (kind_) {
    case TermKind::DispPower: return "N/m" + power_suffix(power_);
    case TermKind::VelPower:
      return power_ == 1 ? "N*s/m" : "N*s^" + std::to_string(power_) + "/m^" + std::to_string(power_);
    case TermKind::MixedDispSqVel: return "N*s/m^3";
    case TermKind::VelGateOneSided:
    case TermKind::VelGateTwoSided: return "N*s/m";
    case TermKind::ClearanceSpringOneSided:
    case TermKind::ClearanceSpringTwoSided: return "N/m";
  }
  return "?";
}

std::string_view kind_name(TermKind kind) noexcept {
  switch (kind) {
    case TermKind::DispPower: return "disp_power";
    case TermKind::VelPower: return "vel_power";
    case TermKind::MixedDispSqVel: return "mixed_disp_sq_vel";
    case TermKind::VelGateOneSided: return "vel_gate_one_sided";
    case TermKind::VelGateTwoSided: return "vel_gate_two_sided";
    case TermKind::ClearanceSpringOneSided: return "clearance_spring_one_sided";
    case TermKind::ClearanceSpringTwoSided: return "clearance_spring_two_sided";
  }
  return "";
}

std::optional<TermKind> parse_kind_name(std::string_view name) noexcept {
  for (auto kind : {TermKind::DispPower, TermKind::VelPower, TermKind::MixedDispSqVel,
                    TermKind::VelGateOneSided, TermKind::VelGateTwoSided,
                    TermKind::ClearanceSpringOneSided, TermKind::ClearanceSpringTwoSided}) {
    if (kind_name(kind) == name) return kind;
  }
  return std::nullopt;
}

double eval_basis_term(const BasisTerm& term, double x, double v) noexcept { return term(x, v); }

void eval_basis_column(const BasisTerm& term, std::span<const double> x,
                       std::span<const double> v, std::span<double> out) {
  kernels::basis_column(term.kind(), term.power(), term.clearance(), x, v, out);
}

void require_distinct(std::span<const BasisTerm> terms, std::string_view what) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      if (terms[i] == terms[j]) {
        fail(ErrorKind::InvalidArgument,
             std::string(what) + " repeats the term " + terms[i].describe());
      }
    }
  }
}

ModelSpec::ModelSpec(double mass, std::vector<WeightedTerm> damping,
                     std::vector<WeightedTerm> stiffness)
    : mass_(mass), damping_(std::move(damping)), stiffness_(std::move(stiffness)) {
  if (!(mass_ > 0.0) || !std::isfinite(mass_)) fail(ErrorKind::InvalidArgument, "mass must be positive");
  std::vector<BasisTerm> shapes;
  for (const auto& w : damping_) {
    if (!w.term.involves_velocity()) {
      fail(ErrorKind::InvalidArgument, "damping term " + w.term.describe() + " is velocity-free");
    }
    if (!std::isfinite(w.coefficient)) fail(ErrorKind::InvalidArgument, "non-finite damping coefficient");
    shapes.push_back(w.term);
  }
  require_distinct(shapes, "damping model");
  shapes.clear();
  for (const auto& w : stiffness_) {
    if (w.term.involves_velocity()) {
      fail(ErrorKind::InvalidArgument, "stiffness term " + w.term.describe() + " involves velocity");
    }
    if (!std::isfinite(w.coefficient)) fail(ErrorKind::InvalidArgument, "non-finite stiffness coefficient");
    shapes.push_back(w.term);
  }
  require_distinct(shapes, "stiffness model");
}

double eval_terms(std::span<const WeightedTerm> terms, double x, double v) noexcept {
  double sum = 0.0;
  for (const auto& w : terms) sum += w.coefficient * w.term(x, v);
  return sum;
}

double ModelSpec::damping_force(double x, double v) const noexcept { return eval_terms(damping_, x, v); }

double ModelSpec::stiffness_force(double x) const noexcept { return eval_terms(stiffness_, x, 0.0); }

double eval_damping_force(const ModelSpec& spec, double x, double v) noexcept {
  return spec.damping_force(x, v);
}

double eval_stiffness_force(const ModelSpec& spec, double x) noexcept {
  return spec.stiffness_force(x);
}

ModelSpec duffing_clearance_model() {
  constexpr double e = 0.005;
  return ModelSpec(0.1,
                   {{BasisTerm::vel_power(1), 0.08},
                    {BasisTerm::mixed_disp_sq_vel(), 2000.0},
                    {BasisTerm::vel_gate_two_sided(e), 0.2}},
                   {{BasisTerm::disp_power(1), 40.0},
                    {BasisTerm::disp_power(3), 5000.0},
                    {BasisTerm::clearance_spring_two_sided(e), 200.0}});
}

std::vector<BasisTerm> duffing_damping_library(double clearance) {
  return {BasisTerm::vel_power(1),
          BasisTerm::vel_power(2),
          BasisTerm::vel_power(3),
          BasisTerm::mixed_disp_sq_vel(),
          BasisTerm::vel_gate_one_sided(clearance),
          BasisTerm::vel_gate_two_sided(clearance)};
}

std::vector<BasisTerm> duffing_stiffness_library(double clearance) {
  return {BasisTerm::disp_power(1),
          BasisTerm::disp_power(2),
          BasisTerm::disp_power(3),
          BasisTerm::disp_power(4),
          BasisTerm::disp_power(5),
          BasisTerm::clearance_spring_one_sided(clearance),
          BasisTerm::clearance_spring_two_sided(clearance)};
}

}  // namespace eddikit
