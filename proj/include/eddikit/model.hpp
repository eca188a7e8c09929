#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eddikit/term_kind.hpp"

namespace eddikit {

/// A candidate force shape. Construct through the named factories; they
/// enforce a positive power for the power kinds and a positive clearance for
/// the gated kinds.
///
/// Units of the shape before its coefficient:
///   DispPower(i) -> m^i, VelPower(j) -> (m/s)^j, MixedDispSqVel -> m^3/s,
///   VelGate* -> m/s, ClearanceSpring* -> m.
class BasisTerm {
 public:
  static BasisTerm disp_power(int power);
  static BasisTerm vel_power(int power);
  static BasisTerm mixed_disp_sq_vel();
  static BasisTerm vel_gate_one_sided(double clearance);
  static BasisTerm vel_gate_two_sided(double clearance);
  static BasisTerm clearance_spring_one_sided(double clearance);
  static BasisTerm clearance_spring_two_sided(double clearance);

  TermKind kind() const noexcept { return kind_; }
  int power() const noexcept { return power_; }
  bool has_clearance() const noexcept;
  double clearance() const noexcept { return clearance_; }

  bool involves_velocity() const noexcept;
  // Same shape with a different clearance; identity for ungated kinds.
  BasisTerm with_clearance(double clearance) const;

  double operator()(double x, double v) const noexcept;

  // Human-readable shape, e.g. "x^2*v" or "(|x|-e)*sgn(x)*H(|x|-e)".
  std::string describe() const;
  // Unit of a coefficient multiplying this shape so the product is a force.
  std::string coefficient_unit() const;

  friend bool operator==(const BasisTerm&, const BasisTerm&) = default;

 private:
  BasisTerm(TermKind kind, int power, double clearance)
      : kind_(kind), power_(power), clearance_(clearance) {}

  TermKind kind_;
  int power_;
  double clearance_;
};

std::string_view kind_name(TermKind kind) noexcept;
std::optional<TermKind> parse_kind_name(std::string_view name) noexcept;

double eval_basis_term(const BasisTerm& term, double x, double v) noexcept;

// Evaluates the term over aligned sample arrays (SIMD-dispatched).
void eval_basis_column(const BasisTerm& term, std::span<const double> x,
                       std::span<const double> v, std::span<double> out);

struct WeightedTerm {
  BasisTerm term;
  double coefficient;

  friend bool operator==(const WeightedTerm&, const WeightedTerm&) = default;
};

/// m x'' + B(x, x', e) + K(x, e) = F(t) with B and K expanded on basis terms.
/// Damping terms must involve velocity, stiffness terms must not, and neither
/// list may repeat a (kind, power, clearance) shape.
class ModelSpec {
 public:
  ModelSpec(double mass, std::vector<WeightedTerm> damping, std::vector<WeightedTerm> stiffness);

  double mass() const noexcept { return mass_; }
  const std::vector<WeightedTerm>& damping() const noexcept { return damping_; }
  const std::vector<WeightedTerm>& stiffness() const noexcept { return stiffness_; }

  double damping_force(double x, double v) const noexcept;
  double stiffness_force(double x) const noexcept;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;

 private:
  double mass_;
  std::vector<WeightedTerm> damping_;
  std::vector<WeightedTerm> stiffness_;
};

double eval_damping_force(const ModelSpec& spec, double x, double v) noexcept;
double eval_stiffness_force(const ModelSpec& spec, double x) noexcept;

// Sum of weighted terms at one state, for term lists not yet in a ModelSpec.
double eval_terms(std::span<const WeightedTerm> terms, double x, double v) noexcept;

// Throws InvalidArgument on a repeated shape.
void require_distinct(std::span<const BasisTerm> terms, std::string_view what);

/// The oscillator with a symmetric clearance used throughout the examples:
/// m = 0.1, b = 0.08, b_nl = 2000, beta = 0.2, k = 40, k_nl = 5000,
/// alpha = 200, e = 0.005 (SI units).
ModelSpec duffing_clearance_model();
/// Damping candidates {v, v^2, v^3, x^2 v, v H(x-e), v H(|x|-e)}.
std::vector<BasisTerm> duffing_damping_library(double clearance);
/// Stiffness candidates {x..x^5, (x-e)H(x-e), (|x|-e)sgn(x)H(|x|-e)}.
std::vector<BasisTerm> duffing_stiffness_library(double clearance);

}  // namespace eddikit
