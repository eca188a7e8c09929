#include <cmath>

#include "eddikit/kernels.hpp"

namespace eddikit::kernels {

namespace {

inline double ipow(double base, int power) {
  double r = base;
  for (int p = 1; p < power; ++p) r *= base;
  return r;
}

void basis_column_scalar(TermKind kind, int power, double e, const double* x, const double* v,
                         double* out, std::size_t n) {
  switch (kind) {
    case TermKind::DispPower:
      for (std::size_t k = 0; k < n; ++k) out[k] = ipow(x[k], power);
      break;
    case TermKind::VelPower:
      for (std::size_t k = 0; k < n; ++k) out[k] = ipow(v[k], power);
      break;
    case TermKind::MixedDispSqVel:
      for (std::size_t k = 0; k < n; ++k) out[k] = (x[k] * x[k]) * v[k];
      break;
    case TermKind::VelGateOneSided:
      for (std::size_t k = 0; k < n; ++k) out[k] = (x[k] - e > 0.0) ? v[k] : 0.0;
      break;
    case TermKind::VelGateTwoSided:
      for (std::size_t k = 0; k < n; ++k) out[k] = (std::fabs(x[k]) - e > 0.0) ? v[k] : 0.0;
      break;
    case TermKind::ClearanceSpringOneSided:
      for (std::size_t k = 0; k < n; ++k) {
        const double d = x[k] - e;
        out[k] = d > 0.0 ? d : 0.0;
      }
      break;
    case TermKind::ClearanceSpringTwoSided:
      for (std::size_t k = 0; k < n; ++k) {
        const double d = std::fabs(x[k]) - e;
        out[k] = d > 0.0 ? std::copysign(d, x[k]) : 0.0;
      }
      break;
  }
}

void multiply_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * b[k];
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

void complex_scale_scalar(const double* z, const double* w, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    out[2 * k] = z[2 * k] * w[k];
    out[2 * k + 1] = z[2 * k + 1] * w[k];
  }
}

void complex_abs_scalar(const double* z, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double re = z[2 * k], im = z[2 * k + 1];
    out[k] = std::sqrt(re * re + im * im);
  }
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{basis_column_scalar, multiply_scalar, dot_scalar,
                                 complex_scale_scalar, complex_abs_scalar};
  return table;
}

}  // namespace eddikit::kernels
