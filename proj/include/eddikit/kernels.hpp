#pragma once

// Data-parallel inner loops with a scalar reference implementation and
// SIMD variants chosen once at runtime. The scalar table is the oracle the
// SIMD tables are tested against.
//
// Set EDDIKIT_SIMD=scalar to force the reference path.

#include <cstddef>
#include <span>
#include <string_view>

#include "eddikit/term_kind.hpp"

namespace eddikit::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  // out[k] = term(x[k], v[k]); power is used by the power kinds only.
  void (*basis_column)(TermKind kind, int power, double clearance, const double* x,
                       const double* v, double* out, std::size_t n);
  // out[k] = a[k] * b[k]
  void (*multiply)(const double* a, const double* b, double* out, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // Interleaved complex z[k] scaled by real w[k] into out.
  void (*complex_scale)(const double* z, const double* w, double* out, std::size_t n);
  // out[k] = |z[k]| for interleaved complex input.
  void (*complex_abs)(const double* z, double* out, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
#if defined(EDDIKIT_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

bool isa_supported(Isa isa) noexcept;
const KernelTable& table(Isa isa);
Isa active_isa() noexcept;
const KernelTable& active() noexcept;
std::string_view isa_name(Isa isa) noexcept;

// Span front-ends over the active table.
void basis_column(TermKind kind, int power, double clearance, std::span<const double> x,
                  std::span<const double> v, std::span<double> out);
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace eddikit::kernels
