#include <cstdlib>
#include <string>

#include "eddikit/error.hpp"
#include "eddikit/kernels.hpp"

namespace eddikit::kernels {

namespace {

Isa detect() noexcept {
  if (const char* env = std::getenv("EDDIKIT_SIMD"); env && std::string(env) == "scalar") {
    return Isa::Scalar;
  }
  if (isa_supported(Isa::Avx2)) return Isa::Avx2;
  return Isa::Scalar;
}

void require_sizes(std::size_t a, std::size_t b, std::size_t out) {
  if (a != b || a != out) fail(ErrorKind::InvalidArgument, "kernel operands differ in length");
}

}  // namespace

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(EDDIKIT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!isa_supported(isa)) fail(ErrorKind::InvalidArgument, "requested ISA is not available");
#if defined(EDDIKIT_HAVE_AVX2)
  if (isa == Isa::Avx2) return avx2_table();
#endif
  return scalar_table();
}

Isa active_isa() noexcept {
  static const Isa isa = detect();
  return isa;
}

const KernelTable& active() noexcept {
  static const KernelTable& t = table(active_isa());
  return t;
}

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

void basis_column(TermKind kind, int power, double clearance, std::span<const double> x,
                  std::span<const double> v, std::span<double> out) {
  require_sizes(x.size(), v.size(), out.size());
  active().basis_column(kind, power, clearance, x.data(), v.data(), out.data(), out.size());
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  require_sizes(a.size(), b.size(), out.size());
  active().multiply(a.data(), b.data(), out.data(), out.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_sizes(a.size(), b.size(), a.size());
  return active().dot(a.data(), b.data(), a.size());
}

}  // namespace eddikit::kernels
