// Compiled with -mavx2 -mfma -ffp-contract=off. Only reached after the
// dispatcher has confirmed CPU support, so nothing here may be inlined into
// code shared with other translation units.

#include <immintrin.h>

#include <cmath>

#include "eddikit/kernels.hpp"

namespace eddikit::kernels {

namespace {

inline __m256d abs_pd(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

inline double ipow(double base, int power) {
  double r = base;
  for (int p = 1; p < power; ++p) r *= base;
  return r;
}

inline __m256d ipow_pd(__m256d base, int power) {
  __m256d r = base;
  for (int p = 1; p < power; ++p) r = _mm256_mul_pd(r, base);
  return r;
}

void basis_column_avx2(TermKind kind, int power, double e, const double* x, const double* v,
                       double* out, std::size_t n) {
  const __m256d ve = _mm256_set1_pd(e);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t k = 0;
  switch (kind) {
    case TermKind::DispPower:
      for (; k + 4 <= n; k += 4) _mm256_storeu_pd(out + k, ipow_pd(_mm256_loadu_pd(x + k), power));
      for (; k < n; ++k) out[k] = ipow(x[k], power);
      break;
    case TermKind::VelPower:
      for (; k + 4 <= n; k += 4) _mm256_storeu_pd(out + k, ipow_pd(_mm256_loadu_pd(v + k), power));
      for (; k < n; ++k) out[k] = ipow(v[k], power);
      break;
    case TermKind::MixedDispSqVel:
      for (; k + 4 <= n; k += 4) {
        const __m256d xx = _mm256_loadu_pd(x + k);
        _mm256_storeu_pd(out + k, _mm256_mul_pd(_mm256_mul_pd(xx, xx), _mm256_loadu_pd(v + k)));
      }
      for (; k < n; ++k) out[k] = (x[k] * x[k]) * v[k];
      break;
    case TermKind::VelGateOneSided:
      for (; k + 4 <= n; k += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + k), ve);
        const __m256d on = _mm256_cmp_pd(d, zero, _CMP_GT_OQ);
        _mm256_storeu_pd(out + k, _mm256_and_pd(on, _mm256_loadu_pd(v + k)));
      }
      for (; k < n; ++k) out[k] = (x[k] - e > 0.0) ? v[k] : 0.0;
      break;
    case TermKind::VelGateTwoSided:
      for (; k + 4 <= n; k += 4) {
        const __m256d d = _mm256_sub_pd(abs_pd(_mm256_loadu_pd(x + k)), ve);
        const __m256d on = _mm256_cmp_pd(d, zero, _CMP_GT_OQ);
        _mm256_storeu_pd(out + k, _mm256_and_pd(on, _mm256_loadu_pd(v + k)));
      }
      for (; k < n; ++k) out[k] = (std::fabs(x[k]) - e > 0.0) ? v[k] : 0.0;
      break;
    case TermKind::ClearanceSpringOneSided:
      for (; k + 4 <= n; k += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + k), ve);
        const __m256d on = _mm256_cmp_pd(d, zero, _CMP_GT_OQ);
        _mm256_storeu_pd(out + k, _mm256_and_pd(on, d));
      }
      for (; k < n; ++k) {
        const double d = x[k] - e;
        out[k] = d > 0.0 ? d : 0.0;
      }
      break;
    case TermKind::ClearanceSpringTwoSided:
      for (; k + 4 <= n; k += 4) {
        const __m256d xx = _mm256_loadu_pd(x + k);
        const __m256d d = _mm256_sub_pd(abs_pd(xx), ve);
        const __m256d on = _mm256_cmp_pd(d, zero, _CMP_GT_OQ);
        // d > 0 here, so OR-ing in the sign of x is copysign.
        const __m256d signed_d = _mm256_or_pd(d, _mm256_and_pd(sign, xx));
        _mm256_storeu_pd(out + k, _mm256_and_pd(on, signed_d));
      }
      for (; k < n; ++k) {
        const double d = std::fabs(x[k]) - e;
        out[k] = d > 0.0 ? std::copysign(d, x[k]) : 0.0;
      }
      break;
  }
}

void multiply_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    _mm256_storeu_pd(out + k, _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
  }
  for (; k < n; ++k) out[k] = a[k] * b[k];
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), s1);
  }
  for (; k + 4 <= n; k += 4) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), s0);
  }
  const __m256d s = _mm256_add_pd(s0, s1);
  const __m128d lo = _mm256_castpd256_pd128(s);
  const __m128d hi = _mm256_extractf128_pd(s, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  double total = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
  for (; k < n; ++k) total += a[k] * b[k];
  return total;
}

void complex_scale_avx2(const double* z, const double* w, double* out, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d ww = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w + k)),
                                             _MM_SHUFFLE(1, 1, 0, 0));
    _mm256_storeu_pd(out + 2 * k, _mm256_mul_pd(_mm256_loadu_pd(z + 2 * k), ww));
  }
  for (; k < n; ++k) {
    out[2 * k] = z[2 * k] * w[k];
    out[2 * k + 1] = z[2 * k + 1] * w[k];
  }
}

void complex_abs_avx2(const double* z, double* out, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d a = _mm256_loadu_pd(z + 2 * k);
    const __m256d b = _mm256_loadu_pd(z + 2 * k + 4);
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    const __m256d ordered = _mm256_permute4x64_pd(h, _MM_SHUFFLE(3, 1, 2, 0));
    _mm256_storeu_pd(out + k, _mm256_sqrt_pd(ordered));
  }
  for (; k < n; ++k) {
    const double re = z[2 * k], im = z[2 * k + 1];
    out[k] = std::sqrt(re * re + im * im);
  }
}

}  // namespace

const KernelTable& avx2_table() noexcept {
  static const KernelTable table{basis_column_avx2, multiply_avx2, dot_avx2, complex_scale_avx2,
                                 complex_abs_avx2};
  return table;
}

}  // namespace eddikit::kernels
