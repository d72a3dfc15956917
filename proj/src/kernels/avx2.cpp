// AVX2 variants. Compiled with -mavx2 only (no FMA) so every lane performs
// exactly the scalar sequence of roundings.

#include <immintrin.h>

#include <cmath>

#include "prophet/kernels.hpp"

namespace prophet::kernels {
namespace {

constexpr std::size_t kLanes = 4;

void complement_products(const double* p, std::size_t rows, std::size_t cols, double* all,
                         double* q) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t k = 0;
  for (; k + kLanes <= cols; k += kLanes) {
    __m256d prefix = one;
    for (std::size_t i = 0; i < rows; ++i) {
      _mm256_storeu_pd(q + i * cols + k, prefix);
      const __m256d pi = _mm256_loadu_pd(p + i * cols + k);
      prefix = _mm256_mul_pd(prefix, _mm256_sub_pd(one, pi));
    }
    _mm256_storeu_pd(all + k, prefix);
    __m256d suffix = one;
    for (std::size_t i = rows; i-- > 0;) {
      const __m256d pre = _mm256_loadu_pd(q + i * cols + k);
      _mm256_storeu_pd(q + i * cols + k, _mm256_sub_pd(one, _mm256_mul_pd(pre, suffix)));
      const __m256d pi = _mm256_loadu_pd(p + i * cols + k);
      suffix = _mm256_mul_pd(suffix, _mm256_sub_pd(one, pi));
    }
  }
  for (; k < cols; ++k) {
    double prefix = 1.0;
    for (std::size_t i = 0; i < rows; ++i) {
      q[i * cols + k] = prefix;
      prefix = prefix * (1.0 - p[i * cols + k]);
    }
    all[k] = prefix;
    double suffix = 1.0;
    for (std::size_t i = rows; i-- > 0;) {
      q[i * cols + k] = 1.0 - q[i * cols + k] * suffix;
      suffix = suffix * (1.0 - p[i * cols + k]);
    }
  }
}

void aux_function(const double* p, const double* q, const double* t, std::size_t rows,
                  std::size_t cols, double gamma, double* g) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d vg = _mm256_set1_pd(gamma);
  std::size_t k = 0;
  for (; k + kLanes <= cols; k += kLanes) {
    __m256d s = _mm256_setzero_pd();
    for (std::size_t i = 0; i < rows; ++i) {
      const __m256d qi = _mm256_loadu_pd(q + i * cols + k);
      const __m256d pi = _mm256_loadu_pd(p + i * cols + k);
      s = _mm256_add_pd(s, _mm256_mul_pd(_mm256_sub_pd(one, qi), pi));
    }
    const __m256d tk = _mm256_loadu_pd(t + k);
    _mm256_storeu_pd(g + k, _mm256_add_pd(_mm256_mul_pd(vg, _mm256_sub_pd(s, tk)), one));
  }
  for (; k < cols; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      s = s + (1.0 - q[i * cols + k]) * p[i * cols + k];
    }
    g[k] = gamma * (s - t[k]) + 1.0;
  }
}

void stieltjes_increments(const double* p, const double* g, const double* q, std::size_t cols,
                          double gamma, double* out) {
  if (cols < 2) return;
  const std::size_t cells = cols - 1;
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d vg = _mm256_set1_pd(gamma);
  std::size_t k = 0;
  for (; k + kLanes <= cells; k += kLanes) {
    const __m256d pm =
        _mm256_mul_pd(_mm256_add_pd(_mm256_loadu_pd(p + k), _mm256_loadu_pd(p + k + 1)), half);
    const __m256d gm =
        _mm256_mul_pd(_mm256_add_pd(_mm256_loadu_pd(g + k), _mm256_loadu_pd(g + k + 1)), half);
    const __m256d dq = _mm256_sub_pd(_mm256_loadu_pd(q + k + 1), _mm256_loadu_pd(q + k));
    _mm256_storeu_pd(out + k, _mm256_mul_pd(_mm256_div_pd(_mm256_mul_pd(vg, pm), gm), dq));
  }
  for (; k < cells; ++k) {
    const double pm = (p[k] + p[k + 1]) * 0.5;
    const double gm = (g[k] + g[k + 1]) * 0.5;
    out[k] = gamma * pm / gm * (q[k + 1] - q[k]);
  }
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  __m256d nan_seen = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const __m256d d =
        _mm256_andnot_pd(sign, _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
    nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(d, d, _CMP_UNORD_Q));
    m = _mm256_max_pd(m, d);
  }
  if (_mm256_movemask_pd(nan_seen) != 0) return std::nan("");
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, m);
  double best = 0.0;
  for (double v : lanes) best = v > best ? v : best;
  for (; k < n; ++k) {
    const double d = std::abs(a[k] - b[k]);
    if (std::isnan(d)) return d;
    if (d > best) best = d;
  }
  return best;
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table{Isa::avx2, &complement_products, &aux_function,
                             &stieltjes_increments, &max_abs_diff};
}  // namespace detail

}  // namespace prophet::kernels
