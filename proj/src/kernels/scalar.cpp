#include <cmath>

#include "prophet/kernels.hpp"

namespace prophet::kernels {
namespace {

void complement_products(const double* p, std::size_t rows, std::size_t cols, double* all,
                         double* q) {
  for (std::size_t k = 0; k < cols; ++k) {
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
  for (std::size_t k = 0; k < cols; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      s = s + (1.0 - q[i * cols + k]) * p[i * cols + k];
    }
    g[k] = gamma * (s - t[k]) + 1.0;
  }
}

void stieltjes_increments(const double* p, const double* g, const double* q, std::size_t cols,
                          double gamma, double* out) {
  for (std::size_t k = 0; k + 1 < cols; ++k) {
    const double pm = (p[k] + p[k + 1]) * 0.5;
    const double gm = (g[k] + g[k + 1]) * 0.5;
    out[k] = gamma * pm / gm * (q[k + 1] - q[k]);
  }
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = std::abs(a[k] - b[k]);
    if (std::isnan(d)) return d;
    if (d > m) m = d;
  }
  return m;
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{Isa::scalar, &complement_products, &aux_function,
                               &stieltjes_increments, &max_abs_diff};
}  // namespace detail

}  // namespace prophet::kernels
