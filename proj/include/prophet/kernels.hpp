#pragma once

// Data-parallel inner loops over the time grid.
//
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant chosen at runtime from CPUID. Matrices are row-major with one row
// per item and one column per grid point. All element-wise kernels perform the
// same floating-point operations in the same order in every variant, so their
// outputs are bit-identical; reductions over max are order-independent.

#include <cstddef>
#include <span>
#include <string_view>

namespace prophet::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  // all[k] = prod_i (1 - p[i][k]);  q[i][k] = 1 - prod_{j != i} (1 - p[j][k]).
  void (*complement_products)(const double* p, std::size_t rows, std::size_t cols, double* all,
                              double* q);
  // g[k] = gamma * (sum_i (1 - q[i][k]) * p[i][k] - t[k]) + 1, summed in row order.
  void (*aux_function)(const double* p, const double* q, const double* t, std::size_t rows,
                       std::size_t cols, double gamma, double* g);
  // out[k] = gamma * ((p[k] + p[k+1]) / 2) / ((g[k] + g[k+1]) / 2) * (q[k+1] - q[k]),
  // k < cols - 1.
  void (*stieltjes_increments)(const double* p, const double* g, const double* q,
                               std::size_t cols, double gamma, double* out);
  // max_k |a[k] - b[k]|; 0 for empty input, NaN if any difference is NaN.
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
};

// True if this build contains the AVX2 variants and the CPU supports them.
bool avx2_available() noexcept;

const KernelTable& table(Isa isa);

// Kernels used by the library. Defaults to the best ISA the machine supports;
// the PROPHET_ISA environment variable ("scalar" / "avx2") overrides at first use.
const KernelTable& active() noexcept;

// Overrides the active table (CLI --isa, tests). Throws if unavailable.
void set_active(Isa isa);

// Span-based convenience wrappers over active().
void complement_products(std::span<const double> p, std::size_t rows, std::span<double> all,
                         std::span<double> q);
void aux_function(std::span<const double> p, std::span<const double> q,
                  std::span<const double> t, std::size_t rows, double gamma,
                  std::span<double> g);
void stieltjes_increments(std::span<const double> p, std::span<const double> g,
                          std::span<const double> q, double gamma, std::span<double> out);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

namespace detail {
extern const KernelTable kScalarTable;
#if defined(PROPHET_HAVE_AVX2_KERNELS)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace prophet::kernels
