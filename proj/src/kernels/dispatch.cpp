#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "prophet/kernels.hpp"

namespace prophet::kernels {
namespace {

const KernelTable* initial_table() noexcept {
  const char* env = std::getenv("PROPHET_ISA");
  if (env != nullptr && std::string(env) == "scalar") return &detail::kScalarTable;
#if defined(PROPHET_HAVE_AVX2_KERNELS)
  if (avx2_available()) return &detail::kAvx2Table;
#endif
  return &detail::kScalarTable;
}

std::atomic<const KernelTable*>& active_slot() noexcept {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

void check_span(bool ok) {
  if (!ok) throw std::invalid_argument("kernel span sizes do not match");
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool avx2_available() noexcept {
#if defined(PROPHET_HAVE_AVX2_KERNELS)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& table(Isa isa) {
  if (isa == Isa::scalar) return detail::kScalarTable;
#if defined(PROPHET_HAVE_AVX2_KERNELS)
  if (avx2_available()) return detail::kAvx2Table;
#endif
  throw std::runtime_error("AVX2 kernels are not available on this machine");
}

const KernelTable& active() noexcept { return *active_slot().load(std::memory_order_acquire); }

void set_active(Isa isa) { active_slot().store(&table(isa), std::memory_order_release); }

void complement_products(std::span<const double> p, std::size_t rows, std::span<double> all,
                         std::span<double> q) {
  const std::size_t cols = all.size();
  check_span(p.size() == rows * cols && q.size() == rows * cols);
  active().complement_products(p.data(), rows, cols, all.data(), q.data());
}

void aux_function(std::span<const double> p, std::span<const double> q,
                  std::span<const double> t, std::size_t rows, double gamma,
                  std::span<double> g) {
  const std::size_t cols = t.size();
  check_span(p.size() == rows * cols && q.size() == rows * cols && g.size() == cols);
  active().aux_function(p.data(), q.data(), t.data(), rows, cols, gamma, g.data());
}

void stieltjes_increments(std::span<const double> p, std::span<const double> g,
                          std::span<const double> q, double gamma, std::span<double> out) {
  const std::size_t cols = p.size();
  check_span(g.size() == cols && q.size() == cols && out.size() + 1 == cols);
  active().stieltjes_increments(p.data(), g.data(), q.data(), cols, gamma, out.data());
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  check_span(a.size() == b.size());
  return active().max_abs_diff(a.data(), b.data(), a.size());
}

}  // namespace prophet::kernels
