#include "seqmatch/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace seqmatch::kernels {

#ifndef SEQMATCH_HAVE_AVX2
namespace avx2 {
bool compiled() noexcept { return false; }
std::size_t count_symbols(const std::uint8_t* seq, std::size_t len, int k, std::int64_t* counts) {
  return scalar::count_symbols(seq, len, k, counts);
}
void gjs_batch(const double* p, const double* q, std::size_t m, int k, double alpha, double* out) {
  scalar::gjs_batch(p, q, m, k, alpha, out);
}
void log_batch(const double* x, std::size_t m, double* out) {
  for (std::size_t r = 0; r < m; ++r) out[r] = std::log(x[r]);
}
}  // namespace avx2
#endif

namespace {

Isa initial_isa() noexcept {
  const Isa best = detected_isa();
  if (const char* env = std::getenv("SEQMATCH_SIMD"); env && std::strcmp(env, "scalar") == 0) return Isa::scalar;
  return best;
}

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

Isa detected_isa() noexcept {
#if defined(SEQMATCH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  if (ok) return Isa::avx2;
#endif
  return Isa::scalar;
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

Isa set_active_isa(Isa isa) noexcept {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) isa = Isa::scalar;
  return current().exchange(isa);
}

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

std::size_t count_symbols(const std::uint8_t* seq, std::size_t len, int k, std::int64_t* counts) {
  if (active_isa() == Isa::avx2) return avx2::count_symbols(seq, len, k, counts);
  return scalar::count_symbols(seq, len, k, counts);
}

void gjs_batch(const double* p, const double* q, std::size_t m, int k, double alpha, double* out) {
  if (active_isa() == Isa::avx2) return avx2::gjs_batch(p, q, m, k, alpha, out);
  scalar::gjs_batch(p, q, m, k, alpha, out);
}

}  // namespace seqmatch::kernels
