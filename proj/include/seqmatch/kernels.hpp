#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace seqmatch::kernels {

enum class Isa { scalar, avx2 };

// Best instruction set supported by this CPU and build.
Isa detected_isa() noexcept;
// Kernel set in use. Defaults to detected_isa(); SEQMATCH_SIMD=scalar in the
// environment forces the reference kernels.
Isa active_isa() noexcept;
// Forces a kernel set (tests); returns the previous one. Requesting avx2 on a
// machine without it falls back to scalar.
Isa set_active_isa(Isa isa) noexcept;
std::string_view isa_name(Isa isa) noexcept;

// counts[a] += #{t : seq[t] == a} for a < k. Symbols >= k are not counted;
// the return value is the number of such symbols.
std::size_t count_symbols(const std::uint8_t* seq, std::size_t len, int k, std::int64_t* counts);

// Batched generalized Jensen-Shannon divergence over m pairs, symbol-major:
// p[a * m + r] is P_r(a) and q[a * m + r] is Q_r(a).
//   out[r] = sum_a alpha p log((1+alpha) p / (alpha p + q)) + q log((1+alpha) q / (alpha p + q))
void gjs_batch(const double* p, const double* q, std::size_t m, int k, double alpha, double* out);

namespace scalar {
std::size_t count_symbols(const std::uint8_t* seq, std::size_t len, int k, std::int64_t* counts);
void gjs_batch(const double* p, const double* q, std::size_t m, int k, double alpha, double* out);
}  // namespace scalar

namespace avx2 {
bool compiled() noexcept;
std::size_t count_symbols(const std::uint8_t* seq, std::size_t len, int k, std::int64_t* counts);
void gjs_batch(const double* p, const double* q, std::size_t m, int k, double alpha, double* out);
// Element-wise natural log of strictly positive finite inputs (exposed for tests).
void log_batch(const double* x, std::size_t m, double* out);
}  // namespace avx2

}  // namespace seqmatch::kernels
