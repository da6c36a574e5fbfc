#include <immintrin.h>

#include <cfloat>
#include <cmath>
#include <cstring>

#include "seqmatch/kernels.hpp"

namespace seqmatch::kernels::avx2 {

namespace {

// log(x) = e*ln2 + 2*atanh(s), x = m * 2^e, m in [sqrt(1/2), sqrt(2)),
// s = (m-1)/(m+1). |s| <= 0.1716 so s^2 <= 0.0295 and twelve odd terms of
// the atanh series reach double precision.
inline __m256d log4(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_exp = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_exp));
  __m256i biased = _mm256_srli_epi64(bits, 52);

  const __m256d sqrt2 = _mm256_set1_pd(1.4142135623730951);
  const __m256d big = _mm256_cmp_pd(m, sqrt2, _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  biased = _mm256_add_epi64(biased, _mm256_and_si256(_mm256_castpd_si256(big), _mm256_set1_epi64x(1)));

  // int64 -> double for small non-negative values via the 2^52 trick.
  const __m256i magic_i = _mm256_set1_epi64x(0x4330000000000000LL);
  const __m256d magic_d = _mm256_set1_pd(4503599627370496.0);
  const __m256d e = _mm256_sub_pd(
      _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, magic_i)), magic_d), _mm256_set1_pd(1023.0));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d s2 = _mm256_mul_pd(s, s);
  __m256d poly = _mm256_set1_pd(1.0 / 23.0);
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 21.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 19.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 17.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 15.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 13.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 11.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 9.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 7.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 5.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 3.0));
  // 2*s*(1 + s2*poly) = 2s + 2s*s2*poly keeps the leading term exact.
  const __m256d two_s = _mm256_add_pd(s, s);
  const __m256d tail = _mm256_mul_pd(_mm256_mul_pd(two_s, s2), poly);

  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  __m256d r = _mm256_fmadd_pd(e, ln2_lo, tail);
  r = _mm256_add_pd(r, two_s);
  return _mm256_fmadd_pd(e, ln2_hi, r);
}

// Lanes the polynomial path cannot handle (subnormal or non-finite) are
// recomputed with std::log.
inline __m256d log4_checked(__m256d x) {
  __m256d r = log4(x);
  const __m256d lo = _mm256_cmp_pd(x, _mm256_set1_pd(DBL_MIN), _CMP_LT_OQ);
  const __m256d hi = _mm256_cmp_pd(x, _mm256_set1_pd(DBL_MAX), _CMP_NLE_UQ);
  if (_mm256_movemask_pd(_mm256_or_pd(lo, hi)) != 0) {
    alignas(32) double xs[4], rs[4];
    _mm256_store_pd(xs, x);
    _mm256_store_pd(rs, r);
    for (int l = 0; l < 4; ++l)
      if (!(xs[l] >= DBL_MIN && xs[l] <= DBL_MAX)) rs[l] = std::log(xs[l]);
    r = _mm256_load_pd(rs);
  }
  return r;
}

template <class Load>
inline __m256d gjs4(Load load, int k, __m256d alpha, __m256d c) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = zero;
  for (int a = 0; a < k; ++a) {
    __m256d x, y;
    load(a, x, y);
    const __m256d mix = _mm256_fmadd_pd(alpha, x, y);
    const __m256d px = _mm256_cmp_pd(x, zero, _CMP_GT_OQ);
    const __m256d py = _mm256_cmp_pd(y, zero, _CMP_GT_OQ);
    const __m256d rx = _mm256_blendv_pd(one, _mm256_div_pd(_mm256_mul_pd(c, x), mix), px);
    const __m256d ry = _mm256_blendv_pd(one, _mm256_div_pd(_mm256_mul_pd(c, y), mix), py);
    const __m256d tx = _mm256_mul_pd(_mm256_mul_pd(alpha, x), log4_checked(rx));
    const __m256d ty = _mm256_mul_pd(y, log4_checked(ry));
    acc = _mm256_add_pd(acc, _mm256_add_pd(tx, ty));
  }
  return acc;
}

}  // namespace

bool compiled() noexcept { return true; }

std::size_t count_symbols(const std::uint8_t* seq, std::size_t len, int k, std::int64_t* counts) {
  constexpr int kMaxLanes = 16;
  if (k > kMaxLanes || k <= 0) return scalar::count_symbols(seq, len, k, counts);

  const __m256i zero = _mm256_setzero_si256();
  __m256i acc[kMaxLanes];
  std::int64_t total[kMaxLanes] = {};
  for (int a = 0; a < k; ++a) acc[a] = zero;

  auto flush = [&] {
    for (int a = 0; a < k; ++a) {
      const __m256i s = _mm256_sad_epu8(acc[a], zero);
      alignas(32) std::int64_t w[4];
      _mm256_store_si256(reinterpret_cast<__m256i*>(w), s);
      total[a] += w[0] + w[1] + w[2] + w[3];
      acc[a] = zero;
    }
  };

  std::size_t t = 0;
  int pending = 0;
  // Byte counters saturate after 255 increments.
  for (; t + 32 <= len; t += 32) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(seq + t));
    for (int a = 0; a < k; ++a)
      acc[a] = _mm256_sub_epi8(acc[a], _mm256_cmpeq_epi8(v, _mm256_set1_epi8(static_cast<char>(a))));
    if (++pending == 255) {
      flush();
      pending = 0;
    }
  }
  if (len > t) {
    alignas(32) std::uint8_t buf[32];
    std::memset(buf, 0xFF, sizeof buf);
    std::memcpy(buf, seq + t, len - t);
    const __m256i v = _mm256_load_si256(reinterpret_cast<const __m256i*>(buf));
    for (int a = 0; a < k; ++a)
      acc[a] = _mm256_sub_epi8(acc[a], _mm256_cmpeq_epi8(v, _mm256_set1_epi8(static_cast<char>(a))));
  }
  flush();

  std::int64_t counted = 0;
  for (int a = 0; a < k; ++a) {
    counts[a] += total[a];
    counted += total[a];
  }
  return len - static_cast<std::size_t>(counted);
}

void gjs_batch(const double* p, const double* q, std::size_t m, int k, double alpha, double* out) {
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vc = _mm256_set1_pd(1.0 + alpha);
  std::size_t r = 0;
  for (; r + 4 <= m; r += 4) {
    auto load = [&](int a, __m256d& x, __m256d& y) {
      x = _mm256_loadu_pd(p + static_cast<std::size_t>(a) * m + r);
      y = _mm256_loadu_pd(q + static_cast<std::size_t>(a) * m + r);
    };
    _mm256_storeu_pd(out + r, gjs4(load, k, va, vc));
  }
  if (r < m) {
    // Zero padding gives ratio 1 and a zero term, so each output depends
    // only on its own column.
    const std::size_t rest = m - r;
    auto load = [&](int a, __m256d& x, __m256d& y) {
      alignas(32) double xs[4] = {0.0, 0.0, 0.0, 0.0}, ys[4] = {0.0, 0.0, 0.0, 0.0};
      for (std::size_t l = 0; l < rest; ++l) {
        xs[l] = p[static_cast<std::size_t>(a) * m + r + l];
        ys[l] = q[static_cast<std::size_t>(a) * m + r + l];
      }
      x = _mm256_load_pd(xs);
      y = _mm256_load_pd(ys);
    };
    alignas(32) double res[4];
    _mm256_store_pd(res, gjs4(load, k, va, vc));
    for (std::size_t l = 0; l < rest; ++l) out[r + l] = res[l];
  }
}

void log_batch(const double* x, std::size_t m, double* out) {
  std::size_t r = 0;
  for (; r + 4 <= m; r += 4) _mm256_storeu_pd(out + r, log4_checked(_mm256_loadu_pd(x + r)));
  if (r < m) {
    alignas(32) double buf[4] = {1.0, 1.0, 1.0, 1.0}, res[4];
    for (std::size_t l = 0; r + l < m; ++l) buf[l] = x[r + l];
    _mm256_store_pd(res, log4_checked(_mm256_load_pd(buf)));
    for (std::size_t l = 0; r + l < m; ++l) out[r + l] = res[l];
  }
}

}  // namespace seqmatch::kernels::avx2
