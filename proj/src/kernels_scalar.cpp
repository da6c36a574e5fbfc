#include <cmath>

#include "seqmatch/kernels.hpp"

namespace seqmatch::kernels::scalar {

std::size_t count_symbols(const std::uint8_t* seq, std::size_t len, int k, std::int64_t* counts) {
  std::size_t bad = 0;
  for (std::size_t t = 0; t < len; ++t) {
    const int s = seq[t];
    if (s < k)
      ++counts[s];
    else
      ++bad;
  }
  return bad;
}

void gjs_batch(const double* p, const double* q, std::size_t m, int k, double alpha, double* out) {
  const double c = 1.0 + alpha;
  for (std::size_t r = 0; r < m; ++r) out[r] = 0.0;
  for (int a = 0; a < k; ++a) {
    const double* pa = p + static_cast<std::size_t>(a) * m;
    const double* qa = q + static_cast<std::size_t>(a) * m;
    for (std::size_t r = 0; r < m; ++r) {
      const double x = pa[r], y = qa[r];
      const double mix = alpha * x + y;
      double v = 0.0;
      if (x > 0.0) v += alpha * x * std::log(c * x / mix);
      if (y > 0.0) v += y * std::log(c * y / mix);
      out[r] += v;
    }
  }
}

}  // namespace seqmatch::kernels::scalar
