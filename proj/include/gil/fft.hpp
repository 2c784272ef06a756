#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "gil/signals.hpp"

namespace gil::detail {

/// In-place iterative radix-2 DFT, forward sign convention e^{-2 pi i k n / N}.
inline void fft_pow2(std::vector<complexd>& a) {
  std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft_pow2: length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = -2.0 * kPi / static_cast<double>(len);
    complexd wlen = std::polar(1.0, ang);
    for (std::size_t i = 0; i < n; i += len) {
      complexd w{1.0, 0.0};
      for (std::size_t k = 0; k < len / 2; ++k) {
        complexd u = a[i + k];
        complexd v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

} // namespace gil::detail
