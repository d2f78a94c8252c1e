#pragma once

#include <bit>
#include <cmath>
#include <span>
#include <vector>

#include "isac/core/constants.hpp"
#include "isac/core/error.hpp"

namespace isac {

/// In-place forward radix-2 FFT, X[k] = sum_n x[n] exp(-j 2 pi k n / N).
inline void fft_inplace(std::span<cplx> x) {
  const std::size_t n = x.size();
  if (n <= 1) return;
  if (!std::has_single_bit(n)) throw InvalidArgument("fft_inplace: length must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      // Twiddles evaluated directly rather than by recurrence to avoid drift.
      const cplx w = std::polar(1.0, ang * static_cast<double>(k));
      for (std::size_t i = k; i < n; i += len) {
        const cplx u = x[i];
        const cplx v = x[i + half] * w;
        x[i] = u + v;
        x[i + half] = u - v;
      }
    }
  }
}

/// Forward DFT of any length (radix-2 FFT when possible, direct sum otherwise).
inline std::vector<cplx> dft(std::span<const cplx> x) {
  std::vector<cplx> out(x.begin(), x.end());
  if (std::has_single_bit(out.size())) {
    fft_inplace(out);
    return out;
  }
  const std::size_t n = x.size();
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc{};
    for (std::size_t m = 0; m < n; ++m)
      acc += x[m] * std::polar(1.0, -2.0 * kPi * static_cast<double>((k * m) % n) / static_cast<double>(n));
    out[k] = acc;
  }
  return out;
}

}  // namespace isac
