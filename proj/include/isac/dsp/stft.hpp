#pragma once

#include <Eigen/Core>
#include <cmath>
#include <span>
#include <vector>

#include "isac/core/constants.hpp"
#include "isac/core/error.hpp"
#include "isac/dsp/fft.hpp"

namespace isac {

inline constexpr double kDefaultKaiserBeta = 8.0;

/// Symmetric Kaiser window of length n.
inline std::vector<double> kaiser_window(std::size_t n, double beta) {
  std::vector<double> w(n, 1.0);
  if (n == 1) return w;
  const double norm = std::cyl_bessel_i(0.0, beta);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = 2.0 * static_cast<double>(i) / static_cast<double>(n - 1) - 1.0;
    w[i] = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / norm;
  }
  return w;
}

/// Magnitude STFT of a slow-time sequence. Rows are FFT-shifted frequency bins
/// (row k <-> (k - W/2) * fs / W, so row 0 is -fs/2), columns are frames.
struct Spectrogram {
  Eigen::MatrixXd z;  // W x frames, >= 0
  std::size_t window = 0;
  std::size_t hop = 1;
  double sample_rate = 1.0;  // slow-time rate 1/pri, Hz

  Eigen::Index bins() const { return z.rows(); }
  Eigen::Index frames() const { return z.cols(); }
  double bin_width() const { return sample_rate / static_cast<double>(window); }
  double row_frequency(Eigen::Index row) const {
    return static_cast<double>(row - static_cast<Eigen::Index>(window / 2)) * bin_width();
  }
};

/// Z(k, l) = | sum_i y(l hop + i) w(i) exp(-j 2 pi f_k i / W) |.
inline Spectrogram stft(std::span<const cplx> y, std::size_t window, std::size_t hop, double sample_rate,
                        double kaiser_beta = kDefaultKaiserBeta) {
  if (window == 0 || hop == 0) throw InvalidArgument("stft: window and hop must be >= 1");
  if (window > y.size()) throw InvalidArgument("stft: window longer than the input");
  const auto w = kaiser_window(window, kaiser_beta);
  const std::size_t frames = (y.size() - window) / hop + 1;

  Spectrogram s;
  s.window = window;
  s.hop = hop;
  s.sample_rate = sample_rate;
  s.z.resize(static_cast<Eigen::Index>(window), static_cast<Eigen::Index>(frames));
  std::vector<cplx> buf(window);
  const std::size_t half = window / 2;
  for (std::size_t l = 0; l < frames; ++l) {
    for (std::size_t i = 0; i < window; ++i) buf[i] = y[l * hop + i] * w[i];
    const auto spec = dft(buf);
    for (std::size_t k = 0; k < window; ++k)
      s.z(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = std::abs(spec[(k + window - half) % window]);
  }
  return s;
}

}  // namespace isac
