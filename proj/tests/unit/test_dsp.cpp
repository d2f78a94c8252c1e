#include <gtest/gtest.h>

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "isac/core/rng.hpp"
#include "isac/dsp/chirp.hpp"
#include "isac/dsp/fft.hpp"
#include "isac/dsp/image.hpp"
#include "isac/dsp/slow_time.hpp"
#include "isac/dsp/stft.hpp"

using namespace isac;

namespace {

const double kPiRef = std::acos(-1.0);

std::vector<cplx> naive_dft(const std::vector<cplx>& x) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      out[k] += x[i] * std::polar(1.0, -2.0 * kPiRef * static_cast<double>(k * i % n) / static_cast<double>(n));
  return out;
}

// Power series of the modified Bessel function I0.
double bessel_i0(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= (x / (2.0 * k)) * (x / (2.0 * k));
    sum += term;
  }
  return sum;
}

Eigen::MatrixXcd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  RngStream rng(seed, "matrix");
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.complex_normal(1.0);
  return m;
}

SystemConfig fast_chirp_config() {
  SystemConfig cfg;
  cfg.sample_rate_hz = 1e8;
  return cfg;
}

}  // namespace

TEST(Fft, MatchesNaiveDft) {
  for (std::size_t n : {1u, 2u, 8u, 12u, 64u, 100u}) {
    RngStream rng(n, "fft");
    std::vector<cplx> x(n);
    for (auto& v : x) v = rng.complex_normal(1.0);
    const auto a = dft(x), b = naive_dft(x);
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(std::abs(a[k] - b[k]), 0.0, 1e-10) << n;
  }
}

TEST(Chirp, InstantaneousFrequencySweepsBand) {
  const SystemConfig cfg = fast_chirp_config();
  const auto s = synthesize_chirp(cfg);
  ASSERT_EQ(s.size(), cfg.sweep_len());
  const double slope = cfg.bandwidth_hz / cfg.sweep_time_s;
  const double fs = cfg.sample_rate_hz;
  auto inst = [&](std::size_t i) { return std::arg(s[i + 1] * std::conj(s[i])) * fs / (2.0 * kPiRef); };
  EXPECT_NEAR(inst(0), -cfg.bandwidth_hz / 2, slope / fs);
  EXPECT_NEAR(inst(s.size() - 2), cfg.bandwidth_hz / 2, 2 * slope / fs);
  for (std::size_t i = 1; i + 1 < s.size(); ++i) EXPECT_GT(inst(i), inst(i - 1));
  for (cplx v : s) EXPECT_NEAR(std::norm(v), cfg.tx_power_w, 1e-12);
}

TEST(Chirp, AutocorrelationNullNearInverseBandwidth) {
  const SystemConfig cfg = fast_chirp_config();
  const auto s = synthesize_chirp(cfg);
  auto corr = [&](std::size_t lag) {
    cplx acc{};
    for (std::size_t i = 0; i + lag < s.size(); ++i) acc += s[i + lag] * std::conj(s[i]);
    return std::abs(acc);
  };
  const double peak = corr(0);
  for (std::size_t lag = 1; lag < 50; ++lag) EXPECT_LT(corr(lag), peak);
  std::size_t null = 1;
  while (corr(null + 1) < corr(null)) ++null;
  const double expected = cfg.sample_rate_hz / cfg.bandwidth_hz;
  EXPECT_NEAR(static_cast<double>(null), expected, 1.0);
}

TEST(SlowTime, StackingAndErrors) {
  const std::vector<std::vector<cplx>> one = {{{1, 0}, {2, 0}, {3, 0}}};
  const auto m = stack_cycles(one);
  EXPECT_EQ(m.fast_len(), 3);
  EXPECT_EQ(m.cycles(), 1);
  EXPECT_THROW(stack_cycles({}), InvalidArgument);
  EXPECT_THROW(stack_cycles({{{1, 0}}, {{1, 0}, {2, 0}}}), InvalidArgument);
}

TEST(Svd, ReconstructsAndMatchesJacobi) {
  for (auto [rows, cols] : {std::pair{40, 12}, std::pair{9, 30}}) {
    const Eigen::MatrixXcd x = random_matrix(rows, cols, static_cast<std::uint64_t>(rows));
    const SvdResult svd = thin_svd(x);
    Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(rows, cols);
    for (Eigen::Index j = 0; j < svd.values.size(); ++j)
      rebuilt += svd.values(j) * svd.left.col(j) * svd.right.col(j).adjoint();
    EXPECT_LE((rebuilt - x).norm(), 1e-8 * x.norm());
    const Eigen::JacobiSVD<Eigen::MatrixXcd> ref(x);
    ASSERT_EQ(svd.values.size(), ref.singularValues().size());
    for (Eigen::Index j = 0; j < svd.values.size(); ++j)
      EXPECT_NEAR(svd.values(j), ref.singularValues()(j), 1e-9 * ref.singularValues()(0));
  }
}

TEST(Svd, ThresholdOneIsIdentity) {
  SlowTimeMatrix x{random_matrix(10, 6, 3)};
  EXPECT_EQ(svd_denoise(x, 1).data, x.data);
}

TEST(Svd, RankOneRemoved) {
  const Eigen::VectorXcd a = random_matrix(20, 1, 4).col(0), b = random_matrix(15, 1, 5).col(0);
  SlowTimeMatrix x{a * b.adjoint()};
  EXPECT_LE(svd_denoise(x, 2).data.norm(), 1e-10 * x.data.norm());
}

TEST(Svd, StaticClutterRemovedWeakToneKept) {
  const Eigen::Index rows = 30, cols = 256;
  const Eigen::VectorXcd profile = random_matrix(rows, 1, 6).col(0);
  const Eigen::VectorXcd mover = random_matrix(rows, 1, 7).col(0);
  SlowTimeMatrix x;
  x.data.resize(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    x.data.col(c) = 100.0 * profile + std::polar(1.0, 2.0 * kPiRef * 0.1 * c) * mover;
  const auto y = svd_denoise(x, 2);
  // Energy left along the static profile direction.
  const Eigen::VectorXcd u = profile.normalized();
  const double static_before = (u.adjoint() * x.data).squaredNorm();
  const double static_after = (u.adjoint() * y.data).squaredNorm();
  EXPECT_LT(static_after, 0.01 * static_before);
  EXPECT_GT(y.data.squaredNorm(), 0.5 * (mover.squaredNorm() * cols));
}

TEST(Svd, EnergyDecreasesWithThresholdAndComposes) {
  SlowTimeMatrix x{random_matrix(12, 20, 8)};
  double prev = x.data.squaredNorm();
  for (int r = 2; r <= 10; ++r) {
    const double e = svd_denoise(x, r).data.squaredNorm();
    EXPECT_LE(e, prev * (1 + 1e-12));
    prev = e;
  }
  // Dropping a then b components equals dropping a + b at once.
  const auto twice = svd_denoise(svd_denoise(x, 3), 4);
  const auto once = svd_denoise(x, 6);
  EXPECT_LE((twice.data - once.data).norm(), 1e-8 * x.data.norm());
  const auto y = svd_denoise(x, 4);
  EXPECT_LE((svd_denoise(y, 1).data - y.data).norm(), 0.0);
}

TEST(Svd, ThresholdOutOfRange) {
  SlowTimeMatrix x{random_matrix(5, 4, 9)};
  EXPECT_THROW(svd_denoise(x, 0), InvalidArgument);
  EXPECT_THROW(svd_denoise(x, 6), InvalidArgument);
  EXPECT_NO_THROW(svd_denoise(x, 5));
}

TEST(Dechirp, ReferenceColumnsGiveConstantEnergy) {
  const SystemConfig cfg;
  const auto s = synthesize_chirp(cfg);
  SlowTimeMatrix y;
  y.data = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(cfg.fast_time_len()), 4);
  for (Eigen::Index c = 0; c < 4; ++c)
    for (std::size_t l = 0; l < s.size(); ++l) y.data(static_cast<Eigen::Index>(l), c) = s[l];
  for (cplx v : dechirp_and_collapse(y, s)) {
    EXPECT_NEAR(v.real(), cfg.tx_power_w * static_cast<double>(s.size()), 1e-9);
    EXPECT_NEAR(v.imag(), 0.0, 1e-9);
  }
}

TEST(Dechirp, SlowTimeToneIsConjugated) {
  const SystemConfig cfg;
  const auto s = synthesize_chirp(cfg);
  const std::size_t n = 256;
  const double omega = 2.0 * kPiRef * 20.0 / n;
  SlowTimeMatrix y;
  y.data = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(cfg.fast_time_len()), n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t l = 0; l < s.size(); ++l)
      y.data(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(c)) = s[l] * std::polar(1.0, omega * c);
  const auto out = dechirp_and_collapse(y, s);
  const auto spec = dft(out);
  std::size_t best = 0;
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
  EXPECT_EQ(best, n - 20);
}

TEST(Dechirp, ZeroInputAndErrors) {
  const SystemConfig cfg;
  const auto s = synthesize_chirp(cfg);
  SlowTimeMatrix y{Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(cfg.fast_time_len()), 3)};
  for (cplx v : dechirp_and_collapse(y, s)) EXPECT_EQ(v, cplx{});
  SlowTimeMatrix tiny{Eigen::MatrixXcd::Zero(10, 3)};
  EXPECT_THROW(dechirp_and_collapse(tiny, s), InvalidArgument);
}

TEST(Stft, KaiserMatchesSeries) {
  const auto w = kaiser_window(33, 8.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double r = 2.0 * i / 32.0 - 1.0;
    EXPECT_NEAR(w[i], bessel_i0(8.0 * std::sqrt(1 - r * r)) / bessel_i0(8.0), 1e-12);
    EXPECT_NEAR(w[i], w[w.size() - 1 - i], 1e-15);
  }
  EXPECT_NEAR(w[16], 1.0, 1e-15);
}

TEST(Stft, ToneRidgeAtNearestBin) {
  const double fs = 1000.0, f0 = 137.0;
  const std::size_t window = 128;
  std::vector<cplx> y(1000);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::polar(1.0, 2.0 * kPiRef * f0 * i / fs);
  const auto s = stft(y, window, 4, fs);
  EXPECT_EQ(s.frames(), static_cast<Eigen::Index>((1000 - window) / 4 + 1));
  for (Eigen::Index l = 0; l < s.frames(); ++l) {
    Eigen::Index row = 0;
    s.z.col(l).maxCoeff(&row);
    EXPECT_LE(std::abs(s.row_frequency(row) - f0), s.bin_width());
  }
  // Negative frequencies land below the centre row.
  for (auto& v : y) v = std::conj(v);
  Eigen::Index row = 0;
  stft(y, window, 4, fs).z.col(0).maxCoeff(&row);
  EXPECT_LE(std::abs(s.row_frequency(row) + f0), s.bin_width());
}

TEST(Stft, ParsevalPerFrame) {
  RngStream rng(5, "parseval");
  std::vector<cplx> y(300);
  for (auto& v : y) v = rng.complex_normal(1.0);
  const std::size_t window = 64;
  const auto w = kaiser_window(window, 8.0);
  const auto s = stft(y, window, 7, 1.0);
  for (Eigen::Index l = 0; l < s.frames(); ++l) {
    double time = 0.0;
    for (std::size_t i = 0; i < window; ++i) time += std::norm(y[l * 7 + i] * w[i]);
    EXPECT_NEAR(s.z.col(l).squaredNorm(), window * time, 1e-9 * window * time);
  }
}

TEST(Stft, ZeroAndErrors) {
  const std::vector<cplx> zero(64);
  EXPECT_EQ(stft(zero, 16, 1, 1.0).z.maxCoeff(), 0.0);
  EXPECT_THROW(stft(zero, 65, 1, 1.0), InvalidArgument);
  EXPECT_THROW(stft(zero, 0, 1, 1.0), InvalidArgument);
}

TEST(Gray, ConstantSpectrogram) {
  const auto g = to_gray_and_pmf(Eigen::MatrixXd::Constant(8, 5, 3.0), 60.0, 64);
  for (auto p : g.image.pixels) EXPECT_EQ(p, 255);
  EXPECT_EQ(g.pmf.back(), 1.0);
}

TEST(Gray, TwoLevels) {
  Eigen::MatrixXd z(4, 4);
  z.topRows(2).setConstant(1.0);
  z.bottomRows(2).setConstant(0.1);
  const auto g = to_gray_and_pmf(z, 60.0, 64);
  // 20 dB down in a 60 dB range maps to 255 * 40 / 60.
  EXPECT_EQ(g.image.at(3, 0), 255);
  EXPECT_EQ(g.image.at(0, 0), 170);
  EXPECT_DOUBLE_EQ(g.pmf[63], 0.5);
  EXPECT_DOUBLE_EQ(g.pmf[170 * 64 / 256], 0.5);
}

TEST(Gray, FullResolutionHistogram) {
  Eigen::MatrixXd z(1, 256);
  for (int i = 0; i < 256; ++i) z(0, i) = std::pow(10.0, (i / 255.0 * 60.0) / 20.0);
  const auto g = to_gray_and_pmf(z, 60.0, 256);
  for (double p : g.pmf) EXPECT_NEAR(p, 1.0 / 256, 1e-15);
}

TEST(Gray, ClipsBelowRange) {
  Eigen::MatrixXd z(1, 3);
  z << 1.0, 1e-4, 0.0;
  const auto g = to_gray_and_pmf(z, 60.0, 4);
  EXPECT_EQ(g.image.at(0, 1), 0);
  EXPECT_EQ(g.image.at(0, 2), 0);
  EXPECT_NEAR(g.pmf[0], 2.0 / 3, 1e-15);
}

TEST(Gray, Errors) {
  EXPECT_THROW(to_gray_and_pmf(Eigen::MatrixXd::Zero(3, 3), 60.0, 64), InvalidArgument);
  EXPECT_THROW(to_gray_and_pmf(Eigen::MatrixXd::Ones(3, 3), 60.0, 1), InvalidArgument);
}

TEST(Gray, PgmRoundTrip) {
  Eigen::MatrixXd z(6, 9);
  RngStream rng(1, "pgm");
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.uniform(0.0, 1.0);
  const auto g = to_gray_and_pmf(z, 60.0, 64);
  std::stringstream buf;
  write_pgm(buf, g.image);
  EXPECT_EQ(read_pgm(buf), g.image);
}
