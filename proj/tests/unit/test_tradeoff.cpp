#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "isac/core/gains.hpp"
#include "isac/tradeoff/allocation.hpp"
#include "isac/tradeoff/region.hpp"
#include "support/maxmin_oracle.hpp"

using namespace isac;

namespace {

const std::vector<CurvePoint> kPublished = {{200, 0.788}, {300, 0.902}, {400, 0.916},
                                            {500, 0.926}, {600, 0.932}, {1000, 0.956}};

SystemConfig region_config() {
  SystemConfig cfg;
  cfg.slot_time_s = 60e-6;
  cfg.pri_s = 1e-3;
  cfg.sample_rate_hz = 10e6;
  return cfg;
}

std::vector<double> seeded_gains(const SystemConfig& cfg, std::uint64_t seed) {
  RngStream rng(seed, "gains");
  return sample_user_gains(cfg, rng);
}

CurveFit published_pow3() { return make_curve_fit(CurveFamily::pow3, {61906, 2.4297, 0.9499}, kPublished); }

}  // namespace

TEST(Rate, Basics) {
  SystemConfig cfg;
  EXPECT_EQ(user_rate(0.0, 1e-5, cfg), 0.0);
  const double g = cfg.noise_power_w / cfg.tx_power_w;
  EXPECT_NEAR(user_rate(cfg.total_time_s, g, cfg), cfg.bandwidth_hz, 1e-6);
  EXPECT_THROW(user_rate(-1.0, g, cfg), InvalidArgument);
  cfg.comm_gain_db = 10.0;
  EXPECT_NEAR(spectral_efficiency(g, cfg), std::log2(11.0), 1e-12);
}

TEST(Rate, MaxCycles) {
  SystemConfig cfg;
  EXPECT_EQ(max_cycles(cfg), 20000u);
  cfg.slot_time_s = 60e-6;
  EXPECT_EQ(max_cycles(cfg), 16666u);
  cfg.num_targets = 2;
  EXPECT_EQ(max_cycles(cfg), 8333u);
}

TEST(Allocation, FullSensingBudgetLeavesNothing) {
  SystemConfig cfg;
  const std::vector<double> g = {1e-5, 2e-5};
  const auto r = optimal_allocation(max_cycles(cfg), g, cfg);
  EXPECT_NEAR(r.rate, 0.0, 1e-9);
  for (double t : r.t) EXPECT_NEAR(t, 0.0, 1e-15);
  EXPECT_THROW(optimal_allocation(max_cycles(cfg) + 1, g, cfg), Infeasible);
}

TEST(Allocation, IdenticalGainsSplitEvenly) {
  SystemConfig cfg;
  const std::vector<double> g(4, 3e-6);
  const auto r = optimal_allocation(1000, g, cfg);
  const double free = cfg.total_time_s - 1000 * cfg.slot_time_s;
  for (double t : r.t) EXPECT_NEAR(t, free / 4, 1e-15);
}

TEST(Allocation, ZeroGainIsInfeasible) {
  SystemConfig cfg;
  EXPECT_THROW(optimal_allocation(10, std::vector<double>{1e-5, 0.0}, cfg), Infeasible);
  EXPECT_THROW(optimal_allocation(10, std::vector<double>{}, cfg), InvalidArgument);
}

TEST(Allocation, EqualRatesFeasibilityAndKkt) {
  SystemConfig cfg;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = seeded_gains(cfg, seed);
    const std::size_t c = 500 + 700 * seed;
    const auto r = optimal_allocation(c, g, cfg);
    const double budget = cfg.total_time_s - sensing_time(c, cfg);
    EXPECT_NEAR(std::accumulate(r.t.begin(), r.t.end(), 0.0), budget, 1e-9 * cfg.total_time_s);
    for (std::size_t k = 0; k < g.size(); ++k) {
      EXPECT_GE(r.t[k], 0.0);
      EXPECT_NEAR(user_rate(r.t[k], g[k], cfg), r.rate, 1e-12 * r.rate);
      EXPECT_GT(r.eta[k], 0.0);
    }
    EXPECT_NEAR(std::accumulate(r.eta.begin(), r.eta.end(), 0.0), 1.0, 1e-12);
    EXPECT_NEAR(r.lagrange, -1.0 / r.inverse_rate_sum, 1e-18);
  }
}

TEST(Allocation, MatchesBruteForce) {
  SystemConfig cfg;
  const auto g = seeded_gains(cfg, 42);
  for (std::size_t c : {0u, 100u, 5000u, 19000u}) {
    const auto r = optimal_allocation(c, g, cfg);
    const double brute = test_support::greedy_maxmin(g, cfg, cfg.total_time_s - sensing_time(c, cfg), 10000);
    EXPECT_LE(brute, r.rate * (1 + 1e-12));
    EXPECT_NEAR(brute, r.rate, 1e-3 * std::max(r.rate, 1.0));
  }
}

TEST(Allocation, GreedyOracleAgreesWithExhaustiveSearch) {
  SystemConfig cfg;
  cfg.num_users = 3;
  cfg.user_pathloss_db = {-50, -55, -60};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = seeded_gains(cfg, seed);
    const double budget = 0.7;
    EXPECT_DOUBLE_EQ(test_support::greedy_maxmin(g, cfg, budget, 200), test_support::exhaustive_maxmin3(g, cfg, budget, 200));
  }
}

TEST(Allocation, NoRandomFeasiblePointDominates) {
  // Pareto property: random (C, t) with the same C never beat R*.
  SystemConfig cfg;
  const auto g = seeded_gains(cfg, 7);
  RngStream rng(7, "pareto");
  for (int i = 0; i < 100000; ++i) {
    const auto c = static_cast<std::size_t>(rng.uniform_int(0, max_cycles(cfg)));
    const double budget = cfg.total_time_s - sensing_time(c, cfg);
    std::vector<double> t(g.size());
    double s = 0.0;
    for (auto& v : t) s += v = rng.exponential(1.0);
    for (auto& v : t) v *= budget / s;
    const double r = min_rate(t, g, cfg);
    ASSERT_LE(r, optimal_allocation(c, g, cfg).rate * (1 + 1e-12) + 1e-9);
  }
}

TEST(Allocation, DoublingSpectralEfficiencyDoublesRate) {
  SystemConfig cfg;
  const auto g = seeded_gains(cfg, 3);
  std::vector<double> g2;
  for (double x : g) {
    const double snr = x * cfg.tx_power_w / cfg.noise_power_w;
    g2.push_back(((1 + snr) * (1 + snr) - 1) * cfg.noise_power_w / cfg.tx_power_w);
  }
  const auto a = optimal_allocation(1234, g, cfg), b = optimal_allocation(1234, g2, cfg);
  EXPECT_NEAR(b.rate / a.rate, 2.0, 1e-9);
}

TEST(Region, MinCyclesOfPublishedPow3) {
  // Theta(C) >= 0 from C = (alpha / gamma)^(1/beta) = 95.7.
  EXPECT_EQ(min_cycles(published_pow3()), 96u);
}

TEST(Region, BoundaryEndpointsAndShape) {
  const SystemConfig cfg = region_config();
  const auto g = seeded_gains(cfg, 7);
  const auto fit = published_pow3();
  const auto b = classify_zones(region_boundary(fit, g, cfg, 200));
  ASSERT_GT(b.points.size(), 10u);
  EXPECT_EQ(b.points.front().cycles, 96u);
  EXPECT_EQ(b.points.back().cycles, 16666u);
  EXPECT_DOUBLE_EQ(b.points.back().rate, optimal_allocation(16666, g, cfg).rate);
  EXPECT_LT(b.points.back().rate, 1e-3 * b.points.front().rate);
  EXPECT_NEAR(b.points.back().accuracy, fit(16666), 1e-15);
  for (std::size_t i = 1; i < b.points.size(); ++i) {
    EXPECT_GT(b.points[i].accuracy, b.points[i - 1].accuracy);
    EXPECT_LE(b.points[i].rate, b.points[i - 1].rate);
  }
  const auto seq = zone_sequence(b);
  ASSERT_EQ(seq.size(), 3u);
  EXPECT_EQ(seq[0], Zone::comm_saturation);
  EXPECT_EQ(seq[1], Zone::adversarial);
  EXPECT_EQ(seq[2], Zone::sensing_saturation);
}

TEST(Region, Deterministic) {
  const SystemConfig cfg = region_config();
  const auto g = seeded_gains(cfg, 7);
  std::ostringstream a, b;
  write_region_csv(a, classify_zones(region_boundary(published_pow3(), g, cfg, 50)));
  write_region_csv(b, classify_zones(region_boundary(published_pow3(), g, cfg, 50)));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "C,A,R_bps,zone");
}

TEST(Region, InfeasibleWhenBudgetTooSmall) {
  SystemConfig cfg = region_config();
  cfg.total_time_s = 1e-3;
  EXPECT_THROW(region_boundary(published_pow3(), seeded_gains(cfg, 1), cfg, 20), Infeasible);
}

TEST(Zones, AffineBoundaryIsAllAdversarial) {
  RegionBoundary b;
  for (int i = 0; i <= 10; ++i) b.points.push_back({std::size_t(i + 1), 0.5 + 0.04 * i, 10.0 - i, Zone::adversarial});
  for (const auto& p : classify_zones(b).points) EXPECT_EQ(p.zone, Zone::adversarial);
}

TEST(Zones, EqualThresholdsGiveTwoBands) {
  const SystemConfig cfg = region_config();
  const auto b = region_boundary(published_pow3(), seeded_gains(cfg, 7), cfg, 200);
  const auto z = classify_zones(b, {1.0, 1.0});
  const auto seq = zone_sequence(z);
  EXPECT_LE(seq.size(), 2u);
  for (Zone s : seq) EXPECT_NE(s, Zone::adversarial);
}

TEST(Zones, SlopeOracle) {
  RegionBoundary b;
  const std::vector<double> a = {0.1, 0.2, 0.4, 0.5}, r = {8, 7, 3, 0};
  for (std::size_t i = 0; i < a.size(); ++i) b.points.push_back({i + 1, a[i], r[i], Zone::adversarial});
  const auto s = normalized_slopes(b);
  const double scale = (0.5 - 0.1) / 8.0;
  EXPECT_NEAR(s[0], (7 - 8) / (0.2 - 0.1) * scale, 1e-12);
  EXPECT_NEAR(s[1], (3 - 8) / (0.4 - 0.1) * scale, 1e-12);
  EXPECT_NEAR(s[3], (0 - 3) / (0.5 - 0.4) * scale, 1e-12);
}

TEST(Zones, Errors) {
  RegionBoundary b;
  b.points.push_back({1, 0.1, 1.0, Zone::adversarial});
  b.points.push_back({2, 0.2, 0.5, Zone::adversarial});
  EXPECT_THROW(classify_zones(b), InvalidArgument);
  b.points.push_back({3, 0.3, 0.0, Zone::adversarial});
  EXPECT_THROW(classify_zones(b, {2.0, 1.0}), InvalidArgument);
}

TEST(Gains, CsvReader) {
  std::istringstream in("g\n# comment\n1e-5\n2e-6\n");
  EXPECT_EQ(read_gains_csv(in), (std::vector<double>{1e-5, 2e-6}));
  std::istringstream bad("x\n");
  EXPECT_THROW(read_gains_csv(bad), InvalidArgument);
}
