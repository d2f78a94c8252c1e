#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "isac/core/constants.hpp"

namespace isac {

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Deterministic random stream identified by (seed, stream_id).
///
/// Two streams with the same identity produce identical draw sequences.
/// Streams are single-owner; parallel work takes its own stream via child().
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string stream_id)
      : seed_(seed), id_(std::move(stream_id)) {
    const std::uint64_t h = fnv1a64(id_);
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t seed() const { return seed_; }
  const std::string& stream_id() const { return id_; }

  /// Independent stream derived from this one's identity (not its state).
  RngStream child(std::string_view label) const {
    return RngStream(seed_, id_ + "/" + std::string(label));
  }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(engine_);
  }
  double normal() { return normal_(engine_); }

  /// CN(0, variance): independent real/imaginary parts with variance/2 each.
  cplx complex_normal(double variance = 1.0) {
    const double s = std::sqrt(variance / 2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

  /// Rayleigh with scale sigma (E[x^2] = 2 sigma^2).
  double rayleigh(double sigma) {
    const double u = 1.0 - uniform();  // (0, 1]
    return sigma * std::sqrt(-2.0 * std::log(u));
  }

  double exponential(double rate) { return std::exponential_distribution<double>(rate)(engine_); }

  /// First `count` arrival times of a Poisson process with the given rate,
  /// anchored at 0 (the first arrival opens the cluster).
  std::vector<double> arrival_times(double rate, std::size_t count) {
    std::vector<double> t;
    t.reserve(count);
    double now = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      if (i > 0) now += exponential(rate);
      t.push_back(now);
    }
    return t;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::string id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace isac
