#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "isac/core/constants.hpp"
#include "isac/core/error.hpp"

namespace isac {

struct Tap {
  double delay = 0.0;  // s
  cplx amplitude{};
};

/// Channel impulse response as a delay-sorted list of Dirac taps.
class TapList {
 public:
  TapList() = default;
  explicit TapList(std::vector<Tap> taps) : taps_(std::move(taps)) {
    std::stable_sort(taps_.begin(), taps_.end(),
                     [](const Tap& a, const Tap& b) { return a.delay < b.delay; });
    for (const Tap& t : taps_) {
      if (!(t.delay >= 0.0) || !std::isfinite(t.delay)) throw InvalidArgument("TapList: delay must be >= 0");
      if (!std::isfinite(t.amplitude.real()) || !std::isfinite(t.amplitude.imag()))
        throw InvalidArgument("TapList: non-finite amplitude");
    }
  }

  const std::vector<Tap>& taps() const { return taps_; }
  std::size_t size() const { return taps_.size(); }
  bool empty() const { return taps_.empty(); }
  const Tap& operator[](std::size_t i) const { return taps_[i]; }

  double max_delay() const { return taps_.empty() ? 0.0 : taps_.back().delay; }

  /// True when both lists carry the same delays in the same order.
  bool same_support(const TapList& other) const {
    if (size() != other.size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
      if (taps_[i].delay != other.taps_[i].delay) return false;
    return true;
  }

  /// Concatenation (h = u + v as a tap list).
  friend TapList operator+(const TapList& a, const TapList& b) {
    std::vector<Tap> all = a.taps_;
    all.insert(all.end(), b.taps_.begin(), b.taps_.end());
    return TapList(std::move(all));
  }

 private:
  std::vector<Tap> taps_;
};

/// CSV `tau_s,re,im`.
inline void write_taps_csv(std::ostream& out, const TapList& taps) {
  out << "tau_s,re,im\n";
  out.precision(17);
  for (const Tap& t : taps.taps()) out << t.delay << ',' << t.amplitude.real() << ',' << t.amplitude.imag() << '\n';
}

}  // namespace isac
