#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "isac/core/constants.hpp"
#include "isac/core/error.hpp"

namespace isac {

/// Radio and time-budget parameters shared by every stage of the simulator.
///
/// Antenna gains and user pathlosses are held in dB (the unit the config file
/// uses) so that a save/load round trip is exact; linear accessors are provided.
/// Immutable after validation; safe to share between threads.
struct SystemConfig {
  double carrier_freq_hz = 3.5e9;
  double bandwidth_hz = 10e6;
  double sample_rate_hz = 10e6;
  double sweep_time_s = 10e-6;
  double slot_time_s = 50e-6;
  double pri_s = 1e-3;  // slow-time spacing of cycles
  double tx_power_w = 1.0;
  double noise_power_w = 1e-13;
  double sensing_gain_db = 25.0;
  double comm_gain_db = 0.0;
  double total_time_s = 1.0;
  int num_targets = 1;
  int num_users = 5;
  std::vector<double> user_pathloss_db = std::vector<double>(5, -50.0);
  std::optional<std::vector<double>> user_gains;  // linear, overrides sampling
  std::uint64_t seed = 0;

  double wavelength_m() const { return kSpeedOfLight / carrier_freq_hz; }
  double sensing_gain() const { return db_to_linear(sensing_gain_db); }
  double comm_gain() const { return db_to_linear(comm_gain_db); }

  /// Fast-time samples per slot, L = round(T_0 f_s).
  std::size_t fast_time_len() const {
    return static_cast<std::size_t>(std::llround(slot_time_s * sample_rate_hz));
  }
  /// Samples in one chirp sweep.
  std::size_t sweep_len() const {
    return static_cast<std::size_t>(std::llround(sweep_time_s * sample_rate_hz));
  }

  std::vector<double> user_pathloss_linear() const {
    std::vector<double> out;
    out.reserve(user_pathloss_db.size());
    for (double db : user_pathloss_db) out.push_back(db_to_linear(db));
    return out;
  }

  /// Throws ConfigError naming the config-file key of the first violated invariant.
  void validate() const {
    auto positive = [](const char* key, double v) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be finite and > 0");
    };
    positive("carrier_freq_hz", carrier_freq_hz);
    positive("bandwidth_hz", bandwidth_hz);
    positive("sample_rate_hz", sample_rate_hz);
    positive("sweep_time_s", sweep_time_s);
    positive("slot_time_s", slot_time_s);
    positive("pri_s", pri_s);
    positive("tx_power_w", tx_power_w);
    positive("noise_power_w", noise_power_w);
    positive("total_time_s", total_time_s);
    if (!std::isfinite(sensing_gain_db)) throw ConfigError("sensing_gain_db", "must be finite");
    if (!std::isfinite(comm_gain_db)) throw ConfigError("comm_gain_db", "must be finite");
    if (sweep_time_s > slot_time_s)
      throw ConfigError("sweep_time_s", "sweep time exceeds slot time (T_sw <= T_0 required)");
    if (slot_time_s > pri_s)
      throw ConfigError("slot_time_s", "slot time exceeds pri (T_0 <= pri required)");
    const double exact = slot_time_s * sample_rate_hz;
    const auto len = static_cast<double>(fast_time_len());
    if (len < 1.0) throw ConfigError("slot_time_s", "fewer than one fast-time sample per slot");
    if (std::abs(exact - len) >= 1e-9 * len)
      throw ConfigError("slot_time_s", "slot_time_s * sample_rate_hz is not an integer");
    if (num_targets < 1) throw ConfigError("num_targets", "must be >= 1");
    if (num_users < 0) throw ConfigError("num_users", "must be >= 0");
    if (user_pathloss_db.size() != static_cast<std::size_t>(num_users))
      throw ConfigError("user_pathloss_db", "expected num_users entries");
    if (user_gains) {
      if (user_gains->size() != static_cast<std::size_t>(num_users))
        throw ConfigError("user_gains", "expected num_users entries");
      for (double g : *user_gains)
        if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("user_gains", "gains must be >= 0");
    }
  }

  bool operator==(const SystemConfig&) const = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc() || ptr != end || t.empty())
    throw ConfigError(key, "cannot parse '" + t + "' as a number");
  return v;
}

inline long long parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc() || ptr != end || t.empty())
    throw ConfigError(key, "cannot parse '" + t + "' as an integer");
  return v;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  return out;
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

/// Parses `key = value` text with `#` comments into a validated SystemConfig.
inline SystemConfig parse_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    std::string key = detail::trim(std::string_view(line).substr(0, eq));
    if (kv.contains(key)) throw ConfigError(key, "duplicate key");
    kv[key] = detail::trim(std::string_view(line).substr(eq + 1));
  }

  auto take = [&](const std::string& key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError(key, "missing key");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  SystemConfig cfg;
  cfg.carrier_freq_hz = detail::parse_double("carrier_freq_hz", take("carrier_freq_hz"));
  cfg.bandwidth_hz = detail::parse_double("bandwidth_hz", take("bandwidth_hz"));
  cfg.sample_rate_hz = detail::parse_double("sample_rate_hz", take("sample_rate_hz"));
  cfg.sweep_time_s = detail::parse_double("sweep_time_s", take("sweep_time_s"));
  cfg.slot_time_s = detail::parse_double("slot_time_s", take("slot_time_s"));
  cfg.pri_s = detail::parse_double("pri_s", take("pri_s"));
  cfg.tx_power_w = detail::parse_double("tx_power_w", take("tx_power_w"));

  const bool has_w = kv.contains("noise_power_w");
  const bool has_dbm = kv.contains("noise_power_dbm");
  if (has_w && has_dbm)
    throw ConfigError("noise_power_w", "give noise_power_w or noise_power_dbm, not both");
  if (has_w) {
    cfg.noise_power_w = detail::parse_double("noise_power_w", take("noise_power_w"));
  } else if (has_dbm) {
    cfg.noise_power_w = dbm_to_watts(detail::parse_double("noise_power_dbm", take("noise_power_dbm")));
  } else {
    throw ConfigError("noise_power_w", "missing key (noise_power_w or noise_power_dbm)");
  }

  cfg.sensing_gain_db = detail::parse_double("sensing_gain_db", take("sensing_gain_db"));
  cfg.comm_gain_db = detail::parse_double("comm_gain_db", take("comm_gain_db"));
  cfg.total_time_s = detail::parse_double("total_time_s", take("total_time_s"));
  cfg.num_targets = static_cast<int>(detail::parse_int("num_targets", take("num_targets")));
  cfg.num_users = static_cast<int>(detail::parse_int("num_users", take("num_users")));
  cfg.user_pathloss_db = detail::parse_list("user_pathloss_db", take("user_pathloss_db"));
  if (kv.contains("user_gains")) cfg.user_gains = detail::parse_list("user_gains", take("user_gains"));
  if (kv.contains("seed")) {
    const auto s = detail::parse_int("seed", take("seed"));
    if (s < 0) throw ConfigError("seed", "must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (!kv.empty()) throw ConfigError(kv.begin()->first, "unknown key");

  cfg.validate();
  return cfg;
}

inline SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  return parse_config(in);
}

inline void write_config(std::ostream& out, const SystemConfig& cfg) {
  using detail::format_double;
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
  };
  out << "carrier_freq_hz = " << format_double(cfg.carrier_freq_hz) << '\n'
      << "bandwidth_hz = " << format_double(cfg.bandwidth_hz) << '\n'
      << "sample_rate_hz = " << format_double(cfg.sample_rate_hz) << '\n'
      << "sweep_time_s = " << format_double(cfg.sweep_time_s) << '\n'
      << "slot_time_s = " << format_double(cfg.slot_time_s) << '\n'
      << "pri_s = " << format_double(cfg.pri_s) << '\n'
      << "tx_power_w = " << format_double(cfg.tx_power_w) << '\n'
      << "noise_power_w = " << format_double(cfg.noise_power_w) << '\n'
      << "sensing_gain_db = " << format_double(cfg.sensing_gain_db) << '\n'
      << "comm_gain_db = " << format_double(cfg.comm_gain_db) << '\n'
      << "total_time_s = " << format_double(cfg.total_time_s) << '\n'
      << "num_targets = " << cfg.num_targets << '\n'
      << "num_users = " << cfg.num_users << '\n'
      << "user_pathloss_db = " << list(cfg.user_pathloss_db) << '\n';
  if (cfg.user_gains) out << "user_gains = " << list(*cfg.user_gains) << '\n';
  out << "seed = " << cfg.seed << '\n';
}

inline void save_config(const std::string& path, const SystemConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw ConfigError("config", "cannot write '" + path + "'");
  write_config(out, cfg);
}

}  // namespace isac
