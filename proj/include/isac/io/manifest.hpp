#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "isac/core/error.hpp"

namespace isac {

/// Lower-case hex SHA-256 of a file's bytes.
inline std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "' for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256: init failed");
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0 && EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount())) != 1)
      throw Error("sha256: update failed");
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) throw Error("sha256: final failed");
  std::ostringstream hex;
  for (unsigned i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

/// Record of one CLI run: inputs plus a content hash per written artifact.
/// Contains no timestamps or host data, so identical runs give identical bytes.
struct RunManifest {
  std::string command;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string output_dir;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::vector<std::string> artifacts;  // relative to output_dir

  void add(const std::string& file) { artifacts.push_back(file); }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["config"] = config_path;
    j["seed"] = seed;
    j["output_dir"] = output_dir;
    j["parameters"] = parameters;
    auto files = artifacts;
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& f : files) {
      const auto path = std::filesystem::path(output_dir) / f;
      list.push_back({{"file", f}, {"bytes", std::filesystem::file_size(path)}, {"sha256", sha256_file(path)}});
    }
    j["artifacts"] = list;
    return j;
  }

  /// Writes manifest.json into output_dir.
  void write() const {
    const auto path = std::filesystem::path(output_dir) / "manifest.json";
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << to_json().dump(2) << '\n';
  }
};

}  // namespace isac
