#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "isac/core/error.hpp"
#include "isac/dsp/stft.hpp"

namespace isac {

/// 8-bit image in display orientation: row 0 holds the highest frequency bin.
struct GrayImage {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  std::uint8_t at(std::size_t r, std::size_t c) const { return pixels[r * cols + c]; }
  bool operator==(const GrayImage&) const = default;
};

struct GrayResult {
  GrayImage image;
  std::vector<double> pmf;  // E bins
};

inline constexpr double kDefaultDynamicRangeDb = 60.0;
inline constexpr int kDefaultGrayBins = 64;

/// Normalized histogram over E equal-width bins of the 256 gray levels.
inline std::vector<double> gray_pmf(const GrayImage& img, int bins) {
  if (bins < 2) throw InvalidArgument("gray_pmf: need at least 2 bins");
  if (img.pixels.empty()) throw InvalidArgument("gray_pmf: empty image");
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  for (std::uint8_t p : img.pixels) ++counts[static_cast<std::size_t>(p) * bins / 256];
  std::vector<double> pmf(counts.size());
  const auto total = static_cast<double>(img.pixels.size());
  for (std::size_t i = 0; i < counts.size(); ++i) pmf[i] = static_cast<double>(counts[i]) / total;
  return pmf;
}

/// |Z| in dB, clipped to [max - range, max], mapped affinely onto 0..255.
inline GrayResult to_gray_and_pmf(const Eigen::MatrixXd& z, double dynamic_range_db, int bins) {
  if (bins < 2) throw InvalidArgument("to_gray_and_pmf: E must be >= 2");
  if (!(dynamic_range_db > 0.0)) throw InvalidArgument("to_gray_and_pmf: dynamic range must be > 0");
  const double peak = z.size() ? z.maxCoeff() : 0.0;
  if (!(peak > 0.0)) throw InvalidArgument("to_gray_and_pmf: all-zero spectrogram");

  const double top_db = 20.0 * std::log10(peak);
  const double floor_db = top_db - dynamic_range_db;
  GrayResult out;
  out.image.rows = static_cast<std::size_t>(z.rows());
  out.image.cols = static_cast<std::size_t>(z.cols());
  out.image.pixels.resize(out.image.rows * out.image.cols);
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    const std::size_t row = out.image.rows - 1 - static_cast<std::size_t>(r);
    for (Eigen::Index c = 0; c < z.cols(); ++c) {
      const double v = z(r, c);
      double level = 0.0;
      if (v > 0.0) {
        const double db = std::clamp(20.0 * std::log10(v), floor_db, top_db);
        level = 255.0 * (db - floor_db) / dynamic_range_db;
      }
      out.image.pixels[row * out.image.cols + static_cast<std::size_t>(c)] =
          static_cast<std::uint8_t>(std::lround(level));
    }
  }
  out.pmf = gray_pmf(out.image, bins);
  return out;
}

/// Binary PGM (P5, maxval 255).
inline void write_pgm(std::ostream& out, const GrayImage& img) {
  out << "P5\n" << img.cols << ' ' << img.rows << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
}

inline void write_pgm(const std::string& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  write_pgm(out, img);
}

inline GrayImage read_pgm(std::istream& in) {
  auto token = [&]() {
    std::string t;
    char ch = 0;
    while (in.get(ch)) {
      if (ch == '#') {
        std::string skip;
        std::getline(in, skip);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(ch))) {
        if (!t.empty()) break;
        continue;
      }
      t.push_back(ch);
    }
    return t;
  };
  if (token() != "P5") throw Error("read_pgm: not a binary PGM (P5)");
  GrayImage img;
  try {
    img.cols = std::stoul(token());
    img.rows = std::stoul(token());
    if (std::stoi(token()) != 255) throw Error("read_pgm: only maxval 255 is supported");
  } catch (const std::logic_error&) {
    throw Error("read_pgm: malformed header");
  }
  img.pixels.resize(img.rows * img.cols);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) throw Error("read_pgm: truncated pixel data");
  return img;
}

inline GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_pgm(in);
}

/// Z in dB as CSV, one line per frequency row (highest frequency first), with
/// the row frequency in the first column.
inline void write_spectrogram_db_csv(std::ostream& out, const Spectrogram& s) {
  out.precision(8);
  out << "freq_hz";
  for (Eigen::Index c = 0; c < s.frames(); ++c) out << ",t" << c;
  out << '\n';
  for (Eigen::Index r = s.bins() - 1; r >= 0; --r) {
    out << s.row_frequency(r);
    for (Eigen::Index c = 0; c < s.frames(); ++c) {
      const double v = s.z(r, c);
      out << ',' << (v > 0.0 ? 20.0 * std::log10(v) : -std::numeric_limits<double>::infinity());
    }
    out << '\n';
  }
}

}  // namespace isac
