// Copyright 2026 The DDS Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file pipeline.hpp
 * @brief End-to-end experiment: target -> conventional blur, dense scan ->
 * recovery -> metrics, driven by a flat `key = value` config file.
 *
 * Config keys (defaults in parentheses):
 *
 *     pattern           bar-grid | point-pair | siemens-star | random-blobs
 *                       (bar-grid)
 *     period, duty      bar grid (10, 0.5)
 *     separation        point pair (20)
 *     spokes            siemens star (16)
 *     blob_count, blob_radius, pattern_seed   random blobs (5, 8, 42)
 *     inset_separation  point-pair corner inset, 0 disables (20)
 *     roi_width, roi_height (300, 300); roi_size sets both
 *     pitch             nm per pixel (0.1)
 *     spot              gaussian | airy | disk (gaussian)
 *     spot_sigma        gaussian sigma in px (50.5)
 *     spot_radius       airy first-zero / disk radius in px (50)
 *     spot_side         odd spot grid side (101)
 *     step, extension   scan lattice (1, 100)
 *     background        zero | constant:<level> (zero)
 *     microscope_radius wide-field Airy first-zero radius in px (2000)
 *     microscope_side   odd PSF grid side, 0 = auto (0)
 *     noise_sigma, noise_seed   additive noise on the intermediate (0, 1)
 *     method            inverse | wiener | rl | cgls (inverse)
 *     threshold, nsr, iters, tol, max_iters   solver parameters
 *                       (1e-9, 1e-3, 50, 1e-10, 500)
 *     output_dir        (dds_out)
 *     pgm_bit_depth     8 | 16 (8)
 *
 * `#` starts a comment; blank lines are ignored; unknown keys are errors.
 */
#pragma once

#include "dds/deconv.hpp"
#include "dds/image.hpp"
#include "dds/io.hpp"
#include "dds/metrics.hpp"
#include "dds/patterns.hpp"
#include "dds/psf.hpp"
#include "dds/scanner.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dds {

/// Malformed or inconsistent pipeline configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  PatternSpec pattern = BarGrid{10, 0.5};
  long inset_separation = 20;
  long roi_width = 300;
  long roi_height = 300;
  double pitch = 0.1;
  SpotProfile spot = Gaussian{50.5};
  long spot_side = 101;
  ScanConfig scan{1, 100, BackgroundModel::zero()};
  double microscope_radius = 2000.0;
  long microscope_side = 0;
  double noise_sigma = 0.0;
  std::uint64_t noise_seed = 1;
  DeconvRequest solver = InverseFilter{1e-9};
  std::filesystem::path output_dir = "dds_out";
  int pgm_bit_depth = 8;

  /// Side of the wide-field PSF grid: large enough to couple every pair of
  /// ROI pixels, never larger than the Airy disk needs.
  long effective_microscope_side() const {
    if (microscope_side > 0)
      return microscope_side;
    const long cover = 2 * std::max(roi_width, roi_height) - 1;
    long disk = 2 * static_cast<long>(std::ceil(microscope_radius)) + 1;
    return std::min(cover, disk);
  }

  void validate() const {
    if (roi_width < 1 || roi_height < 1)
      throw ConfigError("roi dimensions must be >= 1");
    if (!(pitch > 0.0) || !std::isfinite(pitch))
      throw ConfigError("pitch must be positive");
    if (spot_side < 1 || spot_side % 2 == 0)
      throw ConfigError("spot_side must be odd and >= 1");
    if (scan.step != 1)
      throw ConfigError("pipeline recovery needs a dense scan (step = 1)");
    if (scan.extension < 0)
      throw ConfigError("extension must be >= 0");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
      throw ConfigError("noise_sigma must be >= 0");
    if (pgm_bit_depth != 8 && pgm_bit_depth != 16)
      throw ConfigError("pgm_bit_depth must be 8 or 16");
    if (microscope_side != 0 && microscope_side % 2 == 0)
      throw ConfigError("microscope_side must be odd (or 0 for auto)");
    try {
      scan.validate();
      validate_request(solver);
    } catch (const std::invalid_argument &e) {
      throw ConfigError(e.what());
    }
  }
};

namespace detail {

inline std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string &key, const std::string &text) {
  errno = 0;
  char *end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE ||
      !std::isfinite(v))
    throw ConfigError("'" + key + "': expected a real number, got '" + text +
                      "'");
  return v;
}

inline long parse_integer(const std::string &key, const std::string &text) {
  errno = 0;
  char *end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
    throw ConfigError("'" + key + "': expected an integer, got '" + text +
                      "'");
  return v;
}

inline std::uint64_t parse_seed(const std::string &key,
                                const std::string &text) {
  errno = 0;
  char *end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || text[0] == '-' || end != text.c_str() + text.size() ||
      errno == ERANGE)
    throw ConfigError("'" + key + "': expected an unsigned integer, got '" +
                      text + "'");
  return v;
}

} // namespace detail

/// Parses `zero` or `constant:<level>`.
inline BackgroundModel parse_background(const std::string &text) {
  if (text == "zero")
    return BackgroundModel::zero();
  const std::string prefix = "constant:";
  if (text.rfind(prefix, 0) == 0) {
    const double level =
        detail::parse_real("background", text.substr(prefix.size()));
    if (level < 0.0)
      throw ConfigError("background level must be >= 0");
    return BackgroundModel::constant(level);
  }
  throw ConfigError("background must be 'zero' or 'constant:<level>', got '" +
                    text + "'");
}

/**
 * Parses config text. Pattern, spot and solver parameters are collected
 * first and combined after all lines are read, so key order does not matter.
 */
inline PipelineConfig parse_config(const std::string &text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = detail::trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) +
                        ": empty key or value");
    if (!kv.emplace(key, value).second)
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" +
                        key + "'");
  }

  PipelineConfig c;
  auto take = [&kv](const std::string &key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end())
      return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto real = [&](const std::string &key, double fallback) {
    auto v = take(key);
    return v ? detail::parse_real(key, *v) : fallback;
  };
  auto integer = [&](const std::string &key, long fallback) {
    auto v = take(key);
    return v ? detail::parse_integer(key, *v) : fallback;
  };

  const std::string pattern = take("pattern").value_or("bar-grid");
  const long period = integer("period", 10);
  const double duty = real("duty", 0.5);
  const long separation = integer("separation", 20);
  const long spokes = integer("spokes", 16);
  const long blob_count = integer("blob_count", 5);
  const double blob_radius = real("blob_radius", 8.0);
  const auto seed_text = take("pattern_seed");
  const std::uint64_t pattern_seed =
      seed_text ? detail::parse_seed("pattern_seed", *seed_text) : 42;
  if (pattern == "bar-grid")
    c.pattern = BarGrid{period, duty};
  else if (pattern == "point-pair")
    c.pattern = PointPair{separation};
  else if (pattern == "siemens-star")
    c.pattern = SiemensStar{spokes};
  else if (pattern == "random-blobs")
    c.pattern = RandomBlobs{blob_count, blob_radius, pattern_seed};
  else
    throw ConfigError("unknown pattern '" + pattern + "'");
  c.inset_separation = integer("inset_separation", c.inset_separation);

  if (auto size = take("roi_size")) {
    c.roi_width = c.roi_height = detail::parse_integer("roi_size", *size);
  }
  c.roi_width = integer("roi_width", c.roi_width);
  c.roi_height = integer("roi_height", c.roi_height);
  c.pitch = real("pitch", c.pitch);

  const std::string spot = take("spot").value_or("gaussian");
  const double sigma = real("spot_sigma", 50.5);
  const double radius = real("spot_radius", 50.0);
  if (spot == "gaussian")
    c.spot = Gaussian{sigma};
  else if (spot == "airy")
    c.spot = AiryCore{radius};
  else if (spot == "disk")
    c.spot = Disk{radius};
  else
    throw ConfigError("unknown spot profile '" + spot + "'");
  c.spot_side = integer("spot_side", c.spot_side);

  c.scan.step = integer("step", c.scan.step);
  c.scan.extension = integer("extension", c.scan.extension);
  if (auto bg = take("background"))
    c.scan.background = parse_background(*bg);

  c.microscope_radius = real("microscope_radius", c.microscope_radius);
  c.microscope_side = integer("microscope_side", c.microscope_side);
  c.noise_sigma = real("noise_sigma", c.noise_sigma);
  if (auto s = take("noise_seed"))
    c.noise_seed = detail::parse_seed("noise_seed", *s);

  const std::string method = take("method").value_or("inverse");
  const double threshold = real("threshold", 1e-9);
  const double nsr = real("nsr", 1e-3);
  const long iters = integer("iters", 50);
  const double tol = real("tol", 1e-10);
  const long max_iters = integer("max_iters", 500);
  if (method == "inverse")
    c.solver = InverseFilter{threshold};
  else if (method == "wiener")
    c.solver = Wiener{nsr};
  else if (method == "rl")
    c.solver = RichardsonLucy{iters};
  else if (method == "cgls")
    c.solver = LeastSquaresCG{tol, max_iters};
  else
    throw ConfigError("unknown method '" + method + "'");

  if (auto dir = take("output_dir"))
    c.output_dir = *dir;
  c.pgm_bit_depth = static_cast<int>(integer("pgm_bit_depth", c.pgm_bit_depth));

  if (!kv.empty())
    throw ConfigError("unknown config key '" + kv.begin()->first + "'");
  c.validate();
  return c;
}

inline PipelineConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

struct PipelineResult {
  Image expected;
  Image conventional;
  Image intermediate;
  Image recovered;
  MetricsReport conventional_vs_expected;
  MetricsReport intermediate_crop_vs_expected;
  MetricsReport recovered_vs_expected;
  RecoveryResult recovery;
  /// Whether the band a zero periphery forces to zero was exactly zero
  /// before noise was added.
  bool periphery_border_zero = true;
};

inline Image make_expected(const PipelineConfig &c) {
  Image expected = generate(c.pattern, c.roi_width, c.roi_height, c.pitch);
  if (c.inset_separation > 0)
    expected = with_point_pair_inset(std::move(expected), c.inset_separation);
  return expected;
}

inline Rect roi_rect(const PipelineConfig &c) {
  return Rect{c.scan.extension, c.scan.extension,
              static_cast<std::size_t>(c.roi_width),
              static_cast<std::size_t>(c.roi_height)};
}

namespace detail {

struct PipelineStages {
  Image expected;
  Image conventional;
  Image clean_intermediate;
  SpotImage spot;
  bool border_zero;
};

inline PipelineStages run_forward(const PipelineConfig &c) {
  c.validate();
  Image expected = make_expected(c);
  const Image psf = make_microscope_psf(c.microscope_radius,
                                        c.effective_microscope_side(), c.pitch);
  Image conventional = widefield_blur(expected, psf);
  SpotImage spot = make_spot(c.spot, c.spot_side, c.pitch);
  Image intermediate = simulate_scan(expected, spot, c.scan);
  const bool zero = !c.scan.background.is_zero() ||
                    border_is_zero(intermediate,
                                   zero_border_width(spot, c.scan.extension));
  return {std::move(expected), std::move(conventional), std::move(intermediate),
          std::move(spot), zero};
}

inline void finish(PipelineResult &r, const PipelineConfig &c,
                   const SpotImage &spot) {
  const Rect roi = roi_rect(c);
  r.recovery = recover(r.intermediate, spot, roi, c.scan.extension, c.solver,
                       c.scan.background);
  r.recovered = r.recovery.recovered;
  r.conventional_vs_expected = compare(r.conventional, r.expected);
  r.intermediate_crop_vs_expected = compare(crop(r.intermediate, roi), r.expected);
  r.recovered_vs_expected = compare(r.recovered, r.expected);
}

} // namespace detail

/// Runs the whole experiment in memory.
inline PipelineResult run_pipeline(const PipelineConfig &c) {
  auto stages = detail::run_forward(c);
  PipelineResult r;
  r.expected = std::move(stages.expected);
  r.conventional = std::move(stages.conventional);
  r.intermediate = add_noise(stages.clean_intermediate, c.noise_sigma,
                             c.noise_seed);
  r.periphery_border_zero = stages.border_zero;
  detail::finish(r, c, stages.spot);
  return r;
}

/// metrics.csv content: header plus one row per comparison.
inline std::string metrics_csv(const PipelineResult &r) {
  std::string out = std::string(kMetricsCsvHeader) + "\n";
  out += to_csv_row("conventional_vs_expected", r.conventional_vs_expected) + "\n";
  out += to_csv_row("intermediate_crop_vs_expected",
                    r.intermediate_crop_vs_expected) + "\n";
  out += to_csv_row("recovered_vs_expected", r.recovered_vs_expected) + "\n";
  return out;
}

/**
 * Writes expected/conventional/intermediate/recovered as .ddsf and .pgm plus
 * metrics.csv into `dir`, creating it if needed.
 */
inline void write_pipeline_outputs(const PipelineResult &r,
                                   const std::filesystem::path &dir,
                                   int pgm_bit_depth) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create output directory '" + dir.string() +
                  "': " + ec.message());
  const std::pair<const char *, const Image *> images[] = {
      {"expected", &r.expected},
      {"conventional", &r.conventional},
      {"intermediate", &r.intermediate},
      {"recovered", &r.recovered}};
  for (const auto &[name, image] : images) {
    save_ddsf(*image, dir / (std::string(name) + ".ddsf"));
    export_pgm(*image, dir / (std::string(name) + ".pgm"), pgm_bit_depth);
  }
  std::ofstream csv(dir / "metrics.csv", std::ios::trunc);
  if (!csv)
    throw IoError("cannot write metrics.csv in '" + dir.string() + "'");
  csv << metrics_csv(r);
}

struct NoiseSweepRow {
  double sigma;
  MetricsReport recovered_vs_expected;
};

/// Recovery error for each noise level, sharing one noiseless forward run.
/// Every level uses the config's noise seed.
inline std::vector<NoiseSweepRow> run_noise_sweep(const PipelineConfig &c,
                                                  const std::vector<double> &sigmas) {
  auto stages = detail::run_forward(c);
  std::vector<NoiseSweepRow> rows;
  for (double sigma : sigmas) {
    const Image noisy = add_noise(stages.clean_intermediate, sigma, c.noise_seed);
    const auto rec = recover(noisy, stages.spot, roi_rect(c), c.scan.extension,
                             c.solver, c.scan.background);
    rows.push_back({sigma, compare(rec.recovered, stages.expected)});
  }
  return rows;
}

/// noise_sweep.csv content: `sigma,` followed by the metrics columns.
inline std::string noise_sweep_csv(const std::vector<NoiseSweepRow> &rows) {
  std::string out = "sigma," + std::string(kMetricsCsvHeader) + "\n";
  for (const auto &row : rows)
    out += detail::format_real(row.sigma) + "," +
           to_csv_row("recovered_vs_expected", row.recovered_vs_expected) + "\n";
  return out;
}

} // namespace dds
