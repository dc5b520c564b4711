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

#pragma once

#include "dds/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dds {

/// Pixelwise error statistics of `a` against reference `b`.
struct MetricsReport {
  double mean_abs = 0.0;
  double mean_signed = 0.0;
  double rmse = 0.0;
  double max_abs = 0.0;
  /// +infinity when the images are identical.
  double psnr_db = std::numeric_limits<double>::infinity();
};

/// Column order of the CSV form.
inline constexpr const char *kMetricsCsvHeader =
    "comparison,mean_abs,mean_signed,rmse,max_abs,psnr_db";

/**
 * Compares `a` against the reference `b`. PSNR uses the peak absolute value
 * of `b`, so it is not symmetric in its arguments.
 */
inline MetricsReport compare(const Image &a, const Image &b) {
  if (!a.same_shape(b))
    throw std::invalid_argument("compare: image dimensions differ");
  MetricsReport m;
  double sum_abs = 0.0, sum_signed = 0.0, sum_sq = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    sum_abs += std::abs(d);
    sum_signed += d;
    sum_sq += d * d;
    m.max_abs = std::max(m.max_abs, std::abs(d));
    peak = std::max(peak, std::abs(b.data()[i]));
  }
  const auto n = static_cast<double>(a.size());
  m.mean_abs = sum_abs / n;
  m.mean_signed = sum_signed / n;
  const double mse = sum_sq / n;
  m.rmse = std::sqrt(mse);
  if (mse == 0.0)
    m.psnr_db = std::numeric_limits<double>::infinity();
  else if (peak == 0.0)
    m.psnr_db = -std::numeric_limits<double>::infinity();
  else
    m.psnr_db = 10.0 * std::log10(peak * peak / mse);
  return m;
}

namespace detail {

inline std::string format_real(double v) {
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace detail

/// `key = value` lines, one per field.
inline std::string to_key_value(const MetricsReport &m) {
  std::ostringstream os;
  os << "mean_abs = " << detail::format_real(m.mean_abs) << '\n'
     << "mean_signed = " << detail::format_real(m.mean_signed) << '\n'
     << "rmse = " << detail::format_real(m.rmse) << '\n'
     << "max_abs = " << detail::format_real(m.max_abs) << '\n'
     << "psnr_db = " << detail::format_real(m.psnr_db) << '\n';
  return os.str();
}

/// One CSV row in kMetricsCsvHeader order, without trailing newline.
inline std::string to_csv_row(const std::string &label,
                              const MetricsReport &m) {
  return label + "," + detail::format_real(m.mean_abs) + "," +
         detail::format_real(m.mean_signed) + "," +
         detail::format_real(m.rmse) + "," + detail::format_real(m.max_abs) +
         "," + detail::format_real(m.psnr_db);
}

struct PixelCoord {
  long x = 0;
  long y = 0;
  friend bool operator==(const PixelCoord &, const PixelCoord &) = default;
};

/**
 * Dip depth between two peaks:
 *
 *     1 - min(profile) / mean(image(p1), image(p2))
 *
 * where the profile is sampled at the nearest pixel to each integer step along
 * the segment p1 -> p2 (endpoints included). Clamped to [0, 1]; 0 when the
 * profile never falls below the peak mean or the peaks are not positive.
 */
inline double two_point_contrast(const Image &image, PixelCoord p1,
                                 PixelCoord p2) {
  auto inside = [&](PixelCoord p) {
    return p.x >= 0 && p.y >= 0 && static_cast<std::size_t>(p.x) < image.width() &&
           static_cast<std::size_t>(p.y) < image.height();
  };
  if (!inside(p1) || !inside(p2))
    throw std::out_of_range("two_point_contrast: point outside image");
  if (p1 == p2)
    throw std::invalid_argument("two_point_contrast: points must differ");

  auto at = [&](PixelCoord p) {
    return image(static_cast<std::size_t>(p.x), static_cast<std::size_t>(p.y));
  };
  const double peak = 0.5 * (at(p1) + at(p2));
  if (!(peak > 0.0))
    return 0.0;

  const long steps = std::max(std::abs(p2.x - p1.x), std::abs(p2.y - p1.y));
  double lowest = std::numeric_limits<double>::infinity();
  for (long i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(steps);
    const PixelCoord q{std::lround(p1.x + t * static_cast<double>(p2.x - p1.x)),
                       std::lround(p1.y + t * static_cast<double>(p2.y - p1.y))};
    lowest = std::min(lowest, at(q));
  }
  return std::clamp(1.0 - lowest / peak, 0.0, 1.0);
}

} // namespace dds
