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
 * @file patterns.hpp
 * @brief Binary ground-truth targets with structure finer than the spot.
 */
#pragma once

#include "dds/image.hpp"
#include "dds/metrics.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <type_traits>
#include <variant>

namespace dds {

/// Two single-pixel unit impulses, centred, `separation` apart horizontally.
struct PointPair {
  long separation = 20;
};
/// Vertical bars: `round(duty * period)` bright columns per period.
struct BarGrid {
  long period = 10;
  double duty = 0.5;
};
/// Disk split into 2*spokes equal wedges, alternately bright and dark.
struct SiemensStar {
  long spokes = 16;
};
/// `count` bright disks at seeded uniform positions.
struct RandomBlobs {
  long count = 5;
  double radius = 8.0;
  std::uint64_t seed = 42;
};
using PatternSpec = std::variant<PointPair, BarGrid, SiemensStar, RandomBlobs>;

/// Pixel positions of the two PointPair impulses on a width x height canvas.
inline std::pair<PixelCoord, PixelCoord>
point_pair_positions(long separation, std::size_t width, std::size_t height) {
  const long w = static_cast<long>(width);
  const long h = static_cast<long>(height);
  const long x1 = w / 2 - separation / 2;
  const long x2 = x1 + separation;
  const long y = h / 2;
  if (separation < 1 || x1 < 1 || x2 > w - 2 || y < 1 || y > h - 2)
    throw std::invalid_argument("PointPair: separation " +
                                std::to_string(separation) +
                                " does not fit the canvas");
  return {{x1, y}, {x2, y}};
}

/**
 * Renders a pattern with values in {0, 1}.
 *
 * PointPair, SiemensStar and RandomBlobs keep at least one dark pixel between
 * the structure and the canvas edge. BarGrid tiles the full width so that the
 * bright fraction is exactly the duty cycle whenever the period divides the
 * width.
 */
inline Image generate(const PatternSpec &spec, long width, long height,
                      double pitch) {
  Image out = new_image(width, height, pitch, 0.0);
  const auto W = static_cast<std::size_t>(width);
  const auto H = static_cast<std::size_t>(height);

  std::visit(
      [&](const auto &p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, PointPair>) {
          const auto [a, b] = point_pair_positions(p.separation, W, H);
          out(a.x, a.y) = 1.0;
          out(b.x, b.y) = 1.0;
        } else if constexpr (std::is_same_v<P, BarGrid>) {
          if (p.period < 1 || !(p.duty > 0.0 && p.duty < 1.0))
            throw std::invalid_argument(
                "BarGrid: need period >= 1 and duty in (0, 1)");
          const long bright = std::lround(p.duty * static_cast<double>(p.period));
          if (bright < 1 || bright >= p.period || p.period > width)
            throw std::invalid_argument(
                "BarGrid: period/duty give no resolvable bars on this canvas");
          for (std::size_t x = 0; x < W; ++x) {
            if (static_cast<long>(x) % p.period < p.period - bright)
              continue;
            for (std::size_t y = 0; y < H; ++y)
              out(x, y) = 1.0;
          }
        } else if constexpr (std::is_same_v<P, SiemensStar>) {
          if (p.spokes < 2)
            throw std::invalid_argument("SiemensStar: need at least 2 spokes");
          const double cx = static_cast<double>((W - 1) / 2);
          const double cy = static_cast<double>((H - 1) / 2);
          const double R = std::min(cx, cy) - 1.0;
          if (R < 1.0)
            throw std::invalid_argument("SiemensStar: canvas too small");
          for (std::size_t y = 0; y < H; ++y)
            for (std::size_t x = 0; x < W; ++x) {
              const double dx = static_cast<double>(x) - cx;
              const double dy = static_cast<double>(y) - cy;
              if (std::hypot(dx, dy) > R)
                continue;
              double theta = std::atan2(dy, dx);
              if (theta < 0.0)
                theta += 2.0 * std::numbers::pi;
              const auto sector = static_cast<long>(
                  std::floor(theta * static_cast<double>(p.spokes) /
                             std::numbers::pi));
              if (sector % 2 == 0)
                out(x, y) = 1.0;
            }
        } else {
          if (p.count < 1 || !(p.radius > 0.0) || !std::isfinite(p.radius))
            throw std::invalid_argument(
                "RandomBlobs: need count >= 1 and radius > 0");
          const long margin = static_cast<long>(std::ceil(p.radius)) + 1;
          if (width < 2 * margin + 1 || height < 2 * margin + 1)
            throw std::invalid_argument("RandomBlobs: blobs do not fit");
          std::mt19937_64 gen(p.seed);
          const auto span_x = static_cast<std::uint64_t>(width - 2 * margin);
          const auto span_y = static_cast<std::uint64_t>(height - 2 * margin);
          for (long n = 0; n < p.count; ++n) {
            const long cx = margin + static_cast<long>(gen() % span_x);
            const long cy = margin + static_cast<long>(gen() % span_y);
            for (long y = cy - margin; y <= cy + margin; ++y)
              for (long x = cx - margin; x <= cx + margin; ++x) {
                const double r = std::hypot(static_cast<double>(x - cx),
                                            static_cast<double>(y - cy));
                if (r <= p.radius)
                  out(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) =
                      1.0;
              }
          }
        }
      },
      spec);
  return out;
}

/// Corner inset: positions of the two impulses placed by with_point_pair_inset.
inline std::pair<PixelCoord, PixelCoord> point_pair_inset_positions(long separation) {
  constexpr long kMargin = 10;
  return {{kMargin, kMargin}, {kMargin + separation, kMargin}};
}

/**
 * Clears the top-left (separation + 21) x 21 corner of `image` and places two
 * unit impulses inside it, 10 px from the edges and `separation` apart.
 */
inline Image with_point_pair_inset(Image image, long separation) {
  const auto [a, b] = point_pair_inset_positions(separation);
  const long box_w = b.x + a.x + 1;
  const long box_h = 2 * a.y + 1;
  if (separation < 1 || box_w > static_cast<long>(image.width()) ||
      box_h > static_cast<long>(image.height()))
    throw std::invalid_argument("point-pair inset does not fit the canvas");
  for (long y = 0; y < box_h; ++y)
    for (long x = 0; x < box_w; ++x)
      image(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = 0.0;
  image(a.x, a.y) = 1.0;
  image(b.x, b.y) = 1.0;
  return image;
}

} // namespace dds
