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
 * @file image.hpp
 * @brief The single image type used for every role in the pipeline
 * (expected, intermediate, recovered, blurred), plus padding and cropping.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dds {

/// Axis-aligned pixel window. Offsets may be negative when expressed in
/// scan-lattice coordinates.
struct Rect {
  long x0 = 0;
  long y0 = 0;
  std::size_t width = 1;
  std::size_t height = 1;

  friend bool operator==(const Rect &, const Rect &) = default;
};

/**
 * 2D row-major grid of 64-bit intensities with a physical pixel pitch in
 * nanometres per pixel.
 *
 * Every element is finite; constructors reject NaN/Inf. Mutable access through
 * operator() is provided for building images, callers keep values finite.
 */
class Image {
public:
  Image() = default;

  Image(std::size_t width, std::size_t height, double pitch, double fill = 0.0)
      : width_(width), height_(height), pitch_(pitch) {
    check_geometry(width, height, pitch);
    if (!std::isfinite(fill))
      throw std::invalid_argument("Image: fill value must be finite");
    data_.assign(width * height, fill);
  }

  Image(std::size_t width, std::size_t height, double pitch,
        std::vector<double> data)
      : width_(width), height_(height), pitch_(pitch), data_(std::move(data)) {
    check_geometry(width, height, pitch);
    if (data_.size() != width * height)
      throw std::invalid_argument("Image: data length " +
                                  std::to_string(data_.size()) +
                                  " does not match " + std::to_string(width) +
                                  "x" + std::to_string(height));
    for (double v : data_)
      if (!std::isfinite(v))
        throw std::invalid_argument("Image: non-finite pixel value");
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  double pitch() const noexcept { return pitch_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  /// Row `y` as a contiguous span.
  std::span<const double> row(std::size_t y) const noexcept {
    return {data_.data() + y * width_, width_};
  }
  std::span<double> row(std::size_t y) noexcept {
    return {data_.data() + y * width_, width_};
  }

  double operator()(std::size_t x, std::size_t y) const noexcept {
    return data_[y * width_ + x];
  }
  double &operator()(std::size_t x, std::size_t y) noexcept {
    return data_[y * width_ + x];
  }

  bool same_shape(const Image &other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  /// Exact (IEEE ==) equality of geometry, pitch and every sample.
  friend bool operator==(const Image &a, const Image &b) = default;

private:
  static void check_geometry(std::size_t width, std::size_t height,
                             double pitch) {
    if (width < 1 || height < 1)
      throw std::invalid_argument("Image: width and height must be >= 1");
    if (!(pitch > 0.0) || !std::isfinite(pitch))
      throw std::invalid_argument("Image: pitch must be positive and finite");
  }

  std::size_t width_ = 0;
  std::size_t height_ = 0;
  double pitch_ = 1.0;
  std::vector<double> data_;
};

/// Constant image. Rejects zero dimensions, non-positive pitch and
/// non-finite fill with std::invalid_argument.
inline Image new_image(long width, long height, double pitch, double fill) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("new_image: width and height must be >= 1");
  return Image(static_cast<std::size_t>(width),
               static_cast<std::size_t>(height), pitch, fill);
}

/// Surrounds `image` with `border` pixels of `value` on every side. The
/// interior is copied verbatim.
inline Image pad(const Image &image, std::size_t border, double value) {
  if (border == 0)
    return image;
  Image out(image.width() + 2 * border, image.height() + 2 * border,
            image.pitch(), value);
  for (std::size_t y = 0; y < image.height(); ++y) {
    auto src = image.row(y);
    auto dst = out.row(y + border).subspan(border, image.width());
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return out;
}

/// Exact sub-grid. Throws std::out_of_range unless `window` lies fully
/// inside `image`.
inline Image crop(const Image &image, const Rect &window) {
  if (window.width < 1 || window.height < 1)
    throw std::invalid_argument("crop: window must be at least 1x1");
  if (window.x0 < 0 || window.y0 < 0 ||
      static_cast<std::size_t>(window.x0) + window.width > image.width() ||
      static_cast<std::size_t>(window.y0) + window.height > image.height())
    throw std::out_of_range("crop: window exceeds image bounds");
  Image out(window.width, window.height, image.pitch());
  const auto x0 = static_cast<std::size_t>(window.x0);
  const auto y0 = static_cast<std::size_t>(window.y0);
  for (std::size_t y = 0; y < window.height; ++y) {
    auto src = image.row(y0 + y).subspan(x0, window.width);
    std::copy(src.begin(), src.end(), out.row(y).begin());
  }
  return out;
}

/// Centered window of the given size inside an image of size (w, h). Used to
/// map a padded or scanned field back onto its ROI.
inline Rect centered_rect(const Image &image, std::size_t width,
                          std::size_t height) {
  if (width > image.width() || height > image.height())
    throw std::out_of_range("centered_rect: window larger than image");
  return Rect{static_cast<long>((image.width() - width) / 2),
              static_cast<long>((image.height() - height) / 2), width, height};
}

namespace detail {

inline double sum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v)
    s += x;
  return s;
}

} // namespace detail

} // namespace dds
