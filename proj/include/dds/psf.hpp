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
 * @file psf.hpp
 * @brief Illumination-spot images (compact-support scan PSFs) and the
 * wide-field microscope PSF.
 *
 * All kernels are sampled at pixel centres relative to the centre pixel of an
 * odd-sized square grid and normalized to unit sum, so scanning a constant
 * field returns the same constant.
 */
#pragma once

#include "dds/image.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>

namespace dds {

/// First positive zero of J1; the Airy intensity vanishes at this argument.
inline constexpr double kAiryFirstZero = 3.8317059702;

/**
 * Bessel function of the first kind, order 1.
 *
 * Power series for |x| <= 12, Hankel asymptotic expansion (truncated at its
 * smallest term) beyond. Absolute error is below 1e-10 on |x| <= 30.
 */
inline double bessel_j1(double x) {
  const double ax = std::abs(x);
  double value;
  if (ax <= 12.0) {
    const double half = 0.5 * ax;
    const double half2 = half * half;
    double term = half;
    double sum = term;
    for (int m = 0; m < 80; ++m) {
      term *= -half2 / ((m + 1.0) * (m + 2.0));
      sum += term;
      if (std::abs(term) < 1e-18)
        break;
    }
    value = sum;
  } else {
    // J1(x) ~ sqrt(2/(pi x)) (P cos w - Q sin w), w = x - 3pi/4, with
    // a_k = prod_{j<=k} (4 - (2j-1)^2) / (k! 8^k) alternating between P and Q.
    double p = 1.0;
    double q = 0.0;
    double ak = 1.0;
    double last = 1.0;
    for (int k = 1; k < 60; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double next = ak * (4.0 - odd * odd) / (k * 8.0 * ax);
      if (std::abs(next) >= std::abs(last))
        break;
      ak = next;
      last = next;
      // k odd -> Q with sign (+,-,+..) for k = 1,3,5..; k even -> P with
      // sign (-,+,..) for k = 2,4,..
      switch (k % 4) {
      case 1: q += ak; break;
      case 2: p -= ak; break;
      case 3: q -= ak; break;
      case 0: p += ak; break;
      }
    }
    const double w = ax - 0.75 * std::numbers::pi;
    value = std::sqrt(2.0 / (std::numbers::pi * ax)) *
            (p * std::cos(w) - q * std::sin(w));
  }
  return x < 0.0 ? -value : value;
}

/// Normalized Airy intensity (2 J1(v) / v)^2, equal to 1 at v = 0.
inline double airy_intensity(double v) {
  if (v == 0.0)
    return 1.0;
  const double a = 2.0 * bessel_j1(v) / v;
  return a * a;
}

// Spot profiles. Radii and sigma are in pixels of the expected image.
struct AiryCore {
  double first_zero_radius;
};
struct Gaussian {
  double sigma;
};
struct Disk {
  double radius;
};
using SpotProfile = std::variant<AiryCore, Gaussian, Disk>;

/**
 * Odd-sized, square, nonnegative, unit-sum image: the point spread function
 * of the dense-scan forward model. The constructor validates every
 * invariant and throws std::invalid_argument on violation.
 */
class SpotImage {
public:
  static constexpr double kSumTolerance = 1e-12;

  explicit SpotImage(Image image) : image_(std::move(image)) {
    if (image_.width() != image_.height())
      throw std::invalid_argument("SpotImage: spot must be square");
    if (image_.width() % 2 == 0)
      throw std::invalid_argument("SpotImage: side length must be odd");
    for (double v : image_.data())
      if (v < 0.0)
        throw std::invalid_argument("SpotImage: negative intensity");
    const double s = detail::sum(image_.data());
    if (std::abs(s - 1.0) > kSumTolerance)
      throw std::invalid_argument("SpotImage: values must sum to 1 (got " +
                                  std::to_string(s) + ")");
  }

  /// Rescales a nonnegative kernel to unit sum, then validates.
  static SpotImage normalized(Image image) {
    const double s = detail::sum(image.data());
    if (!(s > 0.0))
      throw std::invalid_argument("SpotImage: kernel has no positive mass");
    for (double &v : image.data())
      v /= s;
    return SpotImage(std::move(image));
  }

  const Image &image() const noexcept { return image_; }
  std::size_t side() const noexcept { return image_.width(); }
  std::size_t half() const noexcept { return image_.width() / 2; }
  double operator()(std::size_t x, std::size_t y) const noexcept {
    return image_(x, y);
  }

private:
  Image image_;
};

namespace detail {

inline void require_odd_side(long side, const char *who) {
  if (side < 1 || side % 2 == 0)
    throw std::invalid_argument(std::string(who) +
                                ": side must be odd and >= 1");
}

template <typename F>
Image sample_radial(long side, double pitch, F &&profile) {
  const long h = side / 2;
  Image out(static_cast<std::size_t>(side), static_cast<std::size_t>(side),
            pitch);
  for (long y = -h; y <= h; ++y)
    for (long x = -h; x <= h; ++x) {
      const double r = std::sqrt(static_cast<double>(x * x + y * y));
      out(static_cast<std::size_t>(x + h), static_cast<std::size_t>(y + h)) =
          profile(r);
    }
  return out;
}

} // namespace detail

/**
 * Synthesizes a spot image.
 *
 * The profile must fit the grid: every pixel outside the grid (distance
 * >= (side-1)/2 + 1 from the centre) has to fall outside the support of Disk
 * and AiryCore. Gaussians are truncated at the grid edge.
 */
inline SpotImage make_spot(const SpotProfile &profile, long side,
                           double pitch = 1.0) {
  detail::require_odd_side(side, "make_spot");
  const double outside = static_cast<double>(side / 2 + 1);

  Image raw = std::visit(
      [&](const auto &p) -> Image {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, AiryCore>) {
          const double R = p.first_zero_radius;
          if (!(R > 0.0) || !std::isfinite(R))
            throw std::invalid_argument("make_spot: Airy radius must be > 0");
          if (R >= outside)
            throw std::invalid_argument(
                "make_spot: Airy core exceeds the spot grid");
          return detail::sample_radial(side, pitch, [R](double r) {
            return r > R ? 0.0 : airy_intensity(kAiryFirstZero * r / R);
          });
        } else if constexpr (std::is_same_v<P, Gaussian>) {
          const double s = p.sigma;
          if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("make_spot: sigma must be > 0");
          return detail::sample_radial(side, pitch, [s](double r) {
            return std::exp(-r * r / (2.0 * s * s));
          });
        } else {
          const double R = p.radius;
          if (!(R > 0.0) || !std::isfinite(R))
            throw std::invalid_argument("make_spot: disk radius must be > 0");
          if (R >= outside)
            throw std::invalid_argument("make_spot: disk exceeds the spot grid");
          return detail::sample_radial(
              side, pitch, [R](double r) { return r <= R ? 1.0 : 0.0; });
        }
      },
      profile);
  return SpotImage::normalized(std::move(raw));
}

/**
 * Wide-field microscope PSF: the full Airy pattern including its rings,
 * truncated only by the grid, unit sum. `side` may be smaller than the
 * Airy disk itself.
 */
inline Image make_microscope_psf(double first_zero_radius, long side,
                                 double pitch = 1.0) {
  detail::require_odd_side(side, "make_microscope_psf");
  if (!(first_zero_radius > 0.0) || !std::isfinite(first_zero_radius))
    throw std::invalid_argument("make_microscope_psf: radius must be > 0");
  const double scale = kAiryFirstZero / first_zero_radius;
  Image psf = detail::sample_radial(
      side, pitch, [scale](double r) { return airy_intensity(scale * r); });
  const double s = detail::sum(psf.data());
  for (double &v : psf.data())
    v /= s;
  return psf;
}

} // namespace dds
