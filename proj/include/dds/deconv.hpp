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
 * @file deconv.hpp
 * @brief Recovery of the high-resolution ROI from a dense-scan intermediate
 * image and the known spot image.
 *
 * Geometry: the intermediate image holds the dense scan (step 1) of an
 * N_w x N_h ROI with `extension` extra scan positions on every side, so it is
 * (N_w + 2 ext) x (N_h + 2 ext) and the ROI occupies
 * Rect{ext, ext, N_w, N_h} inside it.
 *
 * Four solvers are provided:
 *  - inverse filtering with hard spectral thresholding,
 *  - Wiener filtering with a constant noise-to-signal ratio,
 *  - Richardson-Lucy multiplicative iterations,
 *  - conjugate gradients on the normal equations (CGLS), matrix-free.
 *
 * The spectral solvers work on the full intermediate grid. With a zero
 * periphery and ext >= (K-1)/2 the scan is exactly a circular convolution on
 * that grid, so division in the Fourier domain inverts it without aliasing.
 */
#pragma once

#include "dds/fft.hpp"
#include "dds/image.hpp"
#include "dds/psf.hpp"
#include "dds/scanner.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace dds {

struct InverseFilter {
  double threshold = 1e-9; ///< fraction of max |H| below which bins are zeroed
};
struct Wiener {
  double nsr = 1e-3;
};
struct RichardsonLucy {
  long iterations = 50;
};
struct LeastSquaresCG {
  double tolerance = 1e-10;
  long max_iterations = 500;
};
using DeconvRequest =
    std::variant<InverseFilter, Wiener, RichardsonLucy, LeastSquaresCG>;

struct RecoveryResult {
  Image recovered;
  long iterations_used = 0;
  /// ||y - A x|| / ||y|| at the returned estimate (iterative solvers only).
  double residual_norm = 0.0;
  /// Relative data residual after each iteration (iterative solvers only).
  std::vector<double> residual_history;
};

/// Called with (iteration, estimate) after every iterative update.
using IterateObserver = std::function<void(long, const Image &)>;

inline void validate_request(const DeconvRequest &request) {
  std::visit(
      [](const auto &r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, InverseFilter>) {
          if (!(r.threshold >= 0.0 && r.threshold <= 1.0))
            throw std::invalid_argument(
                "InverseFilter: threshold must lie in [0, 1]");
        } else if constexpr (std::is_same_v<R, Wiener>) {
          if (!(r.nsr >= 0.0) || !std::isfinite(r.nsr))
            throw std::invalid_argument("Wiener: nsr must be finite and >= 0");
        } else if constexpr (std::is_same_v<R, RichardsonLucy>) {
          if (r.iterations < 0)
            throw std::invalid_argument(
                "RichardsonLucy: iterations must be >= 0");
        } else {
          if (!(r.tolerance > 0.0) || !std::isfinite(r.tolerance))
            throw std::invalid_argument("LeastSquaresCG: tolerance must be > 0");
          if (r.max_iterations < 1)
            throw std::invalid_argument(
                "LeastSquaresCG: max_iterations must be >= 1");
        }
      },
      request);
}

namespace detail {

inline void check_geometry(const Image &intermediate, const Rect &roi,
                           long extension, const char *who) {
  if (extension < 0)
    throw std::invalid_argument(std::string(who) + ": extension must be >= 0");
  const auto ext = static_cast<std::size_t>(extension);
  if (roi.width < 1 || roi.height < 1 || roi.x0 != extension ||
      roi.y0 != extension || intermediate.width() != roi.width + 2 * ext ||
      intermediate.height() != roi.height + 2 * ext)
    throw std::invalid_argument(
        std::string(who) + ": intermediate image is " +
        std::to_string(intermediate.width()) + "x" +
        std::to_string(intermediate.height()) + ", inconsistent with a " +
        std::to_string(roi.width) + "x" + std::to_string(roi.height) +
        " ROI at offset (" + std::to_string(roi.x0) + "," +
        std::to_string(roi.y0) + ") and extension " +
        std::to_string(extension));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// y <- y + alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] += alpha * x[i];
}

// Transfer function of the scan on a W x H periodic grid. The scan correlates
// with the spot, i.e. convolves with the spot rotated by 180 degrees; that
// rotated kernel is placed with its centre on sample (0, 0).
inline Spectrum scan_transfer_function(const SpotImage &spot, std::size_t W,
                                       std::size_t H) {
  const std::size_t K = spot.side();
  const std::size_t h = spot.half();
  Image kernel(W, H, spot.image().pitch());
  for (std::size_t y = 0; y < K; ++y)
    for (std::size_t x = 0; x < K; ++x) {
      // spot(x, y) multiplies sample(c + (x - h)); as a convolution kernel it
      // sits at offset (h - x, h - y).
      const std::size_t kx = (h + W - x % W) % W;
      const std::size_t ky = (h + H - y % H) % H;
      kernel(kx, ky) += spot(x, y);
    }
  return dft2_forward(kernel);
}

inline bool is_identity(const SpotImage &spot) {
  return spot.side() == 1 && spot(0, 0) == 1.0;
}

} // namespace detail

/// The dense-scan forward operator A on ROI-sized images (zero periphery).
inline Image forward_apply(const Image &roi_image, const SpotImage &spot,
                           long extension) {
  return simulate_scan(roi_image, spot,
                       ScanConfig{1, extension, BackgroundModel::zero()});
}

/**
 * Exact adjoint A^T of the dense scan (step 1, zero periphery): maps an
 * intermediate-sized image back onto the ROI by correlating with the
 * 180-degree rotated spot.
 *
 *     (A^T y)(p) = sum_u spot(u) * y(p - u + centre + extension)
 *
 * with terms outside the intermediate grid dropped.
 */
inline Image adjoint_apply(const Image &image, const SpotImage &spot,
                           const Rect &roi, long extension) {
  detail::check_geometry(image, roi, extension, "adjoint_apply");
  const std::size_t K = spot.side();
  Image flipped(K, K, spot.image().pitch());
  for (std::size_t y = 0; y < K; ++y)
    for (std::size_t x = 0; x < K; ++x)
      flipped(x, y) = spot(K - 1 - x, K - 1 - y);
  const Image field = pad(image, spot.half(), 0.0);
  const auto ext = static_cast<std::size_t>(extension);
  return detail::correlate(field, flipped, ext, ext, roi.width, roi.height, 1,
                           image.pitch());
}

/// Width of the band around the intermediate image that a zero periphery
/// forces to be zero: extension - (K-1)/2, or 0 if negative.
inline std::size_t zero_border_width(const SpotImage &spot, long extension) {
  const long w = extension - static_cast<long>(spot.half());
  return w > 0 ? static_cast<std::size_t>(w) : 0;
}

/// True when every pixel in the outer `width`-pixel band is exactly 0.0.
inline bool border_is_zero(const Image &image, std::size_t width) {
  for (std::size_t y = 0; y < image.height(); ++y)
    for (std::size_t x = 0; x < image.width(); ++x) {
      const bool in_band = x < width || y < width ||
                           x >= image.width() - std::min(width, image.width()) ||
                           y >= image.height() - std::min(width, image.height());
      if (in_band && image(x, y) != 0.0)
        return false;
    }
  return true;
}

/**
 * Forward response of a known constant periphery: the scan of an all-zero ROI
 * surrounded by `background`. Subtracting it from a measurement leaves the
 * zero-periphery scan of the ROI.
 */
inline Image background_response(std::size_t roi_width, std::size_t roi_height,
                                 double pitch, const SpotImage &spot,
                                 long extension,
                                 const BackgroundModel &background) {
  return simulate_scan(Image(roi_width, roi_height, pitch), spot,
                       ScanConfig{1, extension, background});
}

namespace detail {

inline Image spectral_recover(const Image &y, const SpotImage &spot,
                              const Rect &roi, const DeconvRequest &request) {
  const Spectrum H = scan_transfer_function(spot, y.width(), y.height());
  Spectrum X = dft2_forward(y);

  if (const auto *inv = std::get_if<InverseFilter>(&request)) {
    double hmax = 0.0;
    for (const auto &c : H.data)
      hmax = std::max(hmax, std::abs(c));
    const double cut = inv->threshold * hmax;
    for (std::size_t i = 0; i < X.data.size(); ++i) {
      const double mag = std::abs(H.data[i]);
      X.data[i] = (mag >= cut && mag > 0.0) ? X.data[i] / H.data[i]
                                            : std::complex<double>{};
    }
  } else {
    const double nsr = std::get<Wiener>(request).nsr;
    for (std::size_t i = 0; i < X.data.size(); ++i) {
      const double denom = std::norm(H.data[i]) + nsr;
      X.data[i] = denom > 0.0 ? X.data[i] * std::conj(H.data[i]) / denom
                              : std::complex<double>{};
    }
  }
  return crop(dft2_inverse(X), roi);
}

inline RecoveryResult richardson_lucy(const Image &y, const SpotImage &spot,
                                      const Rect &roi, long extension,
                                      long iterations,
                                      const IterateObserver &observer) {
  constexpr double kGuard = 1e-12;
  const double mean = detail::sum(y.data()) / static_cast<double>(y.size());
  Image x(roi.width, roi.height, y.pitch(), std::max(mean, DBL_MIN));

  // Column sums of A; equal to 1 wherever every footprint lies inside the
  // scanned lattice.
  const Image ones(y.width(), y.height(), y.pitch(), 1.0);
  const Image colsum = adjoint_apply(ones, spot, roi, extension);

  RecoveryResult result;
  const double ynorm = norm2(y.data());
  auto relative_residual = [&](const Image &ax) {
    if (ynorm == 0.0)
      return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
      const double d = y.data()[i] - ax.data()[i];
      s += d * d;
    }
    return std::sqrt(s) / ynorm;
  };

  Image ax = forward_apply(x, spot, extension);
  Image ratio(y.width(), y.height(), y.pitch());
  for (long k = 1; k <= iterations; ++k) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double d = ax.data()[i];
      ratio.data()[i] = d > kGuard ? std::max(y.data()[i], 0.0) / d : 0.0;
    }
    const Image correction = adjoint_apply(ratio, spot, roi, extension);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double c = colsum.data()[i];
      x.data()[i] = c > 0.0 ? x.data()[i] * (correction.data()[i] / c) : 0.0;
    }
    ax = forward_apply(x, spot, extension);
    result.residual_history.push_back(relative_residual(ax));
    if (observer)
      observer(k, x);
  }
  result.residual_norm = relative_residual(ax);
  result.iterations_used = iterations;
  result.recovered = std::move(x);
  return result;
}

inline RecoveryResult cgls(const Image &y, const SpotImage &spot,
                           const Rect &roi, long extension, double tolerance,
                           long max_iterations,
                           const IterateObserver &observer) {
  RecoveryResult result;
  Image x(roi.width, roi.height, y.pitch());
  const double ynorm = norm2(y.data());
  if (ynorm == 0.0) {
    result.recovered = std::move(x);
    return result;
  }

  Image r = y;
  Image s = adjoint_apply(r, spot, roi, extension);
  Image p = s;
  double gamma = dot(s.data(), s.data());
  double rel = 1.0;

  long k = 0;
  while (k < max_iterations && gamma > 0.0) {
    const Image q = forward_apply(p, spot, extension);
    const double delta = dot(q.data(), q.data());
    if (!(delta > 0.0))
      break;
    const double alpha = gamma / delta;
    axpy(alpha, p.data(), x.data());
    axpy(-alpha, q.data(), r.data());
    ++k;
    rel = norm2(r.data()) / ynorm;
    result.residual_history.push_back(rel);
    if (observer)
      observer(k, x);

    s = adjoint_apply(r, spot, roi, extension);
    const double gamma_next = dot(s.data(), s.data());
    // Stop on a small data residual, or at a least-squares solution of an
    // inconsistent system: ||A^T r|| <= tol ||A|| ||r||, where ||A|| <= 1
    // for a unit-sum spot.
    if (rel <= tolerance || std::sqrt(gamma_next) <= tolerance * rel * ynorm)
      break;
    const double beta = gamma_next / gamma;
    for (std::size_t i = 0; i < p.size(); ++i)
      p.data()[i] = s.data()[i] + beta * p.data()[i];
    gamma = gamma_next;
  }
  result.iterations_used = k;
  result.residual_norm = rel;
  result.recovered = std::move(x);
  return result;
}

} // namespace detail

/**
 * Recovers the ROI from a dense-scan intermediate image.
 *
 * `roi` locates the ROI inside the intermediate image and must equal
 * Rect{extension, extension, N_w, N_h}. A constant background is removed by
 * subtracting its forward response before any solver runs. The spectral
 * solvers additionally require extension >= (K-1)/2, the smallest margin at
 * which the scan carries the complete linear convolution.
 *
 * A 1x1 unit spot makes the scan the identity; every solver then returns the
 * cropped data directly (scaled by 1/(1+nsr) for Wiener, clamped at zero for
 * Richardson-Lucy).
 */
inline RecoveryResult recover(const Image &intermediate, const SpotImage &spot,
                              const Rect &roi, long extension,
                              const DeconvRequest &request,
                              const BackgroundModel &background = {},
                              const IterateObserver &observer = {}) {
  detail::check_geometry(intermediate, roi, extension, "recover");
  validate_request(request);
  const bool spectral = std::holds_alternative<InverseFilter>(request) ||
                        std::holds_alternative<Wiener>(request);
  if (spectral && extension < static_cast<long>(spot.half()))
    throw std::invalid_argument(
        "recover: spectral solvers need extension >= (spot side - 1) / 2");

  Image y = intermediate;
  if (!background.is_zero()) {
    const Image bg = background_response(roi.width, roi.height,
                                         intermediate.pitch(), spot, extension,
                                         background);
    for (std::size_t i = 0; i < y.size(); ++i)
      y.data()[i] -= bg.data()[i];
  }

  const auto *rl = std::get_if<RichardsonLucy>(&request);
  if (detail::is_identity(spot) && !(rl && rl->iterations == 0)) {
    RecoveryResult result;
    result.recovered = crop(y, roi);
    if (const auto *w = std::get_if<Wiener>(&request)) {
      const double scale = 1.0 / (1.0 + w->nsr);
      for (double &v : result.recovered.data())
        v *= scale;
    } else if (rl) {
      for (double &v : result.recovered.data())
        v = std::max(v, 0.0);
      result.iterations_used = rl->iterations;
    }
    return result;
  }

  if (spectral) {
    RecoveryResult result;
    result.recovered = detail::spectral_recover(y, spot, roi, request);
    return result;
  }
  if (rl)
    return detail::richardson_lucy(y, spot, roi, extension, rl->iterations,
                                   observer);
  const auto &cg = std::get<LeastSquaresCG>(request);
  return detail::cgls(y, spot, roi, extension, cg.tolerance, cg.max_iterations,
                      observer);
}

/// Convenience overload locating the ROI from the intermediate size.
inline RecoveryResult recover(const Image &intermediate, const SpotImage &spot,
                              long extension, const DeconvRequest &request,
                              const BackgroundModel &background = {}) {
  const auto ext = static_cast<std::size_t>(std::max(extension, 0L));
  if (intermediate.width() <= 2 * ext || intermediate.height() <= 2 * ext)
    throw std::invalid_argument("recover: extension leaves an empty ROI");
  const Rect roi{extension, extension, intermediate.width() - 2 * ext,
                 intermediate.height() - 2 * ext};
  return recover(intermediate, spot, roi, extension, request, background);
}

} // namespace dds
