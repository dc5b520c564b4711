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
 * @file fft.hpp
 * @brief 2D discrete Fourier transforms over images, backed by FFTW.
 *
 * Convention: the forward transform is unnormalized,
 *     X(k, l) = sum_{x, y} x(x, y) exp(-2 pi i (k x / W + l y / H)),
 * and the inverse divides by W * H, so inverse(forward(x)) == x.
 *
 * Plans are created with FFTW_ESTIMATE, which is deterministic, so repeated
 * transforms of the same data are bit-identical.
 */
#pragma once

#include "dds/image.hpp"

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace dds {

/// Complex 2D spectrum, row-major, same geometry as the image it came from.
struct Spectrum {
  std::size_t width = 0;
  std::size_t height = 0;
  double pitch = 1.0;
  std::vector<std::complex<double>> data;

  std::complex<double> &operator()(std::size_t k, std::size_t l) {
    return data[l * width + k];
  }
  const std::complex<double> &operator()(std::size_t k, std::size_t l) const {
    return data[l * width + k];
  }
};

namespace detail {

// The FFTW planner is not thread-safe; execution on distinct arrays is.
inline std::mutex &fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void *p) const noexcept { fftw_free(p); }
};

struct PlanDeleter {
  void operator()(fftw_plan p) const noexcept {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(p);
  }
};
using UniquePlan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;

inline void transform_in_place(std::vector<std::complex<double>> &data,
                               std::size_t width, std::size_t height,
                               int sign) {
  static_assert(sizeof(std::complex<double>) == sizeof(fftw_complex));
  std::unique_ptr<fftw_complex, FftwFree> buf(static_cast<fftw_complex *>(
      fftw_malloc(sizeof(fftw_complex) * data.size())));
  if (!buf)
    throw std::bad_alloc();
  UniquePlan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan.reset(fftw_plan_dft_2d(static_cast<int>(height),
                                static_cast<int>(width), buf.get(), buf.get(),
                                sign, FFTW_ESTIMATE));
  }
  if (!plan)
    throw std::runtime_error("FFTW: plan creation failed");
  std::memcpy(buf.get(), data.data(), sizeof(fftw_complex) * data.size());
  fftw_execute(plan.get());
  std::memcpy(static_cast<void *>(data.data()), buf.get(),
              sizeof(fftw_complex) * data.size());
}

} // namespace detail

inline Spectrum dft2_forward(const Image &image) {
  Spectrum s{image.width(), image.height(), image.pitch(), {}};
  s.data.assign(image.data().begin(), image.data().end());
  detail::transform_in_place(s.data, s.width, s.height, FFTW_FORWARD);
  return s;
}

/// Inverse transform of a complex spectrum, kept complex.
inline std::vector<std::complex<double>>
dft2_inverse_complex(const Spectrum &spectrum) {
  auto data = spectrum.data;
  detail::transform_in_place(data, spectrum.width, spectrum.height,
                             FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto &c : data)
    c *= scale;
  return data;
}

/// Inverse transform returning the real part as an image.
inline Image dft2_inverse(const Spectrum &spectrum) {
  const auto data = dft2_inverse_complex(spectrum);
  std::vector<double> re(data.size());
  for (std::size_t i = 0; i < data.size(); ++i)
    re[i] = data[i].real();
  return Image(spectrum.width, spectrum.height, spectrum.pitch, std::move(re));
}

} // namespace dds
