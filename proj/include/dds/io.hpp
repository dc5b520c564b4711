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
 * @file io.hpp
 * @brief DDSF binary image files and PGM (P5) export.
 *
 * DDSF layout, all little-endian:
 *
 *     offset  size  field
 *     0       8     magic "DDSIMG01"
 *     8       4     width  (uint32)
 *     12      4     height (uint32)
 *     16      8     pitch  (IEEE-754 binary64, nm per pixel)
 *     24      8*N   samples (binary64), row-major, top-left first
 */
#pragma once

#include "dds/image.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

namespace dds {

inline constexpr std::array<char, 8> kDdsfMagic = {'D', 'D', 'S', 'I',
                                                   'M', 'G', '0', '1'};
inline constexpr std::size_t kDdsfHeaderSize = 24;

/// Malformed image file. `kind()` distinguishes the failure.
class FormatError : public std::runtime_error {
public:
  enum class Kind { BadMagic, Truncated, LengthMismatch, BadHeader, BadValue };

  FormatError(Kind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void put_u32le(std::vector<unsigned char> &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

inline void put_u64le(std::vector<unsigned char> &out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

inline std::uint64_t get_le(const unsigned char *p, int nbytes) {
  std::uint64_t v = 0;
  for (int i = nbytes - 1; i >= 0; --i)
    v = (v << 8) | p[i];
  return v;
}

inline std::vector<unsigned char> read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad())
    throw IoError("read failure on '" + path.string() + "'");
  return bytes;
}

inline void write_file(const std::filesystem::path &path,
                       const unsigned char *data, std::size_t n) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char *>(data),
            static_cast<std::streamsize>(n));
  if (!out)
    throw IoError("write failure on '" + path.string() + "'");
}

} // namespace detail

/// Serializes to the DDSF byte layout.
inline std::vector<unsigned char> encode_ddsf(const Image &image) {
  if (image.width() > UINT32_MAX || image.height() > UINT32_MAX)
    throw std::invalid_argument("encode_ddsf: dimensions exceed 32 bits");
  std::vector<unsigned char> out;
  out.reserve(kDdsfHeaderSize + 8 * image.size());
  for (char c : kDdsfMagic)
    out.push_back(static_cast<unsigned char>(c));
  detail::put_u32le(out, static_cast<std::uint32_t>(image.width()));
  detail::put_u32le(out, static_cast<std::uint32_t>(image.height()));
  detail::put_u64le(out, std::bit_cast<std::uint64_t>(image.pitch()));
  for (double v : image.data())
    detail::put_u64le(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

inline Image decode_ddsf(std::span<const unsigned char> bytes) {
  if (bytes.size() < kDdsfMagic.size() ||
      !std::equal(kDdsfMagic.begin(), kDdsfMagic.end(), bytes.begin(),
                  [](char a, unsigned char b) {
                    return static_cast<unsigned char>(a) == b;
                  }))
    throw FormatError(FormatError::Kind::BadMagic, "DDSF: bad magic");
  if (bytes.size() < kDdsfHeaderSize)
    throw FormatError(FormatError::Kind::Truncated, "DDSF: truncated header");

  const auto width = detail::get_le(bytes.data() + 8, 4);
  const auto height = detail::get_le(bytes.data() + 12, 4);
  const double pitch = std::bit_cast<double>(detail::get_le(bytes.data() + 16, 8));
  if (width == 0 || height == 0)
    throw FormatError(FormatError::Kind::BadHeader, "DDSF: zero dimension");
  if (!(pitch > 0.0) || !std::isfinite(pitch))
    throw FormatError(FormatError::Kind::BadHeader, "DDSF: invalid pitch");

  const std::uint64_t count = width * height;
  const std::uint64_t payload = bytes.size() - kDdsfHeaderSize;
  if (payload < count * 8)
    throw FormatError(FormatError::Kind::Truncated,
                      "DDSF: truncated payload (" + std::to_string(payload) +
                          " bytes for " + std::to_string(count) + " samples)");
  if (payload != count * 8)
    throw FormatError(FormatError::Kind::LengthMismatch,
                      "DDSF: payload length does not match " +
                          std::to_string(width) + "x" + std::to_string(height));

  std::vector<double> data(count);
  const unsigned char *p = bytes.data() + kDdsfHeaderSize;
  for (std::uint64_t i = 0; i < count; ++i, p += 8) {
    data[i] = std::bit_cast<double>(detail::get_le(p, 8));
    if (!std::isfinite(data[i]))
      throw FormatError(FormatError::Kind::BadValue,
                        "DDSF: non-finite sample at index " + std::to_string(i));
  }
  return Image(width, height, pitch, std::move(data));
}

inline void save_ddsf(const Image &image, const std::filesystem::path &path) {
  const auto bytes = encode_ddsf(image);
  detail::write_file(path, bytes.data(), bytes.size());
}

inline Image load_ddsf(const std::filesystem::path &path) {
  const auto bytes = detail::read_file(path);
  return decode_ddsf(bytes);
}

/**
 * Writes a binary (P5) graymap. Values map linearly from [min, max] of the
 * image onto [0, 2^bit_depth - 1]; a constant image maps to 2^(bit_depth-1).
 * 16-bit samples are written big-endian.
 */
inline void export_pgm(const Image &image, const std::filesystem::path &path,
                       int bit_depth = 8) {
  if (bit_depth != 8 && bit_depth != 16)
    throw std::invalid_argument("export_pgm: bit depth must be 8 or 16");
  if (image.empty())
    throw std::invalid_argument("export_pgm: empty image");

  const auto [lo_it, hi_it] =
      std::minmax_element(image.data().begin(), image.data().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const unsigned maxval = bit_depth == 8 ? 255u : 65535u;

  std::string header = "P5\n" + std::to_string(image.width()) + " " +
                       std::to_string(image.height()) + "\n" +
                       std::to_string(maxval) + "\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  out.reserve(header.size() + image.size() * (bit_depth / 8));

  for (double v : image.data()) {
    unsigned level;
    if (hi == lo) {
      level = 1u << (bit_depth - 1);
    } else {
      const double t = (v - lo) / (hi - lo);
      level = static_cast<unsigned>(std::lround(t * maxval));
      level = std::min(level, maxval);
    }
    if (bit_depth == 16)
      out.push_back(static_cast<unsigned char>(level >> 8));
    out.push_back(static_cast<unsigned char>(level & 0xff));
  }
  detail::write_file(path, out.data(), out.size());
}

} // namespace dds
