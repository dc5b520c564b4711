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

#include "dds/io.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

using dds::FormatError;
using dds::Image;
using dds::testing::bit_identical;
using dds::testing::TempDir;

namespace {

void write_bytes(const std::filesystem::path &p,
                 const std::vector<unsigned char> &bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

FormatError::Kind load_error_kind(const std::filesystem::path &p) {
  try {
    dds::load_ddsf(p);
  } catch (const FormatError &e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected FormatError";
  return FormatError::Kind::BadValue;
}

} // namespace

TEST(Ddsf, HeaderLayoutIsLittleEndian) {
  Image im(3, 2, 0.1);
  im(0, 0) = 1.0;
  const auto bytes = dds::encode_ddsf(im);
  ASSERT_EQ(bytes.size(), 24u + 6 * 8);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 8), "DDSIMG01");
  EXPECT_EQ(bytes[8], 3);
  EXPECT_EQ(bytes[9], 0);
  EXPECT_EQ(bytes[12], 2);
  // 0.1 = 0x3FB999999999999A, little-endian
  EXPECT_EQ(bytes[16], 0x9A);
  EXPECT_EQ(bytes[23], 0x3F);
  // 1.0 = 0x3FF0000000000000
  EXPECT_EQ(bytes[24 + 6], 0xF0);
  EXPECT_EQ(bytes[24 + 7], 0x3F);
}

TEST(Ddsf, RoundTripIntermediateSizedImage) {
  TempDir dir;
  std::mt19937_64 gen(3);
  const Image im = dds::testing::random_image(gen, 500, 500, -1.0, 1.0, 0.1);
  const auto path = dir / "intermediate.ddsf";
  dds::save_ddsf(im, path);
  EXPECT_EQ(std::filesystem::file_size(path), 2000024u);
  EXPECT_TRUE(bit_identical(dds::load_ddsf(path), im));
}

// Property: save then load is the identity for random shapes and values,
// including signed zeros and extreme magnitudes.
TEST(DdsfProperty, RoundTripRandomImages) {
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<std::size_t> dim(1, 64);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int trial = 0; trial < 100; ++trial) {
    Image im(dim(gen), dim(gen), std::ldexp(1.0 + (bits(gen) % 1000), -10));
    for (double &v : im.data()) {
      double candidate;
      do {
        candidate = std::bit_cast<double>(bits(gen));
      } while (!std::isfinite(candidate));
      v = candidate;
    }
    im.data()[0] = -0.0;
    const Image back = dds::decode_ddsf(dds::encode_ddsf(im));
    ASSERT_TRUE(bit_identical(back, im)) << "trial " << trial;
  }
}

TEST(Ddsf, WrongMagicIsFormatError) {
  TempDir dir;
  auto bytes = dds::encode_ddsf(Image(2, 2, 1.0));
  bytes[0] = 'X';
  write_bytes(dir / "bad.ddsf", bytes);
  EXPECT_EQ(load_error_kind(dir / "bad.ddsf"), FormatError::Kind::BadMagic);
}

TEST(Ddsf, TruncatedPayload) {
  TempDir dir;
  auto bytes = dds::encode_ddsf(Image(4, 4, 1.0));
  bytes.resize(bytes.size() - 3);
  write_bytes(dir / "short.ddsf", bytes);
  EXPECT_EQ(load_error_kind(dir / "short.ddsf"), FormatError::Kind::Truncated);

  bytes.resize(12);
  write_bytes(dir / "header.ddsf", bytes);
  EXPECT_EQ(load_error_kind(dir / "header.ddsf"), FormatError::Kind::Truncated);
}

TEST(Ddsf, TrailingBytesAreLengthMismatch) {
  TempDir dir;
  auto bytes = dds::encode_ddsf(Image(4, 4, 1.0));
  bytes.push_back(0);
  write_bytes(dir / "long.ddsf", bytes);
  EXPECT_EQ(load_error_kind(dir / "long.ddsf"),
            FormatError::Kind::LengthMismatch);
}

TEST(Ddsf, InvalidHeaderAndValues) {
  auto bytes = dds::encode_ddsf(Image(2, 2, 1.0));
  auto zero_dim = bytes;
  zero_dim[8] = 0;
  EXPECT_THROW(
      {
        try {
          dds::decode_ddsf(zero_dim);
        } catch (const FormatError &e) {
          EXPECT_EQ(e.kind(), FormatError::Kind::BadHeader);
          throw;
        }
      },
      FormatError);

  auto nan_value = bytes;
  const auto nan_bits = std::bit_cast<std::uint64_t>(std::nan(""));
  for (int i = 0; i < 8; ++i)
    nan_value[24 + i] = static_cast<unsigned char>(nan_bits >> (8 * i));
  try {
    dds::decode_ddsf(nan_value);
    ADD_FAILURE() << "NaN accepted";
  } catch (const FormatError &e) {
    EXPECT_EQ(e.kind(), FormatError::Kind::BadValue);
  }
}

TEST(Ddsf, MissingFileIsIoError) {
  EXPECT_THROW(dds::load_ddsf("/nonexistent/dir/x.ddsf"), dds::IoError);
}

TEST(Pgm, ConstantImageIsMidGray) {
  TempDir dir;
  const Image im(4, 3, 1.0, 0.7);
  dds::export_pgm(im, dir / "c8.pgm", 8);
  dds::export_pgm(im, dir / "c16.pgm", 16);
  const auto p8 = dds::testing::read_pgm(dir / "c8.pgm");
  const auto p16 = dds::testing::read_pgm(dir / "c16.pgm");
  EXPECT_EQ(p8.maxval, 255u);
  EXPECT_EQ(p16.maxval, 65535u);
  for (unsigned v : p8.pixels)
    EXPECT_EQ(v, 128u);
  for (unsigned v : p16.pixels)
    EXPECT_EQ(v, 32768u);
}

TEST(Pgm, TwoValuedImageHitsEndpoints) {
  TempDir dir;
  Image im(2, 1, 1.0);
  im(1, 0) = 1.0;
  dds::export_pgm(im, dir / "b.pgm", 8);
  const auto p = dds::testing::read_pgm(dir / "b.pgm");
  EXPECT_EQ(p.pixels, (std::vector<unsigned>{0, 255}));
}

TEST(Pgm, SixteenBitIsBigEndian) {
  TempDir dir;
  Image im(3, 1, 1.0);
  im(1, 0) = 0.5;
  im(2, 0) = 1.0;
  dds::export_pgm(im, dir / "w.pgm", 16);
  const auto p = dds::testing::read_pgm(dir / "w.pgm");
  EXPECT_EQ(p.pixels, (std::vector<unsigned>{0, 32768, 65535}));
  EXPECT_EQ(std::filesystem::file_size(dir / "w.pgm"),
            std::string("P5\n3 1\n65535\n").size() + 6);
}

// Property: the exported gray levels are monotone in the source values.
TEST(PgmProperty, MappingIsOrderPreserving) {
  TempDir dir;
  std::mt19937_64 gen(5);
  for (int depth : {8, 16}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Image im = dds::testing::random_image(gen, 17, 11, -3.0, 5.0);
      const auto path = dir / "m.pgm";
      dds::export_pgm(im, path, depth);
      const auto p = dds::testing::read_pgm(path);
      ASSERT_EQ(p.width, 17u);
      ASSERT_EQ(p.height, 11u);
      for (std::size_t i = 0; i < im.size(); ++i)
        for (std::size_t j = 0; j < im.size(); ++j)
          if (im.data()[i] < im.data()[j])
            ASSERT_LE(p.pixels[i], p.pixels[j]);
    }
  }
}

TEST(Pgm, RejectsUnsupportedDepth) {
  TempDir dir;
  EXPECT_THROW(dds::export_pgm(Image(1, 1, 1.0), dir / "x.pgm", 12),
               std::invalid_argument);
}
