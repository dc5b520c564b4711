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

#include "dds/patterns.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using dds::Image;

namespace {

double bright_fraction(const Image &im) {
  double s = 0.0;
  for (double v : im.data())
    s += v;
  return s / static_cast<double>(im.size());
}

bool binary(const Image &im) {
  for (double v : im.data())
    if (v != 0.0 && v != 1.0)
      return false;
  return true;
}

bool dark_edge(const Image &im) {
  for (std::size_t x = 0; x < im.width(); ++x)
    if (im(x, 0) != 0.0 || im(x, im.height() - 1) != 0.0)
      return false;
  for (std::size_t y = 0; y < im.height(); ++y)
    if (im(0, y) != 0.0 || im(im.width() - 1, y) != 0.0)
      return false;
  return true;
}

} // namespace

TEST(PointPair, Positions) {
  const auto [a, b] = dds::point_pair_positions(20, 300, 300);
  EXPECT_EQ(a, (dds::PixelCoord{140, 150}));
  EXPECT_EQ(b, (dds::PixelCoord{160, 150}));
  const Image im = dds::generate(dds::PointPair{20}, 300, 300, 0.1);
  EXPECT_EQ(im(140, 150), 1.0);
  EXPECT_EQ(im(160, 150), 1.0);
  EXPECT_DOUBLE_EQ(bright_fraction(im) * 90000.0, 2.0);
  EXPECT_THROW(dds::generate(dds::PointPair{299}, 300, 300, 0.1), std::invalid_argument);
  EXPECT_THROW(dds::generate(dds::PointPair{0}, 300, 300, 0.1), std::invalid_argument);
}

TEST(BarGrid, ExactDutyCycle) {
  const Image im = dds::generate(dds::BarGrid{10, 0.5}, 300, 300, 0.1);
  EXPECT_TRUE(binary(im));
  EXPECT_DOUBLE_EQ(bright_fraction(im), 0.5);
  EXPECT_DOUBLE_EQ(im.pitch(), 0.1);
  // Columns constant, alternating in runs of five.
  for (std::size_t x = 0; x < 300; ++x)
    EXPECT_EQ(im(x, 0), (x % 10 >= 5) ? 1.0 : 0.0);
  const Image q = dds::generate(dds::BarGrid{8, 0.25}, 64, 10, 1.0);
  EXPECT_DOUBLE_EQ(bright_fraction(q), 0.25);
  EXPECT_THROW(dds::generate(dds::BarGrid{10, 0.0}, 50, 50, 1.0), std::invalid_argument);
  EXPECT_THROW(dds::generate(dds::BarGrid{1, 0.5}, 50, 50, 1.0), std::invalid_argument);
}

TEST(SiemensStar, HalfBrightDisk) {
  const Image im = dds::generate(dds::SiemensStar{16}, 301, 301, 1.0);
  EXPECT_TRUE(binary(im));
  EXPECT_TRUE(dark_edge(im));
  // Disk radius 149 centred at 150; half of its area is bright.
  const double disk = std::numbers::pi * 149.0 * 149.0;
  EXPECT_NEAR(bright_fraction(im) * 301.0 * 301.0 / disk, 0.5, 0.01);
  // Opposite points of a 16-spoke star lie in sectors of equal parity.
  EXPECT_EQ(im(150 + 60, 150 + 7), im(150 - 60, 150 - 7));
}

TEST(RandomBlobs, SeededAndInside) {
  const dds::RandomBlobs spec{6, 5.0, 7};
  const Image a = dds::generate(spec, 120, 90, 1.0);
  const Image b = dds::generate(spec, 120, 90, 1.0);
  EXPECT_TRUE(dds::testing::bit_identical(a, b));
  EXPECT_TRUE(binary(a));
  EXPECT_TRUE(dark_edge(a));
  EXPECT_GT(bright_fraction(a), 0.0);
  const Image c = dds::generate(dds::RandomBlobs{6, 5.0, 8}, 120, 90, 1.0);
  EXPECT_FALSE(dds::testing::bit_identical(a, c));
  EXPECT_THROW(dds::generate(dds::RandomBlobs{1, 20.0, 1}, 30, 30, 1.0),
               std::invalid_argument);
}

// Property: every pattern is binary and deterministic across random sizes.
TEST(PatternProperty, BinaryAndDeterministic) {
  std::mt19937_64 gen(71);
  std::uniform_int_distribution<long> dim(40, 120);
  for (int trial = 0; trial < 40; ++trial) {
    const long w = dim(gen), h = dim(gen);
    const dds::PatternSpec specs[] = {dds::PointPair{10}, dds::BarGrid{6, 0.5},
                                      dds::SiemensStar{8},
                                      dds::RandomBlobs{3, 4.0, gen()}};
    for (const auto &spec : specs) {
      const Image a = dds::generate(spec, w, h, 0.1);
      ASSERT_EQ(a.width(), static_cast<std::size_t>(w));
      ASSERT_EQ(a.height(), static_cast<std::size_t>(h));
      ASSERT_TRUE(binary(a));
      ASSERT_TRUE(dds::testing::bit_identical(a, dds::generate(spec, w, h, 0.1)));
    }
  }
}

TEST(Inset, PlacesPointPairInCorner) {
  const Image base = dds::generate(dds::BarGrid{10, 0.5}, 300, 300, 0.1);
  const Image im = dds::with_point_pair_inset(base, 20);
  const auto [a, b] = dds::point_pair_inset_positions(20);
  EXPECT_EQ(a, (dds::PixelCoord{10, 10}));
  EXPECT_EQ(b, (dds::PixelCoord{30, 10}));
  for (std::size_t y = 0; y < 21; ++y)
    for (std::size_t x = 0; x < 41; ++x) {
      const bool impulse = (y == 10 && (x == 10 || x == 30));
      EXPECT_EQ(im(x, y), impulse ? 1.0 : 0.0);
    }
  EXPECT_EQ(im(45, 5), base(45, 5));
  EXPECT_THROW(dds::with_point_pair_inset(Image(20, 20, 1.0), 20), std::invalid_argument);
}
