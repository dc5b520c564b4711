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

#include "dds/fft.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using dds::Image;

TEST(Fft, ZerosAndDelta) {
  const auto Z = dds::dft2_forward(Image(8, 6, 1.0, 0.0));
  for (const auto &c : Z.data)
    EXPECT_EQ(std::abs(c), 0.0);

  Image delta(8, 6, 1.0, 0.0);
  delta(0, 0) = 1.0;
  const auto D = dds::dft2_forward(delta);
  for (const auto &c : D.data) {
    EXPECT_NEAR(c.real(), 1.0, 1e-15);
    EXPECT_NEAR(c.imag(), 0.0, 1e-15);
  }
}

TEST(Fft, RoundTripOddSizes) {
  std::mt19937_64 gen(11);
  const Image x = dds::testing::random_image(gen, 33, 47, -1.0, 1.0, 0.25);
  const Image back = dds::dft2_inverse(dds::dft2_forward(x));
  EXPECT_EQ(back.width(), 33u);
  EXPECT_EQ(back.height(), 47u);
  EXPECT_EQ(back.pitch(), 0.25);
  EXPECT_LE(dds::testing::max_abs_diff(x, back), 1e-12);
}

// Property: matches the O(n^4) DFT oracle on random small grids.
TEST(Fft, MatchesDirectDft) {
  std::mt19937_64 gen(12);
  std::uniform_int_distribution<std::size_t> dim(1, 16);
  for (int trial = 0; trial < 20; ++trial) {
    const Image x = dds::testing::random_image(gen, dim(gen), dim(gen), -1, 1);
    const auto fast = dds::dft2_forward(x);
    const auto slow = dds::testing::direct_dft2(x);
    ASSERT_EQ(fast.data.size(), slow.size());
    for (std::size_t i = 0; i < slow.size(); ++i)
      ASSERT_LE(std::abs(fast.data[i] - slow[i]), 1e-12) << "trial " << trial;
  }
}

TEST(Fft, RealInputIsConjugateSymmetric) {
  std::mt19937_64 gen(13);
  const Image x = dds::testing::random_image(gen, 12, 9);
  const auto X = dds::dft2_forward(x);
  for (std::size_t l = 0; l < 9; ++l)
    for (std::size_t k = 0; k < 12; ++k)
      EXPECT_LE(std::abs(X(k, l) - std::conj(X((12 - k) % 12, (9 - l) % 9))),
                1e-12);
}

TEST(Fft, RepeatedTransformsAreBitIdentical) {
  std::mt19937_64 gen(14);
  const Image x = dds::testing::random_image(gen, 64, 40);
  const Image a = dds::dft2_inverse(dds::dft2_forward(x));
  const Image b = dds::dft2_inverse(dds::dft2_forward(x));
  EXPECT_TRUE(dds::testing::bit_identical(a, b));
}
