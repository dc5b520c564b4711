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

#include "dds/pipeline.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using dds::ConfigError;
using dds::PipelineConfig;

namespace {

// Scaled-down experiment: 60 px ROI, 21 px spot, 20 px extension.
const char *kSmallConfig = R"(# small run
pattern = bar-grid
period = 6
roi_size = 60
inset_separation = 8
spot = gaussian
spot_sigma = 10.5
spot_side = 21
extension = 20
microscope_radius = 20
)";

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST(Config, DefaultsFromEmptyText) {
  const PipelineConfig c = dds::parse_config("");
  EXPECT_EQ(c.roi_width, 300);
  EXPECT_EQ(c.roi_height, 300);
  EXPECT_DOUBLE_EQ(c.pitch, 0.1);
  EXPECT_EQ(c.spot_side, 101);
  EXPECT_DOUBLE_EQ(std::get<dds::Gaussian>(c.spot).sigma, 50.5);
  EXPECT_EQ(c.scan.extension, 100);
  EXPECT_EQ(c.scan.step, 1);
  EXPECT_TRUE(c.scan.background.is_zero());
  EXPECT_DOUBLE_EQ(std::get<dds::InverseFilter>(c.solver).threshold, 1e-9);
  EXPECT_EQ(c.effective_microscope_side(), 599);
  EXPECT_TRUE(std::holds_alternative<dds::BarGrid>(c.pattern));
}

TEST(Config, ParsesEveryKind) {
  const PipelineConfig c = dds::parse_config(
      "pattern = random-blobs\nblob_count = 3\nblob_radius = 2.5\n"
      "pattern_seed = 99\nroi_width = 40\nroi_height = 30  # trailing\n"
      "spot = airy\nspot_radius = 4\nspot_side = 11\n"
      "background = constant:0.5\nmethod = cgls\ntol = 1e-8\nmax_iters = 20\n"
      "noise_sigma = 1e-4\nnoise_seed = 5\npgm_bit_depth = 16\noutput_dir = out\n");
  const auto &blobs = std::get<dds::RandomBlobs>(c.pattern);
  EXPECT_EQ(blobs.count, 3);
  EXPECT_EQ(blobs.seed, 99u);
  EXPECT_EQ(c.roi_width, 40);
  EXPECT_EQ(c.roi_height, 30);
  EXPECT_DOUBLE_EQ(std::get<dds::AiryCore>(c.spot).first_zero_radius, 4.0);
  EXPECT_DOUBLE_EQ(c.scan.background.value(), 0.5);
  EXPECT_EQ(std::get<dds::LeastSquaresCG>(c.solver).max_iterations, 20);
  EXPECT_EQ(c.noise_seed, 5u);
  EXPECT_EQ(c.pgm_bit_depth, 16);
  EXPECT_EQ(c.output_dir, "out");
}

TEST(Config, Errors) {
  EXPECT_THROW(dds::parse_config("bogus = 1\n"), ConfigError);
  EXPECT_THROW(dds::parse_config("step = 1\nstep = 1\n"), ConfigError);
  EXPECT_THROW(dds::parse_config("step = 2\n"), ConfigError);
  EXPECT_THROW(dds::parse_config("spot_side = 100\n"), ConfigError);
  EXPECT_THROW(dds::parse_config("pitch = abc\n"), ConfigError);
  EXPECT_THROW(dds::parse_config("period = 1.5\n"), ConfigError);
  EXPECT_THROW(dds::parse_config("method = magic\n"), ConfigError);
  EXPECT_THROW(dds::parse_config("background = blue\n"), ConfigError);
  EXPECT_THROW(dds::parse_config("no equals sign\n"), ConfigError);
  EXPECT_THROW(dds::parse_config("pgm_bit_depth = 12\n"), ConfigError);
  EXPECT_THROW(dds::parse_config("noise_seed = -1\n"), ConfigError);
  EXPECT_THROW(dds::load_config("/nonexistent/dds.cfg"), dds::IoError);
}

TEST(Pipeline, SmallRunRecoversExactly) {
  const PipelineConfig c = dds::parse_config(kSmallConfig);
  const auto r = dds::run_pipeline(c);
  EXPECT_EQ(r.expected.width(), 60u);
  EXPECT_EQ(r.intermediate.width(), 100u);
  EXPECT_EQ(r.recovered.width(), 60u);
  EXPECT_EQ(r.conventional.width(), 60u);
  EXPECT_TRUE(r.periphery_border_zero);
  EXPECT_LT(r.recovered_vs_expected.mean_abs, 1e-8);
  EXPECT_GT(r.conventional_vs_expected.mean_abs, 1e-2);
  EXPECT_GT(r.intermediate_crop_vs_expected.mean_abs, 1e-2);
}

TEST(Pipeline, DeterministicOutputs) {
  dds::testing::TempDir d1, d2;
  const PipelineConfig c = dds::parse_config(kSmallConfig);
  const auto a = dds::run_pipeline(c);
  const auto b = dds::run_pipeline(c);
  dds::write_pipeline_outputs(a, d1.path(), 8);
  dds::write_pipeline_outputs(b, d2.path(), 8);
  for (const char *name : {"expected.ddsf", "conventional.ddsf", "intermediate.ddsf",
                           "recovered.ddsf", "recovered.pgm", "metrics.csv"}) {
    ASSERT_TRUE(std::filesystem::exists(d1 / name)) << name;
    EXPECT_EQ(slurp(d1 / name), slurp(d2 / name)) << name;
  }
  const std::string csv = slurp(d1 / "metrics.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(csv.rfind("comparison,mean_abs", 0), 0u);
  EXPECT_NE(csv.find("\nrecovered_vs_expected,"), std::string::npos);
  const auto loaded = dds::load_ddsf(d1 / "recovered.ddsf");
  EXPECT_TRUE(dds::testing::bit_identical(loaded, a.recovered));
}

TEST(Pipeline, NoiseDegradesRecovery) {
  PipelineConfig c = dds::parse_config(kSmallConfig);
  const auto rows = dds::run_noise_sweep(c, {0.0, 1e-6, 1e-4, 1e-2});
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i)
    EXPECT_GT(rows[i].recovered_vs_expected.mean_abs,
              rows[i - 1].recovered_vs_expected.mean_abs);
  const std::string csv = dds::noise_sweep_csv(rows);
  EXPECT_EQ(csv.rfind("sigma,comparison,", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);

  c.noise_sigma = 1e-4;
  const auto noisy = dds::run_pipeline(c);
  EXPECT_DOUBLE_EQ(noisy.recovered_vs_expected.mean_abs,
                   rows[2].recovered_vs_expected.mean_abs);
}

TEST(Pipeline, ExtensionChoiceDoesNotChangeRecovery) {
  PipelineConfig c = dds::parse_config(kSmallConfig);
  const auto a = dds::run_pipeline(c);
  c.scan.extension = 10;
  const auto b = dds::run_pipeline(c);
  EXPECT_EQ(b.intermediate.width(), 80u);
  EXPECT_LT(dds::compare(a.recovered, b.recovered).mean_abs, 1e-10);
}

TEST(Pipeline, ConstantBackgroundAndIterativeSolvers) {
  PipelineConfig c = dds::parse_config(kSmallConfig);
  c.scan.background = dds::BackgroundModel::constant(0.3);
  EXPECT_LT(dds::run_pipeline(c).recovered_vs_expected.mean_abs, 1e-8);
  c.scan.background = {};
  c.solver = dds::RichardsonLucy{10};
  const auto rl = dds::run_pipeline(c);
  EXPECT_EQ(rl.recovery.iterations_used, 10);
  for (double v : rl.recovered.data())
    EXPECT_GE(v, 0.0);
}
