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

// Command-line front end. Exit codes: 0 success, 1 runtime/data error,
// 2 usage/config error.

#include "dds/dds.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SampleArgs {
  std::string pattern = "bar-grid";
  long period = 10;
  double duty = 0.5;
  long sep = 20;
  long spokes = 16;
  long count = 5;
  double radius = 8.0;
  std::uint64_t seed = 42;
  long size = 300;
  long width = 0;
  long height = 0;
  long inset_sep = 0;
  double pitch = 0.1;
  std::string output;
};

struct SpotArgs {
  std::string profile = "gaussian";
  double sigma = 50.5;
  double radius = 50.0;
  long side = 101;
  double pitch = 0.1;
  std::string output;
};

struct ScanArgs {
  std::string input, spot, output;
  long step = 1;
  long extension = 0;
  std::string background = "zero";
  std::string engine = "direct";
};

struct BlurArgs {
  std::string input, psf, output;
};

struct NoiseArgs {
  std::string input, output;
  double sigma = 0.0;
  std::uint64_t seed = 1;
};

struct DeconvArgs {
  std::string input, spot, output;
  long extension = 0;
  std::string method = "inverse";
  std::string background = "zero";
  double threshold = 1e-9;
  double nsr = 1e-3;
  long iters = 50;
  double tol = 1e-10;
  long max_iters = 500;
};

struct CompareArgs {
  std::string a, b;
  std::string csv_label;
};

struct PipelineArgs {
  std::string config;
  std::string output;
  std::vector<double> sweep;
};

dds::BackgroundModel background_flag(const std::string &text) {
  try {
    return dds::parse_background(text);
  } catch (const dds::ConfigError &e) {
    throw UsageError(e.what());
  }
}

int cmd_gen_sample(const SampleArgs &a) {
  dds::PatternSpec spec;
  if (a.pattern == "bar-grid")
    spec = dds::BarGrid{a.period, a.duty};
  else if (a.pattern == "point-pair")
    spec = dds::PointPair{a.sep};
  else if (a.pattern == "siemens-star")
    spec = dds::SiemensStar{a.spokes};
  else
    spec = dds::RandomBlobs{a.count, a.radius, a.seed};
  const long w = a.width > 0 ? a.width : a.size;
  const long h = a.height > 0 ? a.height : a.size;
  dds::Image image = dds::generate(spec, w, h, a.pitch);
  if (a.inset_sep > 0)
    image = dds::with_point_pair_inset(std::move(image), a.inset_sep);
  dds::save_ddsf(image, a.output);
  return 0;
}

int cmd_gen_spot(const SpotArgs &a) {
  dds::Image out;
  if (a.profile == "microscope") {
    out = dds::make_microscope_psf(a.radius, a.side, a.pitch);
  } else {
    dds::SpotProfile profile;
    if (a.profile == "gaussian")
      profile = dds::Gaussian{a.sigma};
    else if (a.profile == "airy")
      profile = dds::AiryCore{a.radius};
    else
      profile = dds::Disk{a.radius};
    out = dds::make_spot(profile, a.side, a.pitch).image();
  }
  dds::save_ddsf(out, a.output);
  return 0;
}

dds::SpotImage load_spot(const std::string &path) {
  return dds::SpotImage(dds::load_ddsf(path));
}

int cmd_scan(const ScanArgs &a) {
  const dds::ScanConfig config{a.step, a.extension,
                               background_flag(a.background)};
  const dds::Image sample = dds::load_ddsf(a.input);
  const dds::SpotImage spot = load_spot(a.spot);
  const dds::Image out = a.engine == "fft"
                             ? dds::simulate_scan_spectral(sample, spot, config)
                             : dds::simulate_scan(sample, spot, config);
  dds::save_ddsf(out, a.output);
  std::cout << "scan: " << out.width() << "x" << out.height() << " pitch "
            << out.pitch() << " nm/px\n";
  return 0;
}

int cmd_blur(const BlurArgs &a) {
  const dds::Image out =
      dds::widefield_blur(dds::load_ddsf(a.input), dds::load_ddsf(a.psf));
  dds::save_ddsf(out, a.output);
  return 0;
}

int cmd_noise(const NoiseArgs &a) {
  dds::save_ddsf(dds::add_noise(dds::load_ddsf(a.input), a.sigma, a.seed),
                 a.output);
  return 0;
}

int cmd_deconv(const DeconvArgs &a) {
  dds::DeconvRequest request;
  if (a.method == "inverse")
    request = dds::InverseFilter{a.threshold};
  else if (a.method == "wiener")
    request = dds::Wiener{a.nsr};
  else if (a.method == "rl")
    request = dds::RichardsonLucy{a.iters};
  else
    request = dds::LeastSquaresCG{a.tol, a.max_iters};
  try {
    dds::validate_request(request);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  const auto bg = background_flag(a.background);
  const dds::Image intermediate = dds::load_ddsf(a.input);
  const dds::SpotImage spot = load_spot(a.spot);
  const auto result = dds::recover(intermediate, spot, a.extension, request, bg);
  dds::save_ddsf(result.recovered, a.output);
  std::cout << "deconv: " << result.recovered.width() << "x"
            << result.recovered.height()
            << " iterations = " << result.iterations_used
            << " residual = " << result.residual_norm << "\n";
  return 0;
}

int cmd_compare(const CompareArgs &a) {
  const auto report = dds::compare(dds::load_ddsf(a.a), dds::load_ddsf(a.b));
  if (a.csv_label.empty())
    std::cout << dds::to_key_value(report);
  else
    std::cout << dds::kMetricsCsvHeader << "\n"
              << dds::to_csv_row(a.csv_label, report) << "\n";
  return 0;
}

int cmd_pipeline(const PipelineArgs &a) {
  dds::PipelineConfig config;
  try {
    config = dds::load_config(a.config);
  } catch (const dds::IoError &e) {
    throw UsageError(e.what());
  }
  if (!a.output.empty())
    config.output_dir = a.output;

  const auto result = dds::run_pipeline(config);
  dds::write_pipeline_outputs(result, config.output_dir, config.pgm_bit_depth);
  std::cout << dds::metrics_csv(result);
  if (!result.periphery_border_zero)
    std::cerr << "warning: intermediate periphery band is not zero\n";

  if (!a.sweep.empty()) {
    const auto rows = dds::run_noise_sweep(config, a.sweep);
    const std::string csv = dds::noise_sweep_csv(rows);
    std::ofstream out(config.output_dir / "noise_sweep.csv", std::ios::trunc);
    if (!out)
      throw dds::IoError("cannot write noise_sweep.csv");
    out << csv;
    std::cout << csv;
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Dense-scan deconvolution simulator"};
  app.require_subcommand(1);

  SampleArgs sample;
  auto *gen_sample = app.add_subcommand("gen-sample", "Generate a target image");
  gen_sample
      ->add_option("--pattern", sample.pattern, "Pattern kind")
      ->check(CLI::IsMember(
          {"bar-grid", "point-pair", "siemens-star", "random-blobs"}));
  gen_sample->add_option("--period", sample.period, "Bar period (px)");
  gen_sample->add_option("--duty", sample.duty, "Bar duty cycle");
  gen_sample->add_option("--sep", sample.sep, "Point-pair separation (px)");
  gen_sample->add_option("--spokes", sample.spokes, "Siemens star spokes");
  gen_sample->add_option("--count", sample.count, "Random blob count");
  gen_sample->add_option("--radius", sample.radius, "Random blob radius (px)");
  gen_sample->add_option("--seed", sample.seed, "Random blob seed");
  gen_sample->add_option("--size", sample.size, "Square canvas side (px)");
  gen_sample->add_option("--width", sample.width, "Canvas width (px)");
  gen_sample->add_option("--height", sample.height, "Canvas height (px)");
  gen_sample->add_option("--inset-sep", sample.inset_sep,
                         "Add a point-pair corner inset with this separation");
  gen_sample->add_option("--pitch", sample.pitch, "nm per pixel")
      ->check(CLI::PositiveNumber);
  gen_sample->add_option("-o,--output", sample.output)->required();

  SpotArgs spot;
  auto *gen_spot = app.add_subcommand("gen-spot", "Generate a spot or microscope PSF");
  gen_spot->add_option("--profile", spot.profile, "Spot profile")
      ->check(CLI::IsMember({"gaussian", "airy", "disk", "microscope"}));
  gen_spot->add_option("--sigma", spot.sigma, "Gaussian sigma (px)");
  gen_spot->add_option("--radius", spot.radius,
                       "Airy first-zero or disk radius (px)");
  gen_spot->add_option("--side", spot.side, "Odd grid side (px)");
  gen_spot->add_option("--pitch", spot.pitch, "nm per pixel")
      ->check(CLI::PositiveNumber);
  gen_spot->add_option("-o,--output", spot.output)->required();

  ScanArgs scan;
  auto *scan_cmd = app.add_subcommand("scan", "Simulate a point scan");
  scan_cmd->add_option("-i,--input", scan.input, "Sample DDSF")->required();
  scan_cmd->add_option("--spot", scan.spot, "Spot DDSF")->required();
  scan_cmd->add_option("--step", scan.step, "Scan step (px)")
      ->check(CLI::PositiveNumber);
  scan_cmd->add_option("--extension", scan.extension,
                       "Extra scan positions beyond the ROI per side")
      ->check(CLI::NonNegativeNumber);
  scan_cmd->add_option("--background", scan.background,
                       "zero | constant:<level>");
  scan_cmd->add_option("--engine", scan.engine, "direct | fft")
      ->check(CLI::IsMember({"direct", "fft"}));
  scan_cmd->add_option("-o,--output", scan.output)->required();

  BlurArgs blur;
  auto *blur_cmd = app.add_subcommand("blur", "Wide-field microscope image");
  blur_cmd->add_option("-i,--input", blur.input, "Sample DDSF")->required();
  blur_cmd->add_option("--psf", blur.psf, "Microscope PSF DDSF")->required();
  blur_cmd->add_option("-o,--output", blur.output)->required();

  NoiseArgs noise;
  auto *noise_cmd = app.add_subcommand("noise", "Add Gaussian noise");
  noise_cmd->add_option("-i,--input", noise.input)->required();
  noise_cmd->add_option("--sigma", noise.sigma, "Standard deviation")
      ->check(CLI::NonNegativeNumber);
  noise_cmd->add_option("--seed", noise.seed, "Generator seed");
  noise_cmd->add_option("-o,--output", noise.output)->required();

  DeconvArgs deconv;
  auto *deconv_cmd = app.add_subcommand("deconv", "Recover the ROI");
  deconv_cmd->add_option("-i,--input", deconv.input, "Intermediate DDSF")
      ->required();
  deconv_cmd->add_option("--spot", deconv.spot, "Spot DDSF")->required();
  deconv_cmd->add_option("--extension", deconv.extension,
                         "Extension used by the scan")
      ->check(CLI::NonNegativeNumber);
  deconv_cmd->add_option("--method", deconv.method, "inverse | wiener | rl | cgls")
      ->check(CLI::IsMember({"inverse", "wiener", "rl", "cgls"}));
  deconv_cmd->add_option("--background", deconv.background,
                         "zero | constant:<level>");
  deconv_cmd->add_option("--threshold", deconv.threshold,
                         "Inverse filter threshold in [0, 1]");
  deconv_cmd->add_option("--nsr", deconv.nsr, "Wiener noise-to-signal ratio");
  deconv_cmd->add_option("--iters", deconv.iters, "Richardson-Lucy iterations");
  deconv_cmd->add_option("--tol", deconv.tol, "CGLS relative tolerance");
  deconv_cmd->add_option("--max-iters", deconv.max_iters, "CGLS iteration cap");
  deconv_cmd->add_option("-o,--output", deconv.output)->required();

  CompareArgs cmp;
  auto *compare_cmd = app.add_subcommand("compare", "Error metrics of A against B");
  compare_cmd->add_option("a", cmp.a, "Image DDSF")->required();
  compare_cmd->add_option("b", cmp.b, "Reference DDSF")->required();
  compare_cmd->add_option("--csv", cmp.csv_label,
                          "Print a CSV row with this label instead");

  PipelineArgs pipe;
  auto *pipeline_cmd = app.add_subcommand("pipeline", "Run the full experiment");
  pipeline_cmd->add_option("--config", pipe.config, "Config file")->required();
  pipeline_cmd->add_option("-o,--output", pipe.output,
                           "Override output_dir from the config");
  pipeline_cmd->add_option("--noise-sweep", pipe.sweep,
                           "Noise sigmas for a recovery sweep")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen_sample)
      return cmd_gen_sample(sample);
    if (*gen_spot)
      return cmd_gen_spot(spot);
    if (*scan_cmd)
      return cmd_scan(scan);
    if (*blur_cmd)
      return cmd_blur(blur);
    if (*noise_cmd)
      return cmd_noise(noise);
    if (*deconv_cmd)
      return cmd_deconv(deconv);
    if (*compare_cmd)
      return cmd_compare(cmp);
    if (*pipeline_cmd)
      return cmd_pipeline(pipe);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const dds::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
