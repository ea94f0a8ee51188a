// Copyright (c) the lowlight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli_app.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lowlight.h"

namespace fs = std::filesystem;

namespace lowlight_cli {
namespace {

constexpr double kCompareScale = 0.25;
constexpr double kCompareSigma = 15.0 / 255.0;

struct ImageDeleter {
  void operator()(ll_image* p) const { ll_image_free(p); }
};
struct ResultDeleter {
  void operator()(ll_result* p) const { ll_result_free(p); }
};
using ImagePtr = std::unique_ptr<ll_image, ImageDeleter>;
using ResultPtr = std::unique_ptr<ll_result, ResultDeleter>;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

bool parse_sigma(const std::string& text, double* out) {
  if (text == "auto") {
    *out = -1.0;
    return true;
  }
  try {
    size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size() || !(v >= 0.0) || !std::isfinite(v)) return false;
    *out = v;
    return true;
  } catch (...) {
    return false;
  }
}

bool has_image_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".ppm";
}

// Directories expand to their image files in lexicographic order, so batch
// output order is reproducible.
bool expand_inputs(const std::vector<std::string>& inputs,
                   std::vector<std::string>* files, bool* any_error) {
  for (const std::string& in : inputs) {
    std::error_code ec;
    if (fs::is_directory(in, ec)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(in, ec)) {
        if (entry.is_regular_file() && has_image_extension(entry.path())) {
          found.push_back(entry.path().string());
        }
      }
      if (ec) {
        std::cerr << "error: " << in << ": cannot list directory\n";
        *any_error = true;
        continue;
      }
      std::sort(found.begin(), found.end());
      files->insert(files->end(), found.begin(), found.end());
    } else {
      files->push_back(in);
    }
  }
  return !files->empty();
}

ll_params make_params(const CliConfig& cfg, double sigma_value) {
  ll_params p;
  ll_params_init(&p);
  p.percentile = cfg.percentile;
  p.alpha = cfg.alpha;
  p.lambda = cfg.lambda;
  p.sigma = sigma_value;
  p.denoise = cfg.no_denoise ? 0 : 1;
  return p;
}

bool report_failure(const std::string& path, const char* stage) {
  std::cerr << "error: " << path << ": " << stage << ": " << ll_last_error()
            << "\n";
  return false;
}

bool process_one(const CliConfig& cfg, const ll_params& params,
                 const std::string& path, const ll_image* reference) {
  ll_image* raw = nullptr;
  if (ll_image_load(path.c_str(), &raw) != LL_OK) {
    return report_failure(path, "load");
  }
  ImagePtr input(raw);

  const std::string stem = fs::path(path).stem().string();
  const fs::path out_path =
      fs::path(cfg.output_dir) / (stem + ".enhanced.png");

  if (!cfg.compare_mode) {
    ll_result* rawres = nullptr;
    if (ll_enhance(input.get(), &params, &rawres) != LL_OK) {
      return report_failure(path, "enhance");
    }
    ResultPtr result(rawres);

    ll_image* rawout = nullptr;
    if (ll_result_image(result.get(), &rawout) != LL_OK) {
      return report_failure(path, "enhance");
    }
    ImagePtr output(rawout);
    if (ll_image_save(output.get(), out_path.string().c_str()) != LL_OK) {
      return report_failure(path, "save");
    }
    if (cfg.keep_intermediates &&
        ll_result_write_intermediates(result.get(), cfg.output_dir.c_str(),
                                      stem.c_str()) != LL_OK) {
      return report_failure(path, "intermediates");
    }

    double mean = 0.0, stddev = 0.0, sigma_est = 0.0;
    if (ll_luma_stats(output.get(), &mean, &stddev, &sigma_est) != LL_OK) {
      return report_failure(path, "stats");
    }
    std::cout << "{\"file\":" << quoted(path)
              << ",\"output\":" << quoted(out_path.string())
              << ",\"threshold\":" << fmt(ll_result_threshold(result.get()))
              << ",\"sigma\":" << fmt(ll_result_sigma(result.get()))
              << ",\"identity_fallback\":"
              << ll_result_used_identity_curve(result.get())
              << ",\"mean_luma\":" << fmt(mean)
              << ",\"std_luma\":" << fmt(stddev)
              << ",\"sigma_estimate\":" << fmt(sigma_est) << "}\n";
    return true;
  }

  // Compare mode: score the pipeline and the plain adaptive-gamma baseline
  // against the reference. When the input IS the reference, degrade it
  // first (seeded) so there is something to measure.
  const ll_image* degraded = input.get();
  ImagePtr synthesized;
  double identical_check = 0.0;
  if (ll_psnr(input.get(), reference, &identical_check) == LL_OK &&
      std::isinf(identical_check)) {
    ll_image* rawdeg = nullptr;
    if (ll_degrade(input.get(), kCompareScale, kCompareSigma, cfg.seed,
                   &rawdeg) != LL_OK) {
      return report_failure(path, "degrade");
    }
    synthesized.reset(rawdeg);
    degraded = synthesized.get();
  }

  ll_compare_report rep;
  ll_image* rawfull = nullptr;
  ll_image* rawbase = nullptr;
  if (ll_compare(degraded, reference, &params, &rep, &rawfull, &rawbase) !=
      LL_OK) {
    return report_failure(path, "compare");
  }
  ImagePtr full(rawfull), baseline(rawbase);

  const fs::path base_path = fs::path(cfg.output_dir) / (stem + ".agcwd.png");
  if (ll_image_save(full.get(), out_path.string().c_str()) != LL_OK) {
    return report_failure(path, "save");
  }
  if (ll_image_save(baseline.get(), base_path.string().c_str()) != LL_OK) {
    return report_failure(path, "save");
  }
  if (cfg.keep_intermediates) {
    ll_result* rawres = nullptr;
    if (ll_enhance(degraded, &params, &rawres) != LL_OK) {
      return report_failure(path, "intermediates");
    }
    ResultPtr result(rawres);
    if (ll_result_write_intermediates(result.get(), cfg.output_dir.c_str(),
                                      stem.c_str()) != LL_OK) {
      return report_failure(path, "intermediates");
    }
  }

  std::cout << "{\"file\":" << quoted(path)
            << ",\"output\":" << quoted(out_path.string())
            << ",\"baseline_output\":" << quoted(base_path.string())
            << ",\"psnr_input\":" << fmt(rep.psnr_input)
            << ",\"ssim_input\":" << fmt(rep.ssim_input)
            << ",\"psnr_full\":" << fmt(rep.psnr_full)
            << ",\"ssim_full\":" << fmt(rep.ssim_full)
            << ",\"psnr_baseline\":" << fmt(rep.psnr_baseline)
            << ",\"ssim_baseline\":" << fmt(rep.ssim_baseline)
            << ",\"sigma_full\":" << fmt(rep.sigma_full)
            << ",\"sigma_baseline\":" << fmt(rep.sigma_baseline) << "}\n";
  return true;
}

}  // namespace

int parse_args(int argc, const char* const* argv, CliConfig* config) {
  CLI::App app{"Noise-aware low-light image enhancement"};
  app.add_option("inputs", config->inputs, "input images or directories")
      ->required();
  app.add_option("--out", config->output_dir, "output directory")
      ->capture_default_str();
  app.add_option("--percentile", config->percentile,
                 "threshold percentile, in (0,100)")
      ->capture_default_str();
  app.add_option("--alpha", config->alpha,
                 "histogram weighting exponent, in (0,1]")
      ->capture_default_str();
  app.add_option("--lambda", config->lambda,
                 "illumination smoothing strength, > 0")
      ->capture_default_str();
  app.add_option("--sigma", config->sigma,
                 "denoiser noise level in [0,1], or 'auto'")
      ->capture_default_str();
  app.add_flag("--no-denoise", config->no_denoise, "skip the denoising stage");
  app.add_flag("--keep-intermediates", config->keep_intermediates,
               "also write illumination/reflectance/curve artifacts");
  app.add_flag("--compare", config->compare_mode,
               "score against --reference, also running the plain "
               "adaptive-gamma baseline");
  app.add_option("--reference", config->reference,
                 "clean reference image for --compare");
  app.add_option("--seed", config->seed,
                 "seed for the synthetic degradation in --compare")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (!(config->percentile > 0.0 && config->percentile < 100.0)) {
    std::cerr << "error: --percentile must be in (0,100)\n";
    return 2;
  }
  if (!(config->alpha > 0.0 && config->alpha <= 1.0)) {
    std::cerr << "error: --alpha must be in (0,1]\n";
    return 2;
  }
  if (!(config->lambda > 0.0)) {
    std::cerr << "error: --lambda must be > 0\n";
    return 2;
  }
  double sigma_value = 0.0;
  if (!parse_sigma(config->sigma, &sigma_value)) {
    std::cerr << "error: --sigma must be 'auto' or a non-negative number\n";
    return 2;
  }
  if (config->compare_mode && config->reference.empty()) {
    std::cerr << "error: --compare requires --reference\n";
    return 2;
  }
  return -1;
}

int run(const CliConfig& config) {
  double sigma_value = -1.0;
  if (!parse_sigma(config.sigma, &sigma_value)) {
    std::cerr << "error: --sigma must be 'auto' or a non-negative number\n";
    return 2;
  }
  const ll_params params = make_params(config, sigma_value);

  bool any_error = false;
  std::vector<std::string> files;
  if (!expand_inputs(config.inputs, &files, &any_error)) {
    std::cerr << "error: no input files\n";
    return 1;
  }

  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory "
              << config.output_dir << "\n";
    return 1;
  }

  ImagePtr reference;
  if (config.compare_mode) {
    ll_image* raw = nullptr;
    if (ll_image_load(config.reference.c_str(), &raw) != LL_OK) {
      std::cerr << "error: " << config.reference << ": load: "
                << ll_last_error() << "\n";
      return 1;
    }
    reference.reset(raw);
  }

  for (const std::string& file : files) {
    if (!process_one(config, params, file, reference.get())) any_error = true;
  }
  return any_error ? 1 : 0;
}

}  // namespace lowlight_cli
