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

#ifndef LOWLIGHT_METRICS_HPP_
#define LOWLIGHT_METRICS_HPP_

#include <optional>
#include <string>

#include "lowlight/image.hpp"

namespace lowlight {

// Full-reference and blind statistics for one image. psnr_db/ssim are set
// only when a reference was available.
struct MetricReport {
  std::optional<double> psnr_db;
  std::optional<double> ssim;
  double mean_luma = 0.0;
  double std_luma = 0.0;
  double sigma_estimate = 0.0;
};

// 10*log10(1/MSE) over all samples in [0,1] units; identical inputs return
// +infinity.
double psnr(const PlaneF& a, const PlaneF& b);
double psnr(const RgbImage& a, const RgbImage& b);

// Single-scale SSIM: 11x11 Gaussian window (sigma 1.5), k1 = 0.01,
// k2 = 0.03, dynamic range 1, averaged over fully interior window positions.
// Inputs must be at least 11x11.
double ssim(const PlaneF& a, const PlaneF& b);

struct LumaStats {
  double mean = 0.0;
  double stddev = 0.0;       // population standard deviation
  double sigma_estimate = 0.0;
};

// Statistics of the BT.601 luma plane. sigma_estimate is 0 for images
// smaller than the 3x3 estimator support.
LumaStats luma_stats(const RgbImage& img);

// One line of "key":value pairs in declaration order, no trailing newline.
// Non-finite values print as inf/-inf/nan (parseable by most JSON readers in
// lenient mode; documented in the README).
std::string format_report(const MetricReport& report);

}  // namespace lowlight

#endif  // LOWLIGHT_METRICS_HPP_
