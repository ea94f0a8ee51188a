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

#include "lowlight/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "lowlight/denoise.hpp"
#include "lowlight/errors.hpp"

namespace lowlight {
namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;  // (k1 * L)^2, L = 1
constexpr double kC2 = 0.03 * 0.03;

double sum_sq_diff(const PlaneF& a, const PlaneF& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a.data[i]) - b.data[i];
    acc += d * d;
  }
  return acc;
}

double mse_to_psnr(double sse, double n) {
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(n / sse);
}

}  // namespace

double psnr(const PlaneF& a, const PlaneF& b) {
  require_valid(a, "plane");
  require_valid(b, "plane");
  require_same_size(a, b, "psnr input");
  return mse_to_psnr(sum_sq_diff(a, b), static_cast<double>(a.size()));
}

double psnr(const RgbImage& a, const RgbImage& b) {
  require_valid(a, "image");
  require_valid(b, "image");
  require_same_size(a.r, b.r, "psnr input");
  const double sse =
      sum_sq_diff(a.r, b.r) + sum_sq_diff(a.g, b.g) + sum_sq_diff(a.b, b.b);
  return mse_to_psnr(sse, 3.0 * static_cast<double>(a.r.size()));
}

double ssim(const PlaneF& a, const PlaneF& b) {
  require_valid(a, "plane");
  require_valid(b, "plane");
  require_same_size(a, b, "ssim input");
  if (a.width < kSsimWindow || a.height < kSsimWindow) {
    throw_error(ErrorCode::kInvalidArgument, "ssim needs at least 11x11");
  }

  std::array<double, kSsimWindow> k{};
  double ksum = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - (kSsimWindow - 1) / 2.0;
    k[static_cast<size_t>(i)] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    ksum += k[static_cast<size_t>(i)];
  }
  for (double& v : k) v /= ksum;

  double total = 0.0;
  long count = 0;
  for (int y0 = 0; y0 + kSsimWindow <= a.height; ++y0) {
    for (int x0 = 0; x0 + kSsimWindow <= a.width; ++x0) {
      double ma = 0.0, mb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
      for (int r = 0; r < kSsimWindow; ++r) {
        const float* pa = a.row(y0 + r) + x0;
        const float* pb = b.row(y0 + r) + x0;
        const double wr = k[static_cast<size_t>(r)];
        for (int c = 0; c < kSsimWindow; ++c) {
          const double w = wr * k[static_cast<size_t>(c)];
          const double va = pa[c];
          const double vb = pb[c];
          ma += w * va;
          mb += w * vb;
          saa += w * va * va;
          sbb += w * vb * vb;
          sab += w * va * vb;
        }
      }
      const double var_a = saa - ma * ma;
      const double var_b = sbb - mb * mb;
      const double cov = sab - ma * mb;
      total += ((2.0 * ma * mb + kC1) * (2.0 * cov + kC2)) /
               ((ma * ma + mb * mb + kC1) * (var_a + var_b + kC2));
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

LumaStats luma_stats(const RgbImage& img) {
  require_valid(img, "image");
  PlaneF y(img.r.width, img.r.height);
  for (size_t i = 0; i < y.size(); ++i) {
    y.data[i] = static_cast<float>(
        bt601_luma(img.r.data[i], img.g.data[i], img.b.data[i]));
  }
  double sum = 0.0, sum2 = 0.0;
  for (float v : y.data) {
    sum += v;
    sum2 += static_cast<double>(v) * v;
  }
  const double n = static_cast<double>(y.size());
  LumaStats s;
  s.mean = sum / n;
  s.stddev = std::sqrt(std::max(sum2 / n - s.mean * s.mean, 0.0));
  s.sigma_estimate = (y.width >= 3 && y.height >= 3) ? estimate_sigma(y) : 0.0;
  return s;
}

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string format_report(const MetricReport& report) {
  std::string line = "{";
  if (report.psnr_db.has_value()) {
    line += "\"psnr_db\":" + format_number(*report.psnr_db) + ",";
  }
  if (report.ssim.has_value()) {
    line += "\"ssim\":" + format_number(*report.ssim) + ",";
  }
  line += "\"mean_luma\":" + format_number(report.mean_luma) + ",";
  line += "\"std_luma\":" + format_number(report.std_luma) + ",";
  line += "\"sigma_estimate\":" + format_number(report.sigma_estimate) + "}";
  return line;
}

}  // namespace lowlight
