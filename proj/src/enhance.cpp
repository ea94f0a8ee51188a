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

#include "lowlight/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "lowlight/errors.hpp"

namespace lowlight {

namespace {

void validate_params(const EnhanceParams& p) {
  if (!(p.percentile > 0.0 && p.percentile < 100.0)) {
    throw_error(ErrorCode::kInvalidArgument,
                "enhance: percentile must be in (0,100)");
  }
  if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) {
    throw_error(ErrorCode::kInvalidArgument, "enhance: alpha must be in [0,1]");
  }
  if (p.histogram_bins != 256) {
    throw_error(ErrorCode::kInvalidArgument,
                "enhance: only 256 histogram bins are supported");
  }
}

inline int level_of(float sample) {
  double x = sample;
  if (x < 0.0) x = 0.0;
  if (x > 1.0) x = 1.0;
  return static_cast<int>(std::lround(x * 255.0));
}

}  // namespace

MappingCurve MappingCurve::identity() {
  MappingCurve c;
  for (int l = 0; l < 256; ++l) c.lut[l] = l;
  c.threshold = 0.0;
  return c;
}

double compute_threshold(const PlaneF& i, double percentile) {
  require_valid(i, "compute_threshold");
  if (!(percentile > 0.0 && percentile < 100.0)) {
    throw_error(ErrorCode::kInvalidArgument,
                "compute_threshold: percentile must be in (0,100)");
  }

  const size_t n = i.size();
  std::vector<double> scaled(n);
  for (size_t k = 0; k < n; ++k) scaled[k] = double(i.data[k]) * 255.0;

  std::vector<double> sorted = scaled;
  std::sort(sorted.begin(), sorted.end());

  // Nearest-rank percentile on the sorted multiset.
  size_t rank = static_cast<size_t>(
      std::ceil(percentile / 100.0 * static_cast<double>(n)));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  const double p = sorted[rank - 1];
  const double max_value = sorted[n - 1];

  double sum = 0.0;
  size_t count = 0;
  for (size_t k = 0; k < n; ++k) {
    if (scaled[k] > p && scaled[k] < max_value) {
      sum += scaled[k];
      ++count;
    }
  }
  if (count == 0) {
    throw_error(ErrorCode::kDegenerateHistogram,
                "compute_threshold: no samples strictly between the "
                "percentile and the maximum");
  }
  return 255.0 - sum / static_cast<double>(count);
}

std::array<double, 256> build_agcwd_curve(const PlaneF& i, double alpha) {
  require_valid(i, "build_agcwd_curve");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw_error(ErrorCode::kInvalidArgument,
                "build_agcwd_curve: alpha must be in [0,1]");
  }

  std::array<size_t, 256> counts{};
  for (float s : i.data) ++counts[level_of(s)];

  size_t occupied = 0;
  for (size_t c : counts) occupied += (c > 0);
  if (occupied <= 1) {
    throw_error(ErrorCode::kDegenerateHistogram,
                "build_agcwd_curve: constant plane");
  }

  const double n = static_cast<double>(i.size());
  std::array<double, 256> pdf{};
  double pdf_min = 1.0, pdf_max = 0.0;
  for (int l = 0; l < 256; ++l) {
    pdf[l] = counts[l] / n;
    pdf_min = std::min(pdf_min, pdf[l]);
    pdf_max = std::max(pdf_max, pdf[l]);
  }

  std::array<double, 256> pdf_w{};
  if (pdf_max > pdf_min) {
    for (int l = 0; l < 256; ++l) {
      pdf_w[l] = pdf_max * std::pow((pdf[l] - pdf_min) / (pdf_max - pdf_min),
                                    alpha);
    }
  } else {
    // Exactly flat histogram: no spread to weight, keep the pdf as is.
    pdf_w = pdf;
  }

  double total = 0.0;
  for (double v : pdf_w) total += v;
  std::array<double, 256> lut{};
  double cum = 0.0;
  for (int l = 0; l < 256; ++l) {
    cum += pdf_w[l];
    const double cdf_w = cum / total;
    lut[l] = 255.0 * std::pow(l / 255.0, 1.0 - cdf_w);
  }
  lut[0] = 0.0;
  return lut;
}

MappingCurve build_mapping_curve(const PlaneF& i, const EnhanceParams& params,
                                 bool* used_fallback) {
  validate_params(params);
  if (used_fallback) *used_fallback = false;

  double threshold = 0.0;
  std::array<double, 256> agcwd{};
  try {
    threshold = compute_threshold(i, params.percentile);
    agcwd = build_agcwd_curve(i, params.alpha);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateHistogram) throw;
    if (used_fallback) *used_fallback = true;
    return MappingCurve::identity();
  }

  MappingCurve curve;
  curve.threshold = threshold;

  // Rescale the sub-threshold segment to meet the identity line at the
  // threshold; the cap keeps the nonlinear part from overshooting the splice.
  const int t_floor = std::clamp(static_cast<int>(std::floor(threshold)), 0, 255);
  double scale = 1.0;
  if (agcwd[t_floor] > 0.0) scale = threshold / agcwd[t_floor];

  for (int l = 0; l < 256; ++l) {
    if (static_cast<double>(l) < threshold) {
      curve.lut[l] = std::min(scale * agcwd[l], threshold);
    } else {
      curve.lut[l] = l;
    }
  }
  for (int l = 1; l < 256; ++l) {
    curve.lut[l] = std::max(curve.lut[l], curve.lut[l - 1]);
  }
  return curve;
}

PlaneF apply_lut(const PlaneF& i, const std::array<double, 256>& lut) {
  require_valid(i, "apply_lut");
  PlaneF out(i.width, i.height);
  for (size_t k = 0; k < i.size(); ++k) {
    double level = double(i.data[k]) * 255.0;
    if (level < 0.0) level = 0.0;
    if (level > 255.0) level = 255.0;
    const int lo = std::min(static_cast<int>(level), 254);
    const double frac = level - lo;
    const double mapped = lut[lo] + frac * (lut[lo + 1] - lut[lo]);
    double v = mapped / 255.0;
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    out.data[k] = static_cast<float>(v);
  }
  return out;
}

PlaneF apply_curve(const PlaneF& i, const MappingCurve& curve) {
  return apply_lut(i, curve.lut);
}

void write_curve_csv(const MappingCurve& curve, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) {
    throw_error(ErrorCode::kIoFailure, path + ": cannot open for write");
  }
  for (int l = 0; l < 256; ++l) {
    std::fprintf(f, "%d,%.10g\n", l, curve.lut[l]);
  }
  if (std::fclose(f) != 0) {
    throw_error(ErrorCode::kIoFailure, path + ": write failed");
  }
}

}  // namespace lowlight
