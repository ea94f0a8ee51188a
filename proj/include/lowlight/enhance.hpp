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

#ifndef LOWLIGHT_ENHANCE_HPP_
#define LOWLIGHT_ENHANCE_HPP_

#include <array>
#include <string>

#include "lowlight/image.hpp"

namespace lowlight {

/// Shadow-up transfer curve on the [0,255] level axis: an AGCWD-style
/// brightening segment below `threshold`, the identity above it.
struct MappingCurve {
  std::array<double, 256> lut{};  // non-decreasing; lut[l] == l above threshold
  double threshold = 0.0;         // in [0,255]

  static MappingCurve identity();
};

struct EnhanceParams {
  double percentile = 75.0;  // in (0,100)
  double alpha = 0.5;        // histogram weighting exponent, in [0,1]
  int histogram_bins = 256;  // fixed by the 8-bit level axis
};

// Threshold selection. With samples scaled to [0,255]:
//   P     = nearest-rank `percentile` of the plane,
//   Imax  = maximum sample,
//   H     = pixels strictly between P and Imax,
//   result = 255 - mean(H).
// Brighter planes therefore get smaller thresholds. Throws
// kDegenerateHistogram when H is empty (constant planes and the like).
double compute_threshold(const PlaneF& i, double percentile);

// Full-range adaptive-gamma LUT from the plane's 256-bin histogram:
//   pdf_w(l) = pdf_max * ((pdf(l) - pdf_min) / (pdf_max - pdf_min))^alpha
//   cdf_w    = normalized prefix sum of pdf_w
//   lut[l]   = 255 * (l/255)^(1 - cdf_w(l)),  lut[0] = 0 by convention.
// A perfectly flat histogram has no spread to weight, so pdf_w degrades to
// pdf there; a constant plane throws kDegenerateHistogram.
std::array<double, 256> build_agcwd_curve(const PlaneF& i, double alpha);

// Splices the adaptive-gamma segment below the threshold with the identity
// above it. The sub-threshold segment is rescaled affinely to meet the
// identity line at the threshold (and capped there), and a final
// cumulative-max pass makes the LUT unconditionally non-decreasing.
// Degenerate histograms fall back to the identity curve with threshold 0;
// `used_fallback` reports that when non-null.
MappingCurve build_mapping_curve(const PlaneF& i, const EnhanceParams& params,
                                 bool* used_fallback = nullptr);

/// Per pixel: linear interpolation of the LUT at I*255, scaled back to [0,1].
PlaneF apply_curve(const PlaneF& i, const MappingCurve& curve);

/// Same interpolation against a bare LUT (no threshold semantics).
PlaneF apply_lut(const PlaneF& i, const std::array<double, 256>& lut);

/// 256 lines of "index,value" for external plotting.
void write_curve_csv(const MappingCurve& curve, const std::string& path);

}  // namespace lowlight

#endif  // LOWLIGHT_ENHANCE_HPP_
