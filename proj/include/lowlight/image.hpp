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

#ifndef LOWLIGHT_IMAGE_HPP_
#define LOWLIGHT_IMAGE_HPP_

#include <cstddef>
#include <vector>

namespace lowlight {

/// Single-channel float plane, row-major, nominal sample range [0,1].
struct PlaneF {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  PlaneF() = default;
  PlaneF(int w, int h, float fill = 0.0f)
      : width(w), height(h),
        data(static_cast<size_t>(w) * static_cast<size_t>(h), fill) {}

  float at(int x, int y) const {
    return data[static_cast<size_t>(y) * width + x];
  }
  float& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }

  const float* row(int y) const {
    return data.data() + static_cast<size_t>(y) * width;
  }
  float* row(int y) { return data.data() + static_cast<size_t>(y) * width; }

  size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }
  bool same_size(const PlaneF& other) const {
    return width == other.width && height == other.height;
  }
};

/// Three planes of identical dimensions, samples in [0,1].
struct RgbImage {
  PlaneF r, g, b;

  int width() const { return r.width; }
  int height() const { return r.height; }
};

/// h in [0,1) (fraction of a turn, 0 where undefined), s and v in [0,1].
struct HsvImage {
  PlaneF h, s, v;

  int width() const { return v.width; }
  int height() const { return v.height; }
};

/// y in [0,1], u and v in [-0.5,0.5] (full-range BT.601 differences).
struct YuvImage {
  PlaneF y, u, v;

  int width() const { return y.width; }
  int height() const { return y.height; }
};

// Validation helpers. All throw Error(kInvalidArgument).
void require_valid(const PlaneF& p, const char* what);
void require_same_size(const PlaneF& a, const PlaneF& b, const char* what);
void require_valid(const RgbImage& img, const char* what);

/// Hexcone HSV. v = max(r,g,b) exactly; s = 0 when v = 0; h = 0 when s = 0.
HsvImage rgb_to_hsv(const RgbImage& img);

/// Exact inverse of rgb_to_hsv on its range.
RgbImage hsv_to_rgb(const HsvImage& img);

/// Full-range BT.601: Y = 0.299r + 0.587g + 0.114b, chroma scaled to [-0.5,0.5].
YuvImage rgb_to_yuv(const RgbImage& img);

/// Inverse of rgb_to_yuv; outputs clamped to [0,1].
RgbImage yuv_to_rgb(const YuvImage& img);

/// BT.601 luma of one pixel triple, same weights as rgb_to_yuv.
double bt601_luma(double r, double g, double b);

}  // namespace lowlight

#endif  // LOWLIGHT_IMAGE_HPP_
