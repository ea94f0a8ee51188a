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

#include "lowlight/image.hpp"

#include <cmath>
#include <string>

#include "lowlight/errors.hpp"

namespace lowlight {

namespace {

// Primaries shared by both YUV directions so the pair stays mutually inverse.
constexpr double kWr = 0.299;
constexpr double kWg = 0.587;
constexpr double kWb = 0.114;

inline float clamp01(double x) {
  if (x < 0.0) return 0.0f;
  if (x > 1.0) return 1.0f;
  return static_cast<float>(x);
}

}  // namespace

void require_valid(const PlaneF& p, const char* what) {
  if (p.width <= 0 || p.height <= 0) {
    throw_error(ErrorCode::kInvalidArgument,
                std::string(what) + ": empty plane");
  }
  if (p.data.size() != static_cast<size_t>(p.width) * p.height) {
    throw_error(ErrorCode::kInvalidArgument,
                std::string(what) + ": data length mismatch");
  }
  for (float s : p.data) {
    if (!std::isfinite(s)) {
      throw_error(ErrorCode::kInvalidArgument,
                  std::string(what) + ": non-finite sample");
    }
  }
}

void require_same_size(const PlaneF& a, const PlaneF& b, const char* what) {
  if (!a.same_size(b)) {
    throw_error(ErrorCode::kInvalidArgument,
                std::string(what) + ": dimension mismatch");
  }
}

void require_valid(const RgbImage& img, const char* what) {
  require_valid(img.r, what);
  require_same_size(img.r, img.g, what);
  require_same_size(img.r, img.b, what);
  require_valid(img.g, what);
  require_valid(img.b, what);
}

HsvImage rgb_to_hsv(const RgbImage& img) {
  require_valid(img, "rgb_to_hsv");
  const int w = img.width(), h = img.height();
  HsvImage out{PlaneF(w, h), PlaneF(w, h), PlaneF(w, h)};
  for (size_t i = 0; i < img.r.size(); ++i) {
    const double r = img.r.data[i];
    const double g = img.g.data[i];
    const double b = img.b.data[i];
    const double v = std::fmax(r, std::fmax(g, b));
    const double mn = std::fmin(r, std::fmin(g, b));
    const double delta = v - mn;
    double s = 0.0, hue = 0.0;
    if (v > 0.0) s = delta / v;
    if (delta > 0.0) {
      if (v == r) {
        hue = (g - b) / delta;
        if (hue < 0.0) hue += 6.0;
      } else if (v == g) {
        hue = (b - r) / delta + 2.0;
      } else {
        hue = (r - g) / delta + 4.0;
      }
      hue /= 6.0;
      if (hue >= 1.0) hue -= 1.0;
    }
    out.h.data[i] = static_cast<float>(hue);
    out.s.data[i] = static_cast<float>(s);
    // v is the exact per-pixel max, not recomputed through doubles.
    out.v.data[i] = std::fmax(img.r.data[i],
                              std::fmax(img.g.data[i], img.b.data[i]));
  }
  return out;
}

RgbImage hsv_to_rgb(const HsvImage& img) {
  require_valid(img.h, "hsv_to_rgb");
  require_same_size(img.h, img.s, "hsv_to_rgb");
  require_same_size(img.h, img.v, "hsv_to_rgb");
  const int w = img.width(), h = img.height();
  RgbImage out{PlaneF(w, h), PlaneF(w, h), PlaneF(w, h)};
  for (size_t i = 0; i < img.v.size(); ++i) {
    const double hue = img.h.data[i];
    const double s = img.s.data[i];
    const double v = img.v.data[i];
    double r = v, g = v, b = v;
    if (s > 0.0) {
      double h6 = hue * 6.0;
      if (h6 >= 6.0) h6 = 0.0;
      const int sector = static_cast<int>(h6);
      const double f = h6 - sector;
      const double p = v * (1.0 - s);
      const double q = v * (1.0 - s * f);
      const double t = v * (1.0 - s * (1.0 - f));
      switch (sector) {
        case 0: r = v; g = t; b = p; break;
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        default: r = v; g = p; b = q; break;
      }
    }
    out.r.data[i] = static_cast<float>(r);
    out.g.data[i] = static_cast<float>(g);
    out.b.data[i] = static_cast<float>(b);
  }
  return out;
}

double bt601_luma(double r, double g, double b) {
  return kWr * r + kWg * g + kWb * b;
}

YuvImage rgb_to_yuv(const RgbImage& img) {
  require_valid(img, "rgb_to_yuv");
  const int w = img.width(), h = img.height();
  YuvImage out{PlaneF(w, h), PlaneF(w, h), PlaneF(w, h)};
  for (size_t i = 0; i < img.r.size(); ++i) {
    const double r = img.r.data[i];
    const double g = img.g.data[i];
    const double b = img.b.data[i];
    const double y = kWr * r + kWg * g + kWb * b;
    out.y.data[i] = static_cast<float>(y);
    out.u.data[i] = static_cast<float>(0.5 * (b - y) / (1.0 - kWb));
    out.v.data[i] = static_cast<float>(0.5 * (r - y) / (1.0 - kWr));
  }
  return out;
}

RgbImage yuv_to_rgb(const YuvImage& img) {
  require_valid(img.y, "yuv_to_rgb");
  require_same_size(img.y, img.u, "yuv_to_rgb");
  require_same_size(img.y, img.v, "yuv_to_rgb");
  const int w = img.width(), h = img.height();
  RgbImage out{PlaneF(w, h), PlaneF(w, h), PlaneF(w, h)};
  for (size_t i = 0; i < img.y.size(); ++i) {
    const double y = img.y.data[i];
    const double u = img.u.data[i];
    const double v = img.v.data[i];
    const double r = y + 2.0 * (1.0 - kWr) * v;
    const double b = y + 2.0 * (1.0 - kWb) * u;
    const double g = (y - kWr * r - kWb * b) / kWg;
    out.r.data[i] = clamp01(r);
    out.g.data[i] = clamp01(g);
    out.b.data[i] = clamp01(b);
  }
  return out;
}

}  // namespace lowlight
