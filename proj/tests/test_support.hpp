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

#ifndef LOWLIGHT_TESTS_TEST_SUPPORT_HPP_
#define LOWLIGHT_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "lowlight/image.hpp"

namespace lltest {

using lowlight::PlaneF;
using lowlight::RgbImage;

inline PlaneF uniform_plane(int w, int h, uint32_t seed, float lo = 0.0f,
                            float hi = 1.0f) {
  std::mt19937 gen(seed);
  PlaneF p(w, h);
  for (float& v : p.data) {
    const float u = static_cast<float>(gen()) / 4294967296.0f;
    v = lo + u * (hi - lo);
  }
  return p;
}

// Bottom-weighted histogram: most mass in the low levels, a few brighter
// pixels so the percentile threshold is well defined.
inline PlaneF dark_plane(int w, int h, uint32_t seed) {
  std::mt19937 gen(seed);
  PlaneF p(w, h);
  for (float& v : p.data) {
    const float u = static_cast<float>(gen()) / 4294967296.0f;
    v = 0.5f * u * u;
  }
  // sprinkle highlights
  for (int i = 0; i < std::max(1, w * h / 64); ++i) {
    const size_t idx = gen() % p.size();
    p.data[idx] = 0.6f + 0.4f * (static_cast<float>(gen()) / 4294967296.0f);
  }
  return p;
}

// Severely underexposed signal: the bulk of the pixels sit at the lowest
// levels, a modest mid tail carries the scene, and sparse highlights keep the
// threshold band populated. On histograms of this shape the spliced mapping
// curve lies at or above the identity line everywhere below the threshold.
inline PlaneF underexposed_plane(int w, int h, uint32_t seed) {
  std::mt19937 gen(seed);
  PlaneF p(w, h);
  for (float& v : p.data) {
    const double u = gen() / 4294967296.0;
    if (u < 0.72) {
      v = 1.0f / 255.0f;
    } else if (u < 0.99) {
      const double t = (u - 0.72) / 0.27;
      v = static_cast<float>((5.0 + 45.0 * t) / 255.0);
    } else {
      const double t = (u - 0.99) / 0.01;
      v = static_cast<float>((60.0 + 195.0 * t) / 255.0);
    }
  }
  return p;
}

inline RgbImage uniform_image(int w, int h, uint32_t seed) {
  RgbImage img;
  img.r = uniform_plane(w, h, seed);
  img.g = uniform_plane(w, h, seed + 1000003u);
  img.b = uniform_plane(w, h, seed + 2000003u);
  return img;
}

// Smooth sinusoids plus rectangles plus faint texture: enough structure for
// matching-based denoising and edge-aware smoothing to be meaningful.
inline PlaneF natural_plane(int w, int h, uint32_t variant) {
  std::mt19937 gen(variant * 7919u + 13u);
  const double px = 7.0 + static_cast<double>(gen() % 7);
  const double py = 9.0 + static_cast<double>(gen() % 7);
  PlaneF p(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = 0.45 + 0.25 * std::sin(x / px) * std::cos(y / py) +
                 0.12 * std::sin((x + 2.0 * y) / 13.0);
      p.at(x, y) = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
  }
  for (int k = 0; k < 3; ++k) {
    const int rw = 10 + static_cast<int>(gen() % 12);
    const int rh = 10 + static_cast<int>(gen() % 12);
    const int x0 = static_cast<int>(gen() % std::max(1, w - rw));
    const int y0 = static_cast<int>(gen() % std::max(1, h - rh));
    const float off = (k % 2 == 0) ? 0.22f : -0.20f;
    for (int y = y0; y < std::min(h, y0 + rh); ++y) {
      for (int x = x0; x < std::min(w, x0 + rw); ++x) {
        p.at(x, y) = std::clamp(p.at(x, y) + off, 0.0f, 1.0f);
      }
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double t = 0.01 * std::sin(x * 1.9) * std::cos(y * 2.1);
      p.at(x, y) = static_cast<float>(std::clamp(p.at(x, y) + t, 0.0, 1.0));
    }
  }
  return p;
}

// Moderately dark ground truth (mean luma near 0.3) for the synthetic
// degradation protocol.
inline RgbImage natural_image(int w, int h, uint32_t variant) {
  std::mt19937 gen(variant * 104729u + 7u);
  RgbImage img;
  img.r = PlaneF(w, h);
  img.g = PlaneF(w, h);
  img.b = PlaneF(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double base = 0.30 + 0.12 * std::sin(x / 11.0) * std::cos(y / 13.0) +
                          0.072 * std::sin((x + 2.0 * y) / 17.0);
      img.r.at(x, y) = static_cast<float>(std::clamp(base, 0.0, 1.0));
      img.g.at(x, y) = static_cast<float>(std::clamp(base * 0.95 + 0.02, 0.0, 1.0));
      img.b.at(x, y) = static_cast<float>(std::clamp(base * 1.05 - 0.02, 0.0, 1.0));
    }
  }
  for (int k = 0; k < 4; ++k) {
    const int rw = 12 + static_cast<int>(gen() % 12);
    const int rh = 12 + static_cast<int>(gen() % 12);
    const int x0 = static_cast<int>(gen() % std::max(1, w - rw));
    const int y0 = static_cast<int>(gen() % std::max(1, h - rh));
    const double s = (k % 2 == 0) ? 0.2 : -0.2;
    const double offr = s * (0.7 + 0.3 * (gen() % 100) / 100.0);
    const double offg = s * (0.7 + 0.3 * (gen() % 100) / 100.0);
    const double offb = s * (0.7 + 0.3 * (gen() % 100) / 100.0);
    for (int y = y0; y < std::min(h, y0 + rh); ++y) {
      for (int x = x0; x < std::min(w, x0 + rw); ++x) {
        img.r.at(x, y) = static_cast<float>(std::clamp(img.r.at(x, y) + offr, 0.0, 1.0));
        img.g.at(x, y) = static_cast<float>(std::clamp(img.g.at(x, y) + offg, 0.0, 1.0));
        img.b.at(x, y) = static_cast<float>(std::clamp(img.b.at(x, y) + offb, 0.0, 1.0));
      }
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double t = 0.015 * std::sin(x * 1.9) * std::cos(y * 2.1);
      img.r.at(x, y) = static_cast<float>(std::clamp(img.r.at(x, y) + t, 0.0, 1.0));
      img.g.at(x, y) = static_cast<float>(std::clamp(img.g.at(x, y) + t, 0.0, 1.0));
      img.b.at(x, y) = static_cast<float>(std::clamp(img.b.at(x, y) + t, 0.0, 1.0));
    }
  }
  return img;
}

// Predominantly bright scene with structure; most pixels sit above the
// adaptive threshold.
inline RgbImage bright_image(int w, int h, uint32_t variant) {
  std::mt19937 gen(variant * 31337u + 3u);
  RgbImage img;
  img.r = PlaneF(w, h);
  img.g = PlaneF(w, h);
  img.b = PlaneF(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double base = 0.76 + 0.10 * std::sin(x / 9.0) * std::cos(y / 8.0);
      img.r.at(x, y) = static_cast<float>(std::clamp(base + 0.03, 0.0, 1.0));
      img.g.at(x, y) = static_cast<float>(std::clamp(base, 0.0, 1.0));
      img.b.at(x, y) = static_cast<float>(std::clamp(base - 0.04, 0.0, 1.0));
    }
  }
  for (int k = 0; k < 3; ++k) {
    const int rw = 8 + static_cast<int>(gen() % 10);
    const int rh = 8 + static_cast<int>(gen() % 10);
    const int x0 = static_cast<int>(gen() % std::max(1, w - rw));
    const int y0 = static_cast<int>(gen() % std::max(1, h - rh));
    const double off = (k % 2 == 0) ? 0.1 : -0.12;
    for (int y = y0; y < std::min(h, y0 + rh); ++y) {
      for (int x = x0; x < std::min(w, x0 + rw); ++x) {
        img.r.at(x, y) = static_cast<float>(std::clamp(img.r.at(x, y) + off, 0.0, 1.0));
        img.g.at(x, y) = static_cast<float>(std::clamp(img.g.at(x, y) + off, 0.0, 1.0));
        img.b.at(x, y) = static_cast<float>(std::clamp(img.b.at(x, y) + off, 0.0, 1.0));
      }
    }
  }
  return img;
}

inline PlaneF step_plane(int w, int h, float left, float right) {
  PlaneF p(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) p.at(x, y) = (x < w / 2) ? left : right;
  }
  return p;
}

inline double max_abs_diff(const PlaneF& a, const PlaneF& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(static_cast<double>(a.data[i]) - b.data[i]));
  }
  return m;
}

inline double max_abs_diff(const RgbImage& a, const RgbImage& b) {
  return std::max({max_abs_diff(a.r, b.r), max_abs_diff(a.g, b.g),
                   max_abs_diff(a.b, b.b)});
}

inline double plane_mean(const PlaneF& p) {
  double s = 0.0;
  for (float v : p.data) s += v;
  return s / static_cast<double>(p.size());
}

inline bool bit_equal(const PlaneF& a, const PlaneF& b) {
  if (!a.same_size(b)) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a.data[i] != b.data[i]) return false;
  }
  return true;
}

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::string tmpl =
        (std::filesystem::temp_directory_path() / ("lowlight_" + tag + "_XXXXXX"))
            .string();
    char* raw = tmpl.data();
    if (mkdtemp(raw) == nullptr) std::abort();
    path_ = raw;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (std::filesystem::path(path_) / name).string();
  }

 private:
  std::string path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace lltest

#endif  // LOWLIGHT_TESTS_TEST_SUPPORT_HPP_
