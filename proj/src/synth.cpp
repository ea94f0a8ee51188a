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

#include "lowlight/synth.hpp"

#include <algorithm>
#include <cmath>

#include "lowlight/errors.hpp"

namespace lowlight {

double GaussianRng::uniform01() {
  // (k + 0.5) / 2^32 keeps the value strictly inside (0, 1) so log() below
  // is always finite.
  return (static_cast<double>(gen_()) + 0.5) * (1.0 / 4294967296.0);
}

double GaussianRng::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * M_PI * u2;
  spare_ = mag * std::sin(ang);
  have_spare_ = true;
  return mag * std::cos(ang);
}

namespace {

void add_noise_inplace(PlaneF* p, double sigma, GaussianRng* rng) {
  for (float& v : p->data) {
    const double noisy = static_cast<double>(v) + sigma * rng->next();
    v = static_cast<float>(std::clamp(noisy, 0.0, 1.0));
  }
}

}  // namespace

PlaneF add_gaussian_noise(const PlaneF& in, double sigma, uint32_t seed) {
  require_valid(in, "plane");
  if (!(sigma >= 0.0)) {
    throw_error(ErrorCode::kInvalidArgument, "noise sigma must be >= 0");
  }
  PlaneF out = in;
  if (sigma == 0.0) return out;
  GaussianRng rng(seed);
  add_noise_inplace(&out, sigma, &rng);
  return out;
}

RgbImage add_gaussian_noise(const RgbImage& in, double sigma, uint32_t seed) {
  require_valid(in, "image");
  if (!(sigma >= 0.0)) {
    throw_error(ErrorCode::kInvalidArgument, "noise sigma must be >= 0");
  }
  RgbImage out = in;
  if (sigma == 0.0) return out;
  GaussianRng rng(seed);
  add_noise_inplace(&out.r, sigma, &rng);
  add_noise_inplace(&out.g, sigma, &rng);
  add_noise_inplace(&out.b, sigma, &rng);
  return out;
}

RgbImage degrade(const RgbImage& clean, double scale, double sigma,
                 uint32_t seed) {
  require_valid(clean, "image");
  if (!(scale > 0.0) || !(sigma >= 0.0)) {
    throw_error(ErrorCode::kInvalidArgument,
                "degrade needs scale > 0 and sigma >= 0");
  }
  RgbImage scaled = clean;
  for (PlaneF* p : {&scaled.r, &scaled.g, &scaled.b}) {
    for (float& v : p->data) {
      v = static_cast<float>(std::clamp(scale * static_cast<double>(v), 0.0, 1.0));
    }
  }
  return add_gaussian_noise(scaled, sigma, seed);
}

}  // namespace lowlight
