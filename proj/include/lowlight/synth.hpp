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

#ifndef LOWLIGHT_SYNTH_HPP_
#define LOWLIGHT_SYNTH_HPP_

#include <cstdint>
#include <random>

#include "lowlight/image.hpp"

namespace lowlight {

// Deterministic standard-normal stream: Box-Muller over mt19937. Used
// instead of std::normal_distribution, whose output sequence is
// implementation-defined; the same seed must yield the same noise on every
// platform.
class GaussianRng {
 public:
  explicit GaussianRng(uint32_t seed) : gen_(seed) {}
  double next();

 private:
  double uniform01();  // in (0, 1)

  std::mt19937 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// out = clamp01(in + N(0, sigma^2)), one stream over the plane in row-major
// order. sigma = 0 copies the input.
PlaneF add_gaussian_noise(const PlaneF& in, double sigma, uint32_t seed);

// Channel planes consume one stream in r, g, b order.
RgbImage add_gaussian_noise(const RgbImage& in, double sigma, uint32_t seed);

// Synthetic low-light degradation: clamp01(scale * clean + N(0, sigma^2)).
RgbImage degrade(const RgbImage& clean, double scale, double sigma,
                 uint32_t seed);

}  // namespace lowlight

#endif  // LOWLIGHT_SYNTH_HPP_
