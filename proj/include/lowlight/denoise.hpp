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

#ifndef LOWLIGHT_DENOISE_HPP_
#define LOWLIGHT_DENOISE_HPP_

#include <optional>

#include "lowlight/image.hpp"

namespace lowlight {

// Two-stage collaborative block denoiser: hard thresholding in a 3D
// transform domain (2D DCT within blocks, 1D Haar across a group of matched
// blocks) followed by empirical Wiener shrinkage guided by the first stage.
// Block aggregation is uniform within blocks and weighted per group.
struct Bm3dParams {
  int block_size = 8;          // >= 4
  int search_window = 39;      // odd, > block_size
  int max_matches = 16;        // power of two (Haar stacking depth)
  int step = 3;                // reference-block grid step
  // Mean-squared block distances in [0,1]^2 sample units; the numerators are
  // the customary 8-bit thresholds.
  double match_threshold_ht = 3000.0 / 65025.0;
  double match_threshold_wie = 400.0 / 65025.0;
  double lambda3d = 2.7;       // hard-threshold multiplier
  std::optional<double> sigma; // noise std-dev in [0,1] units; empty = estimate
};

// Robust blind noise estimate: median absolute response to the 3x3
// cross-difference kernel
//     [ 1 -2  1; -2  4 -2; 1 -2  1 ]
// over the interior, divided by 0.6745 times the kernel's L2 norm (6).
// The kernel annihilates bilinear ramps, so structure barely leaks in.
// Requires at least a 3x3 plane.
double estimate_sigma(const PlaneF& y);

// First stage. Groups similar blocks, hard-thresholds the 3D spectrum at
// lambda3d * sigma (the group DC is kept), and aggregates inverse-transformed
// blocks weighted by 1/(retained nonzero coefficients). sigma <= 0 returns
// the input unchanged. Requires params.sigma to be resolved.
PlaneF bm3d_hard(const PlaneF& y, const Bm3dParams& params);

// Second stage. Matching runs on y_basic; per-coefficient Wiener factors
// |C_basic|^2 / (|C_basic|^2 + sigma^2) shrink the noisy group's spectrum,
// with group weight 1/sum(w^2). sigma <= 0 returns y_basic.
PlaneF bm3d_wiener(const PlaneF& y_noisy, const PlaneF& y_basic,
                   const Bm3dParams& params);

/// Resolves sigma (estimating it when unset) and runs both stages.
PlaneF denoise_luma(const PlaneF& y, const Bm3dParams& params);

}  // namespace lowlight

#endif  // LOWLIGHT_DENOISE_HPP_
