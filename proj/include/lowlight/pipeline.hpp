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

#ifndef LOWLIGHT_PIPELINE_HPP_
#define LOWLIGHT_PIPELINE_HPP_

#include <string>

#include "lowlight/denoise.hpp"
#include "lowlight/enhance.hpp"
#include "lowlight/image.hpp"
#include "lowlight/retinex.hpp"

namespace lowlight {

struct PipelineParams {
  DecompParams decomp;
  EnhanceParams enhance;
  Bm3dParams bm3d;
  bool denoise_enabled = true;
  // Diagnostic: skip curve estimation and use the identity mapping, turning
  // the enhancement half of the pipeline into a round-trip.
  bool force_identity_curve = false;
};

struct EnhanceResult {
  RgbImage output;
  PlaneF illumination;           // I, from the brightness decomposition
  PlaneF reflectance;            // R = V / I
  PlaneF illumination_enhanced;  // I' = curve(I)
  PlaneF v_enhanced;             // V' = I' * R
  MappingCurve curve;
  double sigma_used = 0.0;       // resolved noise level; 0 when not denoising
  double threshold_used = 0.0;
  bool curve_fallback = false;   // degenerate histogram, identity curve used
};

/// V' = clamp01(I' * R), pointwise.
PlaneF recompose_v(const PlaneF& i_enh, const PlaneF& r);

// Full chain: RGB -> HSV; decompose V into I and R; map I through the
// adaptive curve; V' = I'*R; HSV -> RGB with the original hue/saturation;
// RGB -> YUV; optionally denoise Y; back to RGB. A degenerate brightness
// histogram demotes the curve to identity instead of failing (recorded in
// curve_fallback). With denoising enabled the image must be at least
// block_size on each side.
EnhanceResult enhance_image(const RgbImage& img, const PipelineParams& params);

// Plain adaptive-gamma baseline: the weighted-histogram curve of V applied
// directly to V. No decomposition, no identity splice, no denoising. Used to
// quantify how much the full pipeline avoids amplifying noise.
RgbImage agcwd_only_baseline(const RgbImage& img, const EnhanceParams& params);

struct CompareReport {
  double psnr_input = 0.0;
  double ssim_input = 0.0;
  double psnr_full = 0.0;
  double ssim_full = 0.0;
  double psnr_baseline = 0.0;
  double ssim_baseline = 0.0;
  double sigma_full = 0.0;      // blind noise estimate of each output's luma
  double sigma_baseline = 0.0;
};

// Runs the full pipeline and the baseline on `img` and scores both against
// `reference` (PSNR over RGB samples, SSIM over BT.601 luma). The outputs
// are handed back when the pointers are non-null.
CompareReport compare_noise_amplification(const RgbImage& img,
                                          const RgbImage& reference,
                                          const PipelineParams& params,
                                          RgbImage* full_out = nullptr,
                                          RgbImage* baseline_out = nullptr);

// Writes <stem>.illum.png, <stem>.refl.png, <stem>.illum-enh.png and
// <stem>.curve.csv into `dir`.
void write_intermediates(const EnhanceResult& result, const std::string& dir,
                         const std::string& stem);

}  // namespace lowlight

#endif  // LOWLIGHT_PIPELINE_HPP_
