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

#include "lowlight/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <utility>

#include "lowlight/errors.hpp"
#include "lowlight/image_io.hpp"
#include "lowlight/metrics.hpp"

namespace lowlight {

PlaneF recompose_v(const PlaneF& i_enh, const PlaneF& r) {
  require_valid(i_enh, "enhanced illumination");
  require_valid(r, "reflectance");
  require_same_size(i_enh, r, "recompose input");
  PlaneF out(i_enh.width, i_enh.height);
  for (size_t i = 0; i < out.size(); ++i) {
    const double v = static_cast<double>(i_enh.data[i]) * r.data[i];
    out.data[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
  }
  return out;
}

EnhanceResult enhance_image(const RgbImage& img, const PipelineParams& params) {
  require_valid(img, "image");

  EnhanceResult res;
  const HsvImage hsv = rgb_to_hsv(img);
  Decomposition dec = decompose(hsv.v, params.decomp);

  if (params.force_identity_curve) {
    res.curve = MappingCurve::identity();
  } else {
    res.curve =
        build_mapping_curve(dec.illumination, params.enhance, &res.curve_fallback);
  }
  res.threshold_used = res.curve.threshold;

  PlaneF i_enh = apply_curve(dec.illumination, res.curve);
  PlaneF v_enh = recompose_v(i_enh, dec.reflectance);

  HsvImage hsv_enh;
  hsv_enh.h = hsv.h;
  hsv_enh.s = hsv.s;
  hsv_enh.v = v_enh;
  const RgbImage rgb_enh = hsv_to_rgb(hsv_enh);

  YuvImage yuv = rgb_to_yuv(rgb_enh);
  if (params.denoise_enabled) {
    Bm3dParams bp = params.bm3d;
    if (!bp.sigma.has_value()) bp.sigma = estimate_sigma(yuv.y);
    res.sigma_used = *bp.sigma;
    PlaneF y_clean = denoise_luma(yuv.y, bp);
    yuv.y = std::move(y_clean);
  }
  res.output = yuv_to_rgb(yuv);

  res.illumination = std::move(dec.illumination);
  res.reflectance = std::move(dec.reflectance);
  res.illumination_enhanced = std::move(i_enh);
  res.v_enhanced = std::move(v_enh);
  return res;
}

RgbImage agcwd_only_baseline(const RgbImage& img, const EnhanceParams& params) {
  require_valid(img, "image");
  HsvImage hsv = rgb_to_hsv(img);
  std::array<double, 256> lut;
  try {
    lut = build_agcwd_curve(hsv.v, params.alpha);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateHistogram) throw;
    for (int l = 0; l < 256; ++l) lut[static_cast<size_t>(l)] = l;
  }
  hsv.v = apply_lut(hsv.v, lut);
  return hsv_to_rgb(hsv);
}

namespace {

PlaneF luma_plane(const RgbImage& img) {
  PlaneF y(img.r.width, img.r.height);
  for (size_t i = 0; i < y.size(); ++i) {
    y.data[i] = static_cast<float>(
        bt601_luma(img.r.data[i], img.g.data[i], img.b.data[i]));
  }
  return y;
}

}  // namespace

CompareReport compare_noise_amplification(const RgbImage& img,
                                          const RgbImage& reference,
                                          const PipelineParams& params,
                                          RgbImage* full_out,
                                          RgbImage* baseline_out) {
  require_valid(img, "image");
  require_valid(reference, "reference");
  require_same_size(img.r, reference.r, "reference");

  EnhanceResult full = enhance_image(img, params);
  RgbImage baseline = agcwd_only_baseline(img, params.enhance);

  const PlaneF ref_y = luma_plane(reference);
  CompareReport rep;
  rep.psnr_input = psnr(img, reference);
  rep.ssim_input = ssim(luma_plane(img), ref_y);
  rep.psnr_full = psnr(full.output, reference);
  rep.ssim_full = ssim(luma_plane(full.output), ref_y);
  rep.psnr_baseline = psnr(baseline, reference);
  rep.ssim_baseline = ssim(luma_plane(baseline), ref_y);
  rep.sigma_full = luma_stats(full.output).sigma_estimate;
  rep.sigma_baseline = luma_stats(baseline).sigma_estimate;

  if (full_out != nullptr) *full_out = std::move(full.output);
  if (baseline_out != nullptr) *baseline_out = std::move(baseline);
  return rep;
}

void write_intermediates(const EnhanceResult& result, const std::string& dir,
                         const std::string& stem) {
  const std::filesystem::path base = std::filesystem::path(dir) / stem;
  save_plane_png(result.illumination, base.string() + ".illum.png");
  save_plane_png(result.reflectance, base.string() + ".refl.png");
  save_plane_png(result.illumination_enhanced, base.string() + ".illum-enh.png");
  write_curve_csv(result.curve, base.string() + ".curve.csv");
}

}  // namespace lowlight
