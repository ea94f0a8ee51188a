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

#include "lowlight.h"

#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <utility>

#include "lowlight/denoise.hpp"
#include "lowlight/enhance.hpp"
#include "lowlight/errors.hpp"
#include "lowlight/image.hpp"
#include "lowlight/image_io.hpp"
#include "lowlight/metrics.hpp"
#include "lowlight/pipeline.hpp"
#include "lowlight/synth.hpp"

struct ll_image {
  lowlight::RgbImage img;
};

struct ll_result {
  lowlight::EnhanceResult res;
};

namespace {

thread_local std::string g_last_error;

ll_status map_code(lowlight::ErrorCode code) {
  using lowlight::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return LL_ERR_INVALID_ARGUMENT;
    case ErrorCode::kIoFailure:
      return LL_ERR_IO;
    case ErrorCode::kUnsupportedFormat:
      return LL_ERR_UNSUPPORTED_FORMAT;
    case ErrorCode::kCorruptData:
      return LL_ERR_CORRUPT_DATA;
    case ErrorCode::kDegenerateHistogram:
      return LL_ERR_DEGENERATE_HISTOGRAM;
  }
  return LL_ERR_INTERNAL;
}

ll_status fail(ll_status status, const char* message) {
  g_last_error = message;
  return status;
}

// No exception may cross the C boundary.
template <typename F>
ll_status wrap(F&& body) noexcept {
  try {
    body();
    g_last_error.clear();
    return LL_OK;
  } catch (const lowlight::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LL_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return LL_ERR_INTERNAL;
  }
}

lowlight::PipelineParams to_pipeline_params(const ll_params& p) {
  lowlight::PipelineParams out;
  out.enhance.percentile = p.percentile;
  out.enhance.alpha = p.alpha;
  out.decomp.lambda = p.lambda;
  out.decomp.eps_grad = p.eps_grad;
  out.decomp.eps_div = p.eps_div;
  out.decomp.tol = p.cg_tol;
  out.decomp.max_iters = p.cg_max_iters;
  if (p.sigma >= 0.0) out.bm3d.sigma = p.sigma;
  out.denoise_enabled = p.denoise != 0;
  out.bm3d.block_size = p.block_size;
  out.bm3d.search_window = p.search_window;
  out.bm3d.max_matches = p.max_matches;
  out.bm3d.step = p.step;
  out.bm3d.lambda3d = p.lambda3d;
  out.force_identity_curve = p.force_identity_curve != 0;
  return out;
}

}  // namespace

extern "C" {

const char* ll_version(void) { return "0.1.0"; }

const char* ll_last_error(void) { return g_last_error.c_str(); }

void ll_params_init(ll_params* params) {
  if (params == nullptr) return;
  const lowlight::PipelineParams d;
  params->percentile = d.enhance.percentile;
  params->alpha = d.enhance.alpha;
  params->lambda = d.decomp.lambda;
  params->eps_grad = d.decomp.eps_grad;
  params->eps_div = d.decomp.eps_div;
  params->cg_tol = d.decomp.tol;
  params->cg_max_iters = d.decomp.max_iters;
  params->sigma = -1.0;  // estimate from the image
  params->denoise = 1;
  params->block_size = d.bm3d.block_size;
  params->search_window = d.bm3d.search_window;
  params->max_matches = d.bm3d.max_matches;
  params->step = d.bm3d.step;
  params->lambda3d = d.bm3d.lambda3d;
  params->force_identity_curve = 0;
}

ll_status ll_image_load(const char* path, ll_image** out) {
  if (path == nullptr || out == nullptr) {
    return fail(LL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return wrap([&] {
    auto img = std::make_unique<ll_image>();
    img->img = lowlight::load_image(path);
    *out = img.release();
  });
}

ll_status ll_image_create(int width, int height, const float* interleaved_rgb,
                          ll_image** out) {
  if (interleaved_rgb == nullptr || out == nullptr) {
    return fail(LL_ERR_INVALID_ARGUMENT, "null argument");
  }
  if (width <= 0 || height <= 0) {
    return fail(LL_ERR_INVALID_ARGUMENT, "dimensions must be positive");
  }
  return wrap([&] {
    auto img = std::make_unique<ll_image>();
    img->img.r = lowlight::PlaneF(width, height);
    img->img.g = lowlight::PlaneF(width, height);
    img->img.b = lowlight::PlaneF(width, height);
    const size_t n = img->img.r.size();
    for (size_t i = 0; i < n; ++i) {
      img->img.r.data[i] = interleaved_rgb[3 * i + 0];
      img->img.g.data[i] = interleaved_rgb[3 * i + 1];
      img->img.b.data[i] = interleaved_rgb[3 * i + 2];
    }
    lowlight::require_valid(img->img, "image");
    for (const lowlight::PlaneF* p : {&img->img.r, &img->img.g, &img->img.b}) {
      for (float v : p->data) {
        if (v < 0.0f || v > 1.0f) {
          lowlight::throw_error(lowlight::ErrorCode::kInvalidArgument,
                                "samples must lie in [0,1]");
        }
      }
    }
    *out = img.release();
  });
}

ll_status ll_image_save(const ll_image* img, const char* path) {
  if (img == nullptr || path == nullptr) {
    return fail(LL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return wrap([&] { lowlight::save_image(img->img, path); });
}

void ll_image_free(ll_image* img) { delete img; }

int ll_image_width(const ll_image* img) {
  return img == nullptr ? 0 : img->img.r.width;
}

int ll_image_height(const ll_image* img) {
  return img == nullptr ? 0 : img->img.r.height;
}

ll_status ll_image_pixels(const ll_image* img, float* out_rgb) {
  if (img == nullptr || out_rgb == nullptr) {
    return fail(LL_ERR_INVALID_ARGUMENT, "null argument");
  }
  const size_t n = img->img.r.size();
  for (size_t i = 0; i < n; ++i) {
    out_rgb[3 * i + 0] = img->img.r.data[i];
    out_rgb[3 * i + 1] = img->img.g.data[i];
    out_rgb[3 * i + 2] = img->img.b.data[i];
  }
  g_last_error.clear();
  return LL_OK;
}

ll_status ll_enhance(const ll_image* input, const ll_params* params,
                     ll_result** out) {
  if (input == nullptr || params == nullptr || out == nullptr) {
    return fail(LL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return wrap([&] {
    auto res = std::make_unique<ll_result>();
    res->res = lowlight::enhance_image(input->img, to_pipeline_params(*params));
    *out = res.release();
  });
}

ll_status ll_result_image(const ll_result* result, ll_image** out) {
  if (result == nullptr || out == nullptr) {
    return fail(LL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return wrap([&] {
    auto img = std::make_unique<ll_image>();
    img->img = result->res.output;
    *out = img.release();
  });
}

double ll_result_threshold(const ll_result* result) {
  return result == nullptr ? 0.0 : result->res.threshold_used;
}

double ll_result_sigma(const ll_result* result) {
  return result == nullptr ? 0.0 : result->res.sigma_used;
}

int ll_result_used_identity_curve(const ll_result* result) {
  return result != nullptr && result->res.curve_fallback ? 1 : 0;
}

ll_status ll_result_write_intermediates(const ll_result* result,
                                        const char* dir, const char* stem) {
  if (result == nullptr || dir == nullptr || stem == nullptr) {
    return fail(LL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return wrap([&] { lowlight::write_intermediates(result->res, dir, stem); });
}

void ll_result_free(ll_result* result) { delete result; }

ll_status ll_luma_stats(const ll_image* img, double* mean, double* stddev,
                        double* sigma_estimate) {
  if (img == nullptr) return fail(LL_ERR_INVALID_ARGUMENT, "null argument");
  return wrap([&] {
    const lowlight::LumaStats s = lowlight::luma_stats(img->img);
    if (mean != nullptr) *mean = s.mean;
    if (stddev != nullptr) *stddev = s.stddev;
    if (sigma_estimate != nullptr) *sigma_estimate = s.sigma_estimate;
  });
}

ll_status ll_psnr(const ll_image* a, const ll_image* b, double* out_db) {
  if (a == nullptr || b == nullptr || out_db == nullptr) {
    return fail(LL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return wrap([&] { *out_db = lowlight::psnr(a->img, b->img); });
}

ll_status ll_ssim(const ll_image* a, const ll_image* b, double* out) {
  if (a == nullptr || b == nullptr || out == nullptr) {
    return fail(LL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return wrap([&] {
    lowlight::PlaneF ya(a->img.r.width, a->img.r.height);
    lowlight::PlaneF yb(b->img.r.width, b->img.r.height);
    for (size_t i = 0; i < ya.size(); ++i) {
      ya.data[i] = static_cast<float>(lowlight::bt601_luma(
          a->img.r.data[i], a->img.g.data[i], a->img.b.data[i]));
    }
    for (size_t i = 0; i < yb.size(); ++i) {
      yb.data[i] = static_cast<float>(lowlight::bt601_luma(
          b->img.r.data[i], b->img.g.data[i], b->img.b.data[i]));
    }
    *out = lowlight::ssim(ya, yb);
  });
}

ll_status ll_degrade(const ll_image* img, double scale, double sigma,
                     unsigned int seed, ll_image** out) {
  if (img == nullptr || out == nullptr) {
    return fail(LL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return wrap([&] {
    auto res = std::make_unique<ll_image>();
    res->img = lowlight::degrade(img->img, scale, sigma, seed);
    *out = res.release();
  });
}

ll_status ll_compare(const ll_image* input, const ll_image* reference,
                     const ll_params* params, ll_compare_report* out,
                     ll_image** full_out, ll_image** baseline_out) {
  if (input == nullptr || reference == nullptr || params == nullptr ||
      out == nullptr) {
    return fail(LL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return wrap([&] {
    lowlight::RgbImage full, baseline;
    const lowlight::CompareReport rep = lowlight::compare_noise_amplification(
        input->img, reference->img, to_pipeline_params(*params), &full,
        &baseline);
    out->psnr_input = rep.psnr_input;
    out->ssim_input = rep.ssim_input;
    out->psnr_full = rep.psnr_full;
    out->ssim_full = rep.ssim_full;
    out->psnr_baseline = rep.psnr_baseline;
    out->ssim_baseline = rep.ssim_baseline;
    out->sigma_full = rep.sigma_full;
    out->sigma_baseline = rep.sigma_baseline;
    if (full_out != nullptr) {
      auto h = std::make_unique<ll_image>();
      h->img = std::move(full);
      *full_out = h.release();
    }
    if (baseline_out != nullptr) {
      auto h = std::make_unique<ll_image>();
      h->img = std::move(baseline);
      *baseline_out = h.release();
    }
  });
}

}  // extern "C"
