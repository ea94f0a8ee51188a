/* Copyright (c) the lowlight Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the lowlight enhancement library.
 *
 * All functions returning ll_status report LL_OK on success; on failure the
 * out-parameters are untouched and ll_last_error() returns a message for the
 * calling thread. Handles are created and destroyed by this library only.
 * No function keeps a reference to caller memory after returning.
 */

#ifndef LOWLIGHT_H_
#define LOWLIGHT_H_

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define LL_API __attribute__((visibility("default")))
#else
#define LL_API
#endif

typedef enum ll_status {
  LL_OK = 0,
  LL_ERR_INVALID_ARGUMENT = 1,
  LL_ERR_IO = 2,
  LL_ERR_UNSUPPORTED_FORMAT = 3,
  LL_ERR_CORRUPT_DATA = 4,
  LL_ERR_DEGENERATE_HISTOGRAM = 5,
  LL_ERR_INTERNAL = 6
} ll_status;

/* Opaque RGB image (float planes in [0,1]) and pipeline result. */
typedef struct ll_image ll_image;
typedef struct ll_result ll_result;

typedef struct ll_params {
  /* Mapping curve. */
  double percentile;   /* threshold percentile, in (0,100) */
  double alpha;        /* histogram weighting exponent, in [0,1] */
  /* Brightness decomposition. */
  double lambda;       /* smoothing strength, > 0 */
  double eps_grad;     /* gradient-weight stabilizer, > 0 */
  double eps_div;      /* reflectance division floor, > 0 */
  double cg_tol;       /* relative residual stop, > 0 */
  int cg_max_iters;    /* >= 1 */
  /* Denoiser. */
  double sigma;        /* noise std-dev in [0,1]; negative = estimate */
  int denoise;         /* nonzero = denoise the luma after enhancement */
  int block_size;
  int search_window;
  int max_matches;
  int step;
  double lambda3d;
  /* Identity-curve debug switch; leave 0. */
  int force_identity_curve;
} ll_params;

typedef struct ll_compare_report {
  double psnr_input;
  double ssim_input;
  double psnr_full;
  double ssim_full;
  double psnr_baseline;
  double ssim_baseline;
  double sigma_full;
  double sigma_baseline;
} ll_compare_report;

/* Library version, "major.minor.patch". */
LL_API const char* ll_version(void);

/* Message for the last failing call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread. */
LL_API const char* ll_last_error(void);

LL_API void ll_params_init(ll_params* params);

/* PNG (8/16-bit gray/palette/RGB, alpha dropped) or binary PPM. */
LL_API ll_status ll_image_load(const char* path, ll_image** out);

/* w*h*3 interleaved RGB floats; values outside [0,1] are rejected. */
LL_API ll_status ll_image_create(int width, int height,
                                 const float* interleaved_rgb, ll_image** out);

/* 8-bit RGB PNG. */
LL_API ll_status ll_image_save(const ll_image* img, const char* path);

LL_API void ll_image_free(ll_image* img);
LL_API int ll_image_width(const ll_image* img);
LL_API int ll_image_height(const ll_image* img);

/* Copies w*h*3 interleaved RGB floats into caller storage. */
LL_API ll_status ll_image_pixels(const ll_image* img, float* out_rgb);

/* Runs the enhancement pipeline. */
LL_API ll_status ll_enhance(const ll_image* input, const ll_params* params,
                            ll_result** out);

/* Copies the enhanced image out of a result. */
LL_API ll_status ll_result_image(const ll_result* result, ll_image** out);
LL_API double ll_result_threshold(const ll_result* result);
LL_API double ll_result_sigma(const ll_result* result); /* 0 if not denoised */
LL_API int ll_result_used_identity_curve(const ll_result* result);

/* Writes <stem>.illum.png, <stem>.refl.png, <stem>.illum-enh.png and
 * <stem>.curve.csv into dir. */
LL_API ll_status ll_result_write_intermediates(const ll_result* result,
                                               const char* dir,
                                               const char* stem);
LL_API void ll_result_free(ll_result* result);

/* Mean/stddev of BT.601 luma plus a blind noise estimate. Null stat
 * pointers are skipped. */
LL_API ll_status ll_luma_stats(const ll_image* img, double* mean,
                               double* stddev, double* sigma_estimate);

/* Peak signal-to-noise ratio in dB over all RGB samples; +infinity for
 * identical images. */
LL_API ll_status ll_psnr(const ll_image* a, const ll_image* b, double* out_db);

/* Mean structural similarity of the BT.601 luma planes (11x11 Gaussian
 * window); images must be at least 11x11. */
LL_API ll_status ll_ssim(const ll_image* a, const ll_image* b, double* out);

/* clamp01(scale * img + gaussian(sigma)), seeded and reproducible. */
LL_API ll_status ll_degrade(const ll_image* img, double scale, double sigma,
                            unsigned int seed, ll_image** out);

/* Scores the pipeline and the plain adaptive-gamma baseline on `input`
 * against `reference`. full_out/baseline_out receive the two outputs when
 * non-null. */
LL_API ll_status ll_compare(const ll_image* input, const ll_image* reference,
                            const ll_params* params, ll_compare_report* out,
                            ll_image** full_out, ll_image** baseline_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LOWLIGHT_H_ */
