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

#include "lowlight/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "lowlight/errors.hpp"

namespace lowlight {
namespace {

constexpr double kMadScale = 0.6745;
constexpr double kKernelNorm = 6.0;  // L2 norm of the 3x3 estimator kernel

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int pow2_floor(int n) {
  int p = 1;
  while (p * 2 <= n) p *= 2;
  return p;
}

void validate(const Bm3dParams& p) {
  if (p.block_size < 4) {
    throw_error(ErrorCode::kInvalidArgument, "block_size must be >= 4");
  }
  if (p.search_window <= p.block_size || p.search_window % 2 == 0) {
    throw_error(ErrorCode::kInvalidArgument,
                "search_window must be odd and exceed block_size");
  }
  if (!is_pow2(p.max_matches)) {
    throw_error(ErrorCode::kInvalidArgument,
                "max_matches must be a power of two");
  }
  if (p.step < 1) {
    throw_error(ErrorCode::kInvalidArgument, "step must be >= 1");
  }
  if (!(p.match_threshold_ht >= 0.0) || !(p.match_threshold_wie >= 0.0) ||
      !(p.lambda3d >= 0.0)) {
    throw_error(ErrorCode::kInvalidArgument,
                "match thresholds and lambda3d must be non-negative");
  }
}

// Orthonormal DCT-II basis; forward C = M X M^T, inverse X = M^T C M.
struct Dct {
  int n;
  std::vector<double> m;  // m[u*n + k]

  explicit Dct(int size) : n(size), m(static_cast<size_t>(size) * size) {
    const double c0 = std::sqrt(1.0 / n);
    const double c = std::sqrt(2.0 / n);
    for (int u = 0; u < n; ++u) {
      for (int k = 0; k < n; ++k) {
        m[static_cast<size_t>(u) * n + k] =
            (u == 0 ? c0 : c) *
            std::cos(M_PI * (2.0 * k + 1.0) * u / (2.0 * n));
      }
    }
  }

  void forward(const double* in, double* out, double* tmp) const {
    // tmp = M * in
    for (int u = 0; u < n; ++u) {
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int r = 0; r < n; ++r) {
          acc += m[static_cast<size_t>(u) * n + r] * in[r * n + k];
        }
        tmp[u * n + k] = acc;
      }
    }
    // out = tmp * M^T
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
          acc += tmp[u * n + k] * m[static_cast<size_t>(v) * n + k];
        }
        out[u * n + v] = acc;
      }
    }
  }

  void inverse(const double* in, double* out, double* tmp) const {
    // tmp = M^T * in
    for (int k = 0; k < n; ++k) {
      for (int v = 0; v < n; ++v) {
        double acc = 0.0;
        for (int u = 0; u < n; ++u) {
          acc += m[static_cast<size_t>(u) * n + k] * in[u * n + v];
        }
        tmp[k * n + v] = acc;
      }
    }
    // out = tmp * M
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        double acc = 0.0;
        for (int v = 0; v < n; ++v) {
          acc += tmp[k * n + v] * m[static_cast<size_t>(v) * n + l];
        }
        out[k * n + l] = acc;
      }
    }
  }
};

constexpr double kInvSqrt2 = 0.70710678118654752440;

// In-place orthonormal Haar over a power-of-two stride-1 column; index 0
// ends up holding the full-depth scaling coefficient.
void haar_forward(double* x, int n, double* tmp) {
  for (int len = n; len >= 2; len /= 2) {
    const int half = len / 2;
    for (int i = 0; i < half; ++i) {
      const double a = x[2 * i];
      const double b = x[2 * i + 1];
      tmp[i] = (a + b) * kInvSqrt2;
      tmp[half + i] = (a - b) * kInvSqrt2;
    }
    std::copy(tmp, tmp + len, x);
  }
}

void haar_inverse(double* x, int n, double* tmp) {
  for (int len = 2; len <= n; len *= 2) {
    const int half = len / 2;
    for (int i = 0; i < half; ++i) {
      const double s = x[i];
      const double d = x[half + i];
      tmp[2 * i] = (s + d) * kInvSqrt2;
      tmp[2 * i + 1] = (s - d) * kInvSqrt2;
    }
    std::copy(tmp, tmp + len, x);
  }
}

// Reference-block grid: step strides plus the last valid position, so the
// bottom/right borders are always covered.
std::vector<int> grid_positions(int dim, int block, int step) {
  std::vector<int> v;
  for (int p = 0; p + block <= dim; p += step) v.push_back(p);
  if (v.back() != dim - block) v.push_back(dim - block);
  return v;
}

double block_distance(const PlaneF& p, int ay, int ax, int by, int bx,
                      int block) {
  double acc = 0.0;
  for (int r = 0; r < block; ++r) {
    const float* pa = p.row(ay + r) + ax;
    const float* pb = p.row(by + r) + bx;
    for (int c = 0; c < block; ++c) {
      const double d = static_cast<double>(pa[c]) - static_cast<double>(pb[c]);
      acc += d * d;
    }
  }
  return acc / (static_cast<double>(block) * block);
}

struct Candidate {
  double dist;
  int cy;
  int cx;
};

// Matched positions, reference first; the rest ordered by distance, ties by
// scan order. Group size is the largest power of two that fits.
std::vector<std::pair<int, int>> match_group(const PlaneF& p, int ry, int rx,
                                             int block, int window,
                                             int max_matches, double thresh) {
  const int half = window / 2;
  const int y_lo = std::max(0, ry - half);
  const int y_hi = std::min(p.height - block, ry + half);
  const int x_lo = std::max(0, rx - half);
  const int x_hi = std::min(p.width - block, rx + half);

  std::vector<Candidate> cands;
  for (int cy = y_lo; cy <= y_hi; ++cy) {
    for (int cx = x_lo; cx <= x_hi; ++cx) {
      if (cy == ry && cx == rx) continue;
      const double d = block_distance(p, ry, rx, cy, cx, block);
      if (d <= thresh) cands.push_back({d, cy, cx});
    }
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.dist < b.dist;
                   });

  const int total = pow2_floor(
      std::min(static_cast<int>(cands.size()) + 1, max_matches));
  std::vector<std::pair<int, int>> pos;
  pos.reserve(static_cast<size_t>(total));
  pos.emplace_back(ry, rx);
  for (int i = 0; i + 1 < total; ++i) pos.emplace_back(cands[i].cy, cands[i].cx);
  return pos;
}

void extract_block(const PlaneF& p, int y, int x, int block, double* out) {
  for (int r = 0; r < block; ++r) {
    const float* src = p.row(y + r) + x;
    for (int c = 0; c < block; ++c) out[r * block + c] = src[c];
  }
}

struct GroupResult {
  std::vector<std::pair<int, int>> pos;
  std::vector<double> samples;  // pos.size() * block^2 filtered values
  double weight = 0.0;
};

void aggregate(const GroupResult& g, int block, PlaneF* num, PlaneF* den) {
  const int bb = block * block;
  for (size_t b = 0; b < g.pos.size(); ++b) {
    const auto [y, x] = g.pos[b];
    const double* s = g.samples.data() + b * bb;
    for (int r = 0; r < block; ++r) {
      float* nrow = num->row(y + r) + x;
      float* drow = den->row(y + r) + x;
      for (int c = 0; c < block; ++c) {
        nrow[c] += static_cast<float>(g.weight * s[r * block + c]);
        drow[c] += static_cast<float>(g.weight);
      }
    }
  }
}

PlaneF finalize(const PlaneF& num, const PlaneF& den) {
  PlaneF out(num.width, num.height);
  for (size_t i = 0; i < num.size(); ++i) {
    // Every pixel is covered by at least its own grid block.
    const double v = static_cast<double>(num.data[i]) / den.data[i];
    out.data[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
  }
  return out;
}

enum class Stage { kHard, kWiener };

// Shared driver. Rows of reference blocks are processed one at a time:
// groups within a row may be computed concurrently into disjoint slots, but
// aggregation into the accumulator planes is strictly sequential, so the
// output is independent of thread count.
PlaneF run_stage(const PlaneF& noisy, const PlaneF& guide, Stage stage,
                 double sigma, const Bm3dParams& p) {
  const int block = p.block_size;
  if (noisy.width < block || noisy.height < block) {
    throw_error(ErrorCode::kInvalidArgument,
                "plane smaller than the denoiser block size");
  }
  const double thresh =
      stage == Stage::kHard ? p.match_threshold_ht : p.match_threshold_wie;
  const Dct dct(block);
  const int bb = block * block;
  const std::vector<int> ys = grid_positions(noisy.height, block, p.step);
  const std::vector<int> xs = grid_positions(noisy.width, block, p.step);

  PlaneF num(noisy.width, noisy.height);
  PlaneF den(noisy.width, noisy.height);
  const double sigma2 = sigma * sigma;
  const double hard_gate = p.lambda3d * sigma;

  std::vector<GroupResult> row(xs.size());
  for (int ry : ys) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int xi = 0; xi < static_cast<int>(xs.size()); ++xi) {
      GroupResult& g = row[static_cast<size_t>(xi)];
      g.pos = match_group(guide, ry, xs[static_cast<size_t>(xi)], block,
                          p.search_window, p.max_matches, thresh);
      const int n = static_cast<int>(g.pos.size());
      g.samples.assign(static_cast<size_t>(n) * bb, 0.0);
      std::vector<double> tmp(static_cast<size_t>(bb));
      std::vector<double> blk(static_cast<size_t>(bb));
      std::vector<double> col(static_cast<size_t>(n));
      std::vector<double> coltmp(static_cast<size_t>(n));

      // 2D spectra of the noisy blocks, and of the guide blocks for the
      // Wiener stage.
      std::vector<double> spec(static_cast<size_t>(n) * bb);
      std::vector<double> gspec;
      for (int b = 0; b < n; ++b) {
        extract_block(noisy, g.pos[static_cast<size_t>(b)].first,
                      g.pos[static_cast<size_t>(b)].second, block, blk.data());
        dct.forward(blk.data(), spec.data() + static_cast<size_t>(b) * bb,
                    tmp.data());
      }
      if (stage == Stage::kWiener) {
        gspec.resize(static_cast<size_t>(n) * bb);
        for (int b = 0; b < n; ++b) {
          extract_block(guide, g.pos[static_cast<size_t>(b)].first,
                        g.pos[static_cast<size_t>(b)].second, block,
                        blk.data());
          dct.forward(blk.data(), gspec.data() + static_cast<size_t>(b) * bb,
                      tmp.data());
        }
      }

      // Per-coefficient Haar across the stack, shrink, inverse Haar.
      double weight_acc = 0.0;  // retained count (hard) or sum w^2 (Wiener)
      std::vector<double> gcol(static_cast<size_t>(n));
      for (int j = 0; j < bb; ++j) {
        for (int b = 0; b < n; ++b) {
          col[static_cast<size_t>(b)] = spec[static_cast<size_t>(b) * bb + j];
        }
        haar_forward(col.data(), n, coltmp.data());
        if (stage == Stage::kHard) {
          for (int b = 0; b < n; ++b) {
            const bool dc = (j == 0 && b == 0);
            double& c = col[static_cast<size_t>(b)];
            if (!dc && std::abs(c) < hard_gate) c = 0.0;
            if (c != 0.0) weight_acc += 1.0;
          }
        } else {
          for (int b = 0; b < n; ++b) {
            gcol[static_cast<size_t>(b)] =
                gspec[static_cast<size_t>(b) * bb + j];
          }
          haar_forward(gcol.data(), n, coltmp.data());
          for (int b = 0; b < n; ++b) {
            const bool dc = (j == 0 && b == 0);
            const double cb = gcol[static_cast<size_t>(b)];
            const double w = dc ? 1.0 : cb * cb / (cb * cb + sigma2);
            col[static_cast<size_t>(b)] *= w;
            weight_acc += w * w;
          }
        }
        haar_inverse(col.data(), n, coltmp.data());
        for (int b = 0; b < n; ++b) {
          spec[static_cast<size_t>(b) * bb + j] = col[static_cast<size_t>(b)];
        }
      }
      g.weight = stage == Stage::kHard ? 1.0 / std::max(weight_acc, 1.0)
                                       : 1.0 / std::max(weight_acc, 1e-12);

      for (int b = 0; b < n; ++b) {
        dct.inverse(spec.data() + static_cast<size_t>(b) * bb,
                    g.samples.data() + static_cast<size_t>(b) * bb, tmp.data());
      }
    }
    for (const GroupResult& g : row) aggregate(g, block, &num, &den);
  }
  return finalize(num, den);
}

}  // namespace

double estimate_sigma(const PlaneF& y) {
  require_valid(y, "plane");
  if (y.width < 3 || y.height < 3) {
    throw_error(ErrorCode::kInvalidArgument,
                "sigma estimation needs at least a 3x3 plane");
  }
  std::vector<double> resp;
  resp.reserve(static_cast<size_t>(y.width - 2) * (y.height - 2));
  for (int r = 1; r + 1 < y.height; ++r) {
    const float* up = y.row(r - 1);
    const float* mid = y.row(r);
    const float* dn = y.row(r + 1);
    for (int c = 1; c + 1 < y.width; ++c) {
      const double v = up[c - 1] - 2.0 * up[c] + up[c + 1] -
                       2.0 * mid[c - 1] + 4.0 * mid[c] - 2.0 * mid[c + 1] +
                       dn[c - 1] - 2.0 * dn[c] + dn[c + 1];
      resp.push_back(std::abs(v));
    }
  }
  const size_t n = resp.size();
  const size_t hi = n / 2;
  std::nth_element(resp.begin(), resp.begin() + hi, resp.end());
  double med = resp[hi];
  if (n % 2 == 0) {
    std::nth_element(resp.begin(), resp.begin() + (hi - 1), resp.begin() + hi);
    med = 0.5 * (med + resp[hi - 1]);
  }
  return med / (kMadScale * kKernelNorm);
}

PlaneF bm3d_hard(const PlaneF& y, const Bm3dParams& params) {
  require_valid(y, "plane");
  validate(params);
  if (!params.sigma.has_value()) {
    throw_error(ErrorCode::kInvalidArgument, "bm3d_hard requires sigma");
  }
  if (*params.sigma <= 0.0) return y;
  return run_stage(y, y, Stage::kHard, *params.sigma, params);
}

PlaneF bm3d_wiener(const PlaneF& y_noisy, const PlaneF& y_basic,
                   const Bm3dParams& params) {
  require_valid(y_noisy, "plane");
  require_valid(y_basic, "basic estimate");
  require_same_size(y_noisy, y_basic, "basic estimate");
  validate(params);
  if (!params.sigma.has_value()) {
    throw_error(ErrorCode::kInvalidArgument, "bm3d_wiener requires sigma");
  }
  if (*params.sigma <= 0.0) return y_basic;
  return run_stage(y_noisy, y_basic, Stage::kWiener, *params.sigma, params);
}

PlaneF denoise_luma(const PlaneF& y, const Bm3dParams& params) {
  Bm3dParams p = params;
  if (!p.sigma.has_value()) p.sigma = estimate_sigma(y);
  PlaneF basic = bm3d_hard(y, p);
  return bm3d_wiener(y, basic, p);
}

}  // namespace lowlight
