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

#include "lowlight/retinex.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

#include "lowlight/errors.hpp"

namespace lowlight {

namespace {

void validate_params(const DecompParams& p) {
  if (!(p.lambda > 0.0) || !(p.eps_grad > 0.0) || !(p.eps_div > 0.0) ||
      p.max_iters < 1 || !(p.tol > 0.0)) {
    throw_error(ErrorCode::kInvalidArgument, "decompose: bad parameters");
  }
}

// Edge weights from the data plane. wh has no entries for the last column,
// wv none for the last row (replicate boundary: the forward difference there
// is identically zero, so the edge drops out of the system).
struct EdgeWeights {
  int width = 0, height = 0;
  std::vector<double> wh;  // (width-1) * height
  std::vector<double> wv;  // width * (height-1)
};

EdgeWeights make_weights(const PlaneF& v, double lambda, double eps_grad) {
  EdgeWeights e;
  e.width = v.width;
  e.height = v.height;
  e.wh.resize(static_cast<size_t>(v.width - 1) * v.height);
  e.wv.resize(static_cast<size_t>(v.width) * (v.height - 1));
  size_t k = 0;
  for (int y = 0; y < v.height; ++y) {
    const float* row = v.row(y);
    for (int x = 0; x + 1 < v.width; ++x) {
      e.wh[k++] = lambda / (std::fabs(double(row[x + 1]) - row[x]) + eps_grad);
    }
  }
  k = 0;
  for (int y = 0; y + 1 < v.height; ++y) {
    const float* row = v.row(y);
    const float* next = v.row(y + 1);
    for (int x = 0; x < v.width; ++x) {
      e.wv[k++] = lambda / (std::fabs(double(next[x]) - row[x]) + eps_grad);
    }
  }
  return e;
}

// y = (Id + L_w) x with L_w the weighted graph Laplacian (lambda is folded
// into the weights).
void apply_system(const EdgeWeights& e, const std::vector<double>& x,
                  std::vector<double>* y) {
  const int w = e.width, h = e.height;
  std::vector<double>& out = *y;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int r = 0; r < h; ++r) {
    const size_t base = static_cast<size_t>(r) * w;
    for (int c = 0; c < w; ++c) {
      const size_t i = base + c;
      double acc = x[i];
      if (c + 1 < w) {
        const double wt = e.wh[static_cast<size_t>(r) * (w - 1) + c];
        acc += wt * (x[i] - x[i + 1]);
      }
      if (c > 0) {
        const double wt = e.wh[static_cast<size_t>(r) * (w - 1) + c - 1];
        acc += wt * (x[i] - x[i - 1]);
      }
      if (r + 1 < h) {
        const double wt = e.wv[i];
        acc += wt * (x[i] - x[i + w]);
      }
      if (r > 0) {
        const double wt = e.wv[i - w];
        acc += wt * (x[i] - x[i - w]);
      }
      out[i] = acc;
    }
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;  // sequential reduction keeps results thread-count invariant
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// E(x) = x'Ax - 2b'x + b'b, evaluated from the tracked residual r = b - Ax:
// x'Ax - 2b'x = -x'r - b'x.
double objective(const std::vector<double>& x, const std::vector<double>& r,
                 const std::vector<double>& b, double btb) {
  double xr = 0.0, bx = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    xr += x[i] * r[i];
    bx += b[i] * x[i];
  }
  return btb - xr - bx;
}

}  // namespace

double total_variation(const PlaneF& p) {
  double tv = 0.0;
  for (int y = 0; y < p.height; ++y) {
    const float* row = p.row(y);
    for (int x = 0; x + 1 < p.width; ++x) {
      tv += std::fabs(double(row[x + 1]) - row[x]);
    }
  }
  for (int y = 0; y + 1 < p.height; ++y) {
    const float* row = p.row(y);
    const float* next = p.row(y + 1);
    for (int x = 0; x < p.width; ++x) {
      tv += std::fabs(double(next[x]) - row[x]);
    }
  }
  return tv;
}

PlaneF estimate_illumination(const PlaneF& v, const DecompParams& params,
                             SolveStats* stats) {
  validate_params(params);
  require_valid(v, "estimate_illumination");

  const size_t n = v.size();
  const EdgeWeights weights = make_weights(v, params.lambda, params.eps_grad);

  std::vector<double> b(n);
  for (size_t i = 0; i < n; ++i) b[i] = v.data[i];

  std::vector<double> x = b;  // I = V is the natural starting point
  std::vector<double> ax(n), r(n), d(n), ad(n);

  apply_system(weights, x, &ax);
  for (size_t i = 0; i < n; ++i) r[i] = b[i] - ax[i];
  d = r;

  const double btb = dot(b, b);
  const double bnorm = std::sqrt(btb);
  const double stop = params.tol * (bnorm > 0.0 ? bnorm : 1.0);

  double rr = dot(r, r);
  if (stats) {
    stats->energy.clear();
    stats->energy.push_back(objective(x, r, b, btb));
  }

  int iter = 0;
  while (iter < params.max_iters && std::sqrt(rr) > stop) {
    apply_system(weights, d, &ad);
    const double dad = dot(d, ad);
    if (dad <= 0.0) break;  // numerically exhausted
    const double alpha = rr / dad;
    for (size_t i = 0; i < n; ++i) {
      x[i] += alpha * d[i];
      r[i] -= alpha * ad[i];
    }
    const double rr_next = dot(r, r);
    const double beta = rr_next / rr;
    for (size_t i = 0; i < n; ++i) d[i] = r[i] + beta * d[i];
    rr = rr_next;
    ++iter;
    if (stats) stats->energy.push_back(objective(x, r, b, btb));
  }

  if (stats) {
    stats->iterations = iter;
    stats->final_residual = bnorm > 0.0 ? std::sqrt(rr) / bnorm : 0.0;
  }

  PlaneF illum(v.width, v.height);
  for (size_t i = 0; i < n; ++i) {
    const double floor_i = std::fmax(double(v.data[i]), params.eps_div);
    illum.data[i] = static_cast<float>(std::fmax(x[i], floor_i));
  }
  return illum;
}

PlaneF compute_reflectance(const PlaneF& v, const PlaneF& i,
                           const DecompParams& params) {
  validate_params(params);
  require_valid(v, "compute_reflectance");
  require_valid(i, "compute_reflectance");
  require_same_size(v, i, "compute_reflectance");

  PlaneF refl(v.width, v.height);
  for (size_t k = 0; k < v.size(); ++k) {
    const double denom = std::fmax(double(i.data[k]), params.eps_div);
    double ratio = double(v.data[k]) / denom;
    if (ratio < 0.0) ratio = 0.0;
    if (ratio > 1.0) ratio = 1.0;
    refl.data[k] = static_cast<float>(ratio);
  }
  return refl;
}

Decomposition decompose(const PlaneF& v, const DecompParams& params,
                        SolveStats* stats) {
  Decomposition d;
  d.illumination = estimate_illumination(v, params, stats);
  d.reflectance = compute_reflectance(v, d.illumination, params);
  return d;
}

}  // namespace lowlight
