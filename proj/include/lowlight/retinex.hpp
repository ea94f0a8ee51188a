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

#ifndef LOWLIGHT_RETINEX_HPP_
#define LOWLIGHT_RETINEX_HPP_

#include <vector>

#include "lowlight/image.hpp"

namespace lowlight {

struct DecompParams {
  double lambda = 0.15;        // smoothness weight, > 0
  double eps_grad = 0.01;      // gradient-weight floor, > 0
  double eps_div = 1.0 / 255;  // division floor for reflectance, > 0
  int max_iters = 500;
  double tol = 1e-5;           // relative-residual stopping tolerance
};

struct Decomposition {
  PlaneF illumination;  // pointwise >= max(v, eps_div)
  PlaneF reflectance;   // in [0,1]; illumination * reflectance == v
};

/// Per-solve diagnostics. `energy` holds the smoothness objective at every
/// iterate (including the initial guess) when requested.
struct SolveStats {
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<double> energy;
};

// Minimizes  sum (I - V)^2 + lambda * sum_d w_d * (D_d I)^2  over I, where
// D_d are horizontal/vertical forward differences with replicate boundary and
// w_d = 1 / (|D_d V| + eps_grad). The normal equations are symmetric positive
// definite and solved by conjugate gradient started at I = V; the result is
// then clamped pointwise to I >= max(v, eps_div).
PlaneF estimate_illumination(const PlaneF& v, const DecompParams& params,
                             SolveStats* stats = nullptr);

/// R = v / max(i, eps_div), clamped to [0,1].
PlaneF compute_reflectance(const PlaneF& v, const PlaneF& i,
                           const DecompParams& params);

Decomposition decompose(const PlaneF& v, const DecompParams& params,
                        SolveStats* stats = nullptr);

/// Anisotropic total variation (sum of |forward differences|); diagnostic.
double total_variation(const PlaneF& p);

}  // namespace lowlight

#endif  // LOWLIGHT_RETINEX_HPP_
