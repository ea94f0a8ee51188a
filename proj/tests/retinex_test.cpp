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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "lowlight/errors.hpp"
#include "lowlight/retinex.hpp"
#include "test_support.hpp"

using namespace lowlight;
using namespace lltest;

namespace {

// Independent reference: assemble the normal equations densely and solve by
// Gaussian elimination with partial pivoting, then apply the same pointwise
// floor as the production path.
std::vector<double> dense_reference(const PlaneF& v, const DecompParams& p) {
  const int w = v.width, h = v.height;
  const int n = w * h;
  std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
  std::vector<double> b(n);
  auto A = [&](int i, int j) -> double& {
    return a[static_cast<size_t>(i) * n + j];
  };
  for (int i = 0; i < n; ++i) {
    A(i, i) = 1.0;
    b[i] = v.data[i];
  }
  auto couple = [&](int i, int j, double diff) {
    const double wt = p.lambda / (std::fabs(diff) + p.eps_grad);
    A(i, i) += wt;
    A(j, j) += wt;
    A(i, j) -= wt;
    A(j, i) -= wt;
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x + 1 < w; ++x) {
      const int i = y * w + x;
      couple(i, i + 1, double(v.data[i + 1]) - v.data[i]);
    }
  }
  for (int y = 0; y + 1 < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int i = y * w + x;
      couple(i, i + w, double(v.data[i + w]) - v.data[i]);
    }
  }
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs(A(r, col)) > std::fabs(A(pivot, col))) pivot = r;
    }
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(A(col, c), A(pivot, c));
      std::swap(b[col], b[pivot]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = A(r, col) / A(col, col);
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) A(r, c) -= f * A(col, c);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= A(r, c) * x[c];
    x[r] = acc / A(r, r);
  }
  for (int i = 0; i < n; ++i) {
    x[i] = std::fmax(x[i], std::fmax(double(v.data[i]), p.eps_div));
  }
  return x;
}

PlaneF step8x8() {
  PlaneF v(8, 8, 0.1f);
  for (int y = 0; y < 8; ++y) {
    for (int x = 4; x < 8; ++x) v.at(x, y) = 0.9f;
  }
  return v;
}

}  // namespace

TEST_CASE("constant plane is a fixed point") {
  const PlaneF v(6, 4, 0.4f);
  SolveStats stats;
  const PlaneF i = estimate_illumination(v, DecompParams{}, &stats);
  for (float s : i.data) CHECK(s == 0.4f);
  CHECK(stats.iterations == 0);
  CHECK(stats.final_residual == 0.0);
  REQUIRE(stats.energy.size() == 1);
  CHECK(stats.energy[0] == doctest::Approx(0.0));
}

TEST_CASE("single pixel passes through") {
  PlaneF v(1, 1, 0.3f);
  const Decomposition d = decompose(v, DecompParams{});
  CHECK(d.illumination.data[0] == 0.3f);
  CHECK(d.reflectance.data[0] == 1.0f);
}

TEST_CASE("solver matches a dense direct solve") {
  DecompParams p;
  p.tol = 1e-8;
  SUBCASE("8x8 step") {
    const PlaneF v = step8x8();
    const std::vector<double> ref = dense_reference(v, p);
    const PlaneF i = estimate_illumination(v, p);
    for (size_t k = 0; k < i.size(); ++k) {
      CHECK(std::fabs(i.data[k] - ref[k]) <= 1e-5);
    }
  }
  SUBCASE("random 6x5, stronger smoothing") {
    p.lambda = 0.4;
    const PlaneF v = uniform_plane(6, 5, 301);
    const std::vector<double> ref = dense_reference(v, p);
    const PlaneF i = estimate_illumination(v, p);
    for (size_t k = 0; k < i.size(); ++k) {
      CHECK(std::fabs(i.data[k] - ref[k]) <= 1e-5);
    }
  }
}

TEST_CASE("illumination dominates input and respects the division floor") {
  const PlaneF v = dark_plane(24, 16, 7);
  const DecompParams p;
  const PlaneF i = estimate_illumination(v, p);
  for (size_t k = 0; k < v.size(); ++k) {
    CHECK(i.data[k] >= v.data[k]);
    CHECK(i.data[k] >= static_cast<float>(p.eps_div));
  }
}

TEST_CASE("reflectance stays in range and reconstructs the input") {
  PlaneF v = dark_plane(24, 16, 8);
  v.data[0] = 0.0f;  // exercise the zero-signal pixel
  const Decomposition d = decompose(v, DecompParams{});
  for (size_t k = 0; k < v.size(); ++k) {
    CHECK(d.reflectance.data[k] >= 0.0f);
    CHECK(d.reflectance.data[k] <= 1.0f);
    const double recon =
        double(d.illumination.data[k]) * d.reflectance.data[k];
    CHECK(std::fabs(recon - v.data[k]) <= 1e-6);
  }
}

TEST_CASE("smoothing lowers total variation and scales with lambda") {
  const PlaneF v = natural_plane(32, 32, 5);
  const double tv_in = total_variation(v);
  DecompParams weak;
  weak.lambda = 0.05;
  DecompParams strong;
  strong.lambda = 1.0;
  const double tv_weak = total_variation(estimate_illumination(v, weak));
  const double tv_strong = total_variation(estimate_illumination(v, strong));
  CHECK(tv_weak < tv_in);
  CHECK(tv_strong < tv_weak);
}

TEST_CASE("energy trace is non-increasing and the solve converges") {
  const PlaneF v = natural_plane(32, 32, 2);
  SolveStats stats;
  const DecompParams p;
  estimate_illumination(v, p, &stats);
  CHECK(stats.iterations >= 1);
  CHECK(stats.iterations < p.max_iters);
  CHECK(stats.final_residual <= p.tol);
  REQUIRE(stats.energy.size() == static_cast<size_t>(stats.iterations) + 1);
  for (size_t k = 1; k < stats.energy.size(); ++k) {
    const double slack = 1e-12 * std::fmax(1.0, std::fabs(stats.energy[k - 1]));
    CHECK(stats.energy[k] <= stats.energy[k - 1] + slack);
  }
}

TEST_CASE("decomposition is deterministic") {
  const PlaneF v = natural_plane(20, 14, 13);
  const Decomposition a = decompose(v, DecompParams{});
  const Decomposition b = decompose(v, DecompParams{});
  CHECK(bit_equal(a.illumination, b.illumination));
  CHECK(bit_equal(a.reflectance, b.reflectance));
}

TEST_CASE("invalid inputs are rejected") {
  const PlaneF v(4, 4, 0.5f);
  DecompParams p;
  p.lambda = 0.0;
  CHECK_THROWS_AS(estimate_illumination(v, p), Error);
  p = DecompParams{};
  p.eps_grad = -1.0;
  CHECK_THROWS_AS(estimate_illumination(v, p), Error);
  p = DecompParams{};
  p.max_iters = 0;
  CHECK_THROWS_AS(estimate_illumination(v, p), Error);
  p = DecompParams{};
  p.tol = 0.0;
  CHECK_THROWS_AS(estimate_illumination(v, p), Error);

  PlaneF empty;
  try {
    estimate_illumination(empty, DecompParams{});
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
  PlaneF nan_plane(2, 2, 0.5f);
  nan_plane.data[3] = std::nanf("");
  CHECK_THROWS_AS(estimate_illumination(nan_plane, DecompParams{}), Error);

  const PlaneF small(2, 2, 0.5f);
  const PlaneF bigger(3, 2, 0.5f);
  CHECK_THROWS_AS(compute_reflectance(small, bigger, DecompParams{}), Error);
}
