// Copyright 2026 The locpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "locpriv/kernels/kernels.hpp"

#include <limits>

namespace locpriv::kernels {
namespace {

void gauge_max_ref(const double* ax, const double* ay, std::size_t edge_count,
                   const double* px, const double* py, std::size_t n,
                   double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double g = 0.0;
    const double x = px[i];
    const double y = py[i];
    for (std::size_t j = 0; j < edge_count; ++j) {
      const double v = ax[j] * x + ay[j] * y;
      if (v > g) g = v;
    }
    out[i] = g;
  }
}

void affine2_ref(const double* m, double tx, double ty, const double* x,
                 const double* y, std::size_t n, double* ox, double* oy) {
  const double m00 = m[0], m01 = m[1], m10 = m[2], m11 = m[3];
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    ox[i] = m00 * xi + m01 * yi + tx;
    oy[i] = m10 * xi + m11 * yi + ty;
  }
}

double mul_sum_ref(const double* a, const double* b, std::size_t n,
                   double* out) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = a[i] * b[i];
    out[i] = p;
    sum += p;
  }
  return sum;
}

void scale_ref(double* a, std::size_t n, double s) {
  for (std::size_t i = 0; i < n; ++i) a[i] *= s;
}

std::size_t argmin_dist2_ref(const double* x, const double* y, std::size_t n,
                             double qx, double qy, double* d2) {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - qx;
    const double dy = y[i] - qy;
    const double d = dx * dx + dy * dy;
    if (d < best_d2) {
      best_d2 = d;
      best = i;
    }
  }
  if (d2 != nullptr) *d2 = best_d2;
  return best;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops table{gauge_max_ref, affine2_ref, mul_sum_ref, scale_ref,
                         argmin_dist2_ref};
  return table;
}

}  // namespace locpriv::kernels
