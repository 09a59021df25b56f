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

// AVX2 variants. Compiled with -mavx2 only when the target is x86-64; the
// dispatcher consults cpu_supports_avx2() before installing this table.
// No FMA intrinsics are used so that per-element results match the scalar
// reference bit for bit.

#include "locpriv/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstdint>
#include <limits>

namespace locpriv::kernels {
namespace {

void gauge_max_avx2(const double* ax, const double* ay, std::size_t edge_count,
                    const double* px, const double* py, std::size_t n,
                    double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(px + i);
    const __m256d y = _mm256_loadu_pd(py + i);
    __m256d g = _mm256_setzero_pd();
    for (std::size_t j = 0; j < edge_count; ++j) {
      const __m256d a = _mm256_set1_pd(ax[j]);
      const __m256d b = _mm256_set1_pd(ay[j]);
      const __m256d v = _mm256_add_pd(_mm256_mul_pd(a, x), _mm256_mul_pd(b, y));
      g = _mm256_max_pd(g, v);
    }
    _mm256_storeu_pd(out + i, g);
  }
  for (; i < n; ++i) {
    double g = 0.0;
    for (std::size_t j = 0; j < edge_count; ++j) {
      const double v = ax[j] * px[i] + ay[j] * py[i];
      if (v > g) g = v;
    }
    out[i] = g;
  }
}

void affine2_avx2(const double* m, double tx, double ty, const double* x,
                  const double* y, std::size_t n, double* ox, double* oy) {
  const __m256d m00 = _mm256_set1_pd(m[0]);
  const __m256d m01 = _mm256_set1_pd(m[1]);
  const __m256d m10 = _mm256_set1_pd(m[2]);
  const __m256d m11 = _mm256_set1_pd(m[3]);
  const __m256d vtx = _mm256_set1_pd(tx);
  const __m256d vty = _mm256_set1_pd(ty);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xi = _mm256_loadu_pd(x + i);
    const __m256d yi = _mm256_loadu_pd(y + i);
    const __m256d rx = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(m00, xi), _mm256_mul_pd(m01, yi)), vtx);
    const __m256d ry = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(m10, xi), _mm256_mul_pd(m11, yi)), vty);
    _mm256_storeu_pd(ox + i, rx);
    _mm256_storeu_pd(oy + i, ry);
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    ox[i] = m[0] * xi + m[1] * yi + tx;
    oy[i] = m[2] * xi + m[3] * yi + ty;
  }
}

double mul_sum_avx2(const double* a, const double* b, std::size_t n,
                    double* out) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                    _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, p);
    acc = _mm256_add_pd(acc, p);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    const double p = a[i] * b[i];
    out[i] = p;
    sum += p;
  }
  return sum;
}

void scale_avx2(double* a, std::size_t n, double s) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(a + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), vs));
  }
  for (; i < n; ++i) a[i] *= s;
}

std::size_t argmin_dist2_avx2(const double* x, const double* y, std::size_t n,
                              double qx, double qy, double* d2) {
  const __m256d vqx = _mm256_set1_pd(qx);
  const __m256d vqy = _mm256_set1_pd(qy);
  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256i best_idx = _mm256_setzero_si256();
  __m256i idx = _mm256_setr_epi64x(0, 1, 2, 3);
  const __m256i step = _mm256_set1_epi64x(4);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x + i), vqx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y + i), vqy);
    const __m256d d =
        _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    // Strict less-than keeps the earliest index within each lane.
    const __m256d lt = _mm256_cmp_pd(d, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, d, lt);
    best_idx = _mm256_blendv_epi8(best_idx, idx, _mm256_castpd_si256(lt));
    idx = _mm256_add_epi64(idx, step);
  }
  alignas(32) double lane_d[4];
  alignas(32) std::int64_t lane_i[4];
  _mm256_store_pd(lane_d, best);
  _mm256_store_si256(reinterpret_cast<__m256i*>(lane_i), best_idx);
  double best_d2 = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (int l = 0; l < 4; ++l) {
    const auto li = static_cast<std::size_t>(lane_i[l]);
    if (lane_d[l] < best_d2 ||
        (lane_d[l] == best_d2 && li < best_i)) {
      best_d2 = lane_d[l];
      best_i = li;
    }
  }
  for (; i < n; ++i) {
    const double dx = x[i] - qx;
    const double dy = y[i] - qy;
    const double d = dx * dx + dy * dy;
    if (d < best_d2) {
      best_d2 = d;
      best_i = i;
    }
  }
  if (d2 != nullptr) *d2 = best_d2;
  return best_i;
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops table{gauge_max_avx2, affine2_avx2, mul_sum_avx2,
                         scale_avx2, argmin_dist2_avx2};
  return table;
}

}  // namespace locpriv::kernels

#endif  // x86-64
