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

#ifndef LOCPRIV_KERNELS_KERNELS_HPP_
#define LOCPRIV_KERNELS_KERNELS_HPP_

#include <cstddef>
#include <string>

// Data-parallel inner loops shared by the geometry, belief and mechanism
// layers. Every kernel exists as a scalar reference implementation and,
// on x86-64, as an AVX2 variant selected at runtime. The two paths are
// written so that per-element arithmetic is performed in the same order
// with no FMA contraction: gauge_max, affine2, scale and argmin_dist2
// produce bit-identical results; mul_sum's running sum is the only value
// whose rounding depends on the backend (lane-wise partial sums).

namespace locpriv::kernels {

// out[i] = max(0, max_j(ax[j]*px[i] + ay[j]*py[i])).
// The (ax, ay) rows are the support-normalized edge functionals of a convex
// polygon containing the origin; the result is the Minkowski gauge of each
// point.
using GaugeMaxFn = void (*)(const double* ax, const double* ay,
                            std::size_t edge_count, const double* px,
                            const double* py, std::size_t n, double* out);

// (ox[i], oy[i]) = (m00*x[i] + m01*y[i] + tx, m10*x[i] + m11*y[i] + ty),
// m row-major {m00, m01, m10, m11}. In-place (ox == x) is allowed.
using Affine2Fn = void (*)(const double* m, double tx, double ty,
                           const double* x, const double* y, std::size_t n,
                           double* ox, double* oy);

// out[i] = a[i]*b[i]; returns the sum of out. out == a or out == b allowed.
using MulSumFn = double (*)(const double* a, const double* b, std::size_t n,
                            double* out);

// a[i] *= s.
using ScaleFn = void (*)(double* a, std::size_t n, double s);

// Index of the smallest (x[i]-qx)^2 + (y[i]-qy)^2 over i in [0, n); the
// lowest index wins ties. n must be > 0. *d2 receives the minimum value.
using ArgminDist2Fn = std::size_t (*)(const double* x, const double* y,
                                      std::size_t n, double qx, double qy,
                                      double* d2);

struct Ops {
  GaugeMaxFn gauge_max;
  Affine2Fn affine2;
  MulSumFn mul_sum;
  ScaleFn scale;
  ArgminDist2Fn argmin_dist2;
};

enum class Backend { scalar, avx2 };

// The active dispatch table. Defaults to the best backend the CPU supports.
const Ops& ops();

// Reference table, always available.
const Ops& scalar_ops();

Backend active_backend();
const char* backend_name(Backend b);

// Force a backend; returns false (and leaves the selection unchanged) if it
// is not available on this host. Intended for tests and reproducibility
// pinning, not thread-safe against concurrent kernel calls.
bool set_backend(Backend b);

// Restore auto-detection.
void reset_backend();

bool cpu_supports_avx2();

// Parses "scalar" | "avx2" | "auto"; applies it. Unknown names return false.
bool set_backend_by_name(const std::string& name);

}  // namespace locpriv::kernels

#endif  // LOCPRIV_KERNELS_KERNELS_HPP_
