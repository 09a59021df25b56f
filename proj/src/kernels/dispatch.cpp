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

namespace locpriv::kernels {

#if defined(LOCPRIV_HAVE_AVX2_BACKEND)
const Ops& avx2_ops();  // defined in kernels_avx2.cpp
#endif

namespace {

struct Dispatch {
  const Ops* table;
  Backend backend;
};

bool detect_avx2() {
#if defined(LOCPRIV_HAVE_AVX2_BACKEND) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Dispatch detect_best() {
#if defined(LOCPRIV_HAVE_AVX2_BACKEND)
  if (detect_avx2()) return {&avx2_ops(), Backend::avx2};
#endif
  return {&scalar_ops(), Backend::scalar};
}

Dispatch& active() {
  static Dispatch d = detect_best();
  return d;
}

}  // namespace

const Ops& ops() { return *active().table; }

Backend active_backend() { return active().backend; }

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

bool cpu_supports_avx2() { return detect_avx2(); }

bool set_backend(Backend b) {
  switch (b) {
    case Backend::scalar:
      active() = {&scalar_ops(), Backend::scalar};
      return true;
    case Backend::avx2:
#if defined(LOCPRIV_HAVE_AVX2_BACKEND)
      if (detect_avx2()) {
        active() = {&avx2_ops(), Backend::avx2};
        return true;
      }
#endif
      return false;
  }
  return false;
}

void reset_backend() { active() = detect_best(); }

bool set_backend_by_name(const std::string& name) {
  if (name == "auto") {
    reset_backend();
    return true;
  }
  if (name == "scalar") return set_backend(Backend::scalar);
  if (name == "avx2") return set_backend(Backend::avx2);
  return false;
}

}  // namespace locpriv::kernels
