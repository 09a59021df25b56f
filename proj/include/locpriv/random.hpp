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

#ifndef LOCPRIV_RANDOM_HPP_
#define LOCPRIV_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace locpriv {

// Deterministic random stream. All draws are derived from the raw 64-bit
// engine output rather than std:: distributions, whose algorithms are
// implementation-defined; the sequence is therefore identical across
// standard libraries and platforms for a given seed.
//
// Ownership contract: one stream, one owner. Concurrent users must fork
// independent streams.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Exponential with the given rate (mean 1/rate).
  double exponential(double rate) {
    return -std::log1p(-uniform()) / rate;
  }

  // Gamma with integer shape, as a sum of exponentials.
  double gamma_int(int shape, double rate) {
    double sum = 0.0;
    for (int i = 0; i < shape; ++i) sum += exponential(rate);
    return sum;
  }

  // Uniform index in [0, n). Unbiased via rejection.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  // Independent stream derived from this stream's seed and a salt value.
  // Forking does not advance this stream.
  RandomStream fork(std::uint64_t salt) const {
    return RandomStream(mix(seed_ ^ mix(salt + 0x9e3779b97f4a7c15ull)));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  // splitmix64 finalizer; decorrelates nearby seeds before feeding mt19937_64.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace locpriv

#endif  // LOCPRIV_RANDOM_HPP_
