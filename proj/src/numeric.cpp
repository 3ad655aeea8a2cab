// Copyright (c) 2026 The homsum Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "homsum/numeric.hpp"

#include <array>
#include <cmath>

namespace homsum {

double factorial(int n) {
  static const std::array<double, 13> table = [] {
    std::array<double, 13> t{};
    t[0] = 1.0;
    for (int i = 1; i < 13; ++i) t[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i - 1)] * i;
    return t;
  }();
  return table[static_cast<std::size_t>(n)];
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double result = 1.0;
  for (int i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  // Exact for the small arguments used here; round to the nearest integer to
  // remove division noise.
  return std::round(result);
}

double log_factorial(std::int64_t n) {
  constexpr int kTableSize = 1024;
  static const std::array<double, kTableSize> table = [] {
    std::array<double, kTableSize> t{};
    long double acc = 0.0L;
    t[0] = 0.0;
    for (int i = 1; i < kTableSize; ++i) {
      acc += std::log(static_cast<long double>(i));
      t[static_cast<std::size_t>(i)] = static_cast<double>(acc);
    }
    return t;
  }();
  if (n < kTableSize) return table[static_cast<std::size_t>(n)];
  // Stirling series; the n^-7 term is already below 1e-24 relative here.
  const double x = static_cast<double>(n);
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return 0.5 * std::log(2.0 * 3.14159265358979323846 * x) + x * std::log(x) - x +
         inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
}

}  // namespace homsum
