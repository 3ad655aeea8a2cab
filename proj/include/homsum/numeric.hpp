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

#ifndef HOMSUM_NUMERIC_HPP_
#define HOMSUM_NUMERIC_HPP_

#include <cstdint>

namespace homsum {

/// Kahan compensated accumulator. Contraction norms near zero are decision
/// quantities, so plain summation is not good enough here.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - compensation_;
    const double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Exact n! as a double; valid for n <= 12 (the library caps orders well
/// below that times two).
double factorial(int n);

/// Exact binomial coefficient as a double; valid for n <= 20.
double binomial(int n, int k);

/// ln(n!) for nonnegative n, accurate to ~1e-14 relative.
double log_factorial(std::int64_t n);

}  // namespace homsum

#endif  // HOMSUM_NUMERIC_HPP_
