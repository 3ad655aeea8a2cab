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

#ifndef HOMSUM_KERNELS_HPP_
#define HOMSUM_KERNELS_HPP_

#include <map>
#include <utility>
#include <vector>

#include "homsum/errors.hpp"

namespace homsum {

/// Index tuple over [1, N]. Indices are 1-based everywhere, including
/// internal storage.
using Tuple = std::vector<int>;

/// Validation caps. Symmetrization cost is factorial in the order, so kernels
/// built from user input stay small; operation outputs may carry up to twice
/// the input order.
constexpr int kMaxUserOrder = 6;
constexpr int kMaxInternalOrder = 12;
constexpr int kMaxSymmetrizeOrder = 8;
constexpr int kMaxSize = 10000;

/// Coefficients below this magnitude are dropped when a kernel is built,
/// keeping supports minimal after cancellations.
constexpr double kCoefficientDropTolerance = 1e-15;

/// Positive weights lambda_1..lambda_N with alpha = min_i lambda_i. These are
/// the atom masses of the control measure behind the normalized-indicator
/// basis g_i = 1_{A_i} / sqrt(lambda_i).
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> lambda);
  static WeightVector ones(int n);

  int size() const { return static_cast<int>(lambda_.size()); }
  double lambda(int i) const { return lambda_[static_cast<std::size_t>(i - 1)]; }
  double alpha() const { return alpha_; }
  const std::vector<double>& values() const { return lambda_; }

 private:
  std::vector<double> lambda_;
  double alpha_;
};

/// Symmetric real function on [N]^q vanishing on diagonals. Only strictly
/// increasing tuples are stored; all q! permutations share the value and any
/// tuple with a repeated index evaluates to zero.
class SymmetricKernel {
 public:
  SymmetricKernel(int order, int size);

  int order() const { return order_; }
  int size() const { return size_; }
  bool empty() const { return entries_.empty(); }
  const std::map<Tuple, double>& entries() const { return entries_; }

  /// Value at an arbitrary tuple (any permutation, repeats give 0).
  double value(const Tuple& t) const;

 private:
  friend SymmetricKernel build_symmetric(
      int order, int size, const std::vector<std::pair<Tuple, double>>& raw_entries);

  int order_;
  int size_;
  std::map<Tuple, double> entries_;
};

/// Validates, canonicalizes to increasing tuples, rejects repeated indices and
/// duplicate canonical tuples, and drops negligible values.
SymmetricKernel build_symmetric(int order, int size,
                                const std::vector<std::pair<Tuple, double>>& raw_entries);

/// Linear combination sum_t c(t) g_{t_1} x ... x g_{t_k} over arbitrary
/// (ordered, possibly repeating) k-tuples. The basis tensors are orthonormal
/// in L2(mu^k), so the squared L2 norm is the coefficient sum of squares.
/// Order 0 holds a single scalar. Immutable after construction.
class GeneralKernel {
 public:
  GeneralKernel(int order, int size);
  GeneralKernel(int order, int size, std::map<Tuple, double> coefficients);
  static GeneralKernel scalar(double value, int size);

  int order() const { return order_; }
  int size() const { return size_; }
  bool empty() const { return coefficients_.empty(); }
  const std::map<Tuple, double>& coefficients() const { return coefficients_; }

  double coefficient(const Tuple& t) const;
  /// The value of an order-0 kernel (0 for the empty scalar kernel).
  double scalar_value() const;

 private:
  int order_;
  int size_;
  std::map<Tuple, double> coefficients_;
};

/// Expands a symmetric kernel to one coefficient per ordered tuple: every
/// increasing tuple contributes all q! permutations with the same value.
GeneralKernel embed(const SymmetricKernel& f);

/// Orbit average: output at tuple t is the mean of input coefficients over
/// all permutations of t. Idempotent.
GeneralKernel symmetrize(const GeneralKernel& h);

double l2_norm(const GeneralKernel& h);
double inner_product(const GeneralKernel& a, const GeneralKernel& b);

/// Integral of h^p over mu^k for p in {3, 4}, using the coordinatewise
/// reductions  int g_i^m dmu = lambda_i^{1-m/2}  and  int g_i g_j dmu = 0
/// for i != j. Basis tensors have disjoint supports, so only aligned
/// selections survive and the sum runs over the support once.
double p_integral(const GeneralKernel& h, int p, const WeightVector& w);

}  // namespace homsum

#endif  // HOMSUM_KERNELS_HPP_
