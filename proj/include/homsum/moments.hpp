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

#ifndef HOMSUM_MOMENTS_HPP_
#define HOMSUM_MOMENTS_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homsum/contract.hpp"
#include "homsum/kernels.hpp"

namespace homsum {

/// E[(P(lambda) - lambda)^k], the centered Poisson moment, via the recursion
/// T_{k+1} = lambda * sum_{j=0}^{k-1} C(k,j) T_j with T_0 = 1, T_1 = 0.
/// A polynomial in lambda of degree floor(k/2). Supports k <= 16.
double poisson_central_moment(int k, double lambda);

/// Central moments of the normalized coordinate laws. All kinds are centered
/// with unit variance; gaussian and rademacher are homogeneous across
/// indices, poisson carries one lambda per index, custom is a user table.
class MomentProvider {
 public:
  enum class Kind { gaussian, rademacher, poisson, custom };

  static MomentProvider gaussian();
  static MomentProvider rademacher();
  static MomentProvider poisson(WeightVector lambdas);
  /// moments[k] = k-th central moment, k = 0..K; requires m0=1, m1=0, m2=1.
  static MomentProvider custom(std::vector<double> moments);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  /// k-th central moment of coordinate `index` (1-based).
  double central_moment(int index, int k) const;
  /// Highest supported k: 16 for poisson, 8 otherwise.
  int max_moment_order() const;
  /// Poisson intensities; nullptr for the other kinds.
  const WeightVector* weights() const;

  static Kind kind_from_name(const std::string& name);

 private:
  MomentProvider(Kind kind, std::string name);

  Kind kind_;
  std::string name_;
  std::optional<WeightVector> lambdas_;
  std::vector<double> custom_moments_;
};

/// E[Q^2] = q! * sum over ordered tuples of f^2 (provider independent).
double variance_exact(const SymmetricKernel& f);

/// E[prod_s Q_{f_s}^{p_s}] for independent coordinates, by expanding the
/// product over the kernels' supports, grouping equal picks, and consulting
/// the provider once per distinct index. Selections leaving some index with
/// a bare count of one vanish and are pruned. Throws BudgetExceededError when
/// the exploration exceeds the work guard.
double product_moment_bruteforce(
    const std::vector<std::pair<const SymmetricKernel*, int>>& factors,
    const MomentProvider& provider);

/// E[Q^m] for m <= 4. The ground-truth oracle for the structured formulas.
double moment_bruteforce(const SymmetricKernel& f, const MomentProvider& provider, int m);

/// E[I_q(g)^4] for the Poisson embedding, as sum_{k=0}^{2q} k! ||G_k(g,g)||^2
/// with the k = 0 term equal to q!^2 ||g||^4 and the k = 2q term expanded in
/// closed form through the diagonal contraction norms.
double fourth_moment_structured(const SymmetricKernel& f, const WeightVector& w);

/// q! <embed(f1), embed(f2)> when the orders match, 0 otherwise.
double cross_covariance(const SymmetricKernel& f1, const SymmetricKernel& f2);

struct DiagnosticsReport {
  enum class Method { none, bruteforce, structured, both };

  int order = 0;
  int size = 0;
  double var_exact = 0.0;
  double m4_exact = 0.0;  // NaN when no exact path fits the budget
  double gap = 0.0;       // E[Q^4] - 3 E[Q^2]^2
  std::optional<double> cond3a;
  std::optional<ContractionTable> table;
  Method method = Method::none;
};

std::string to_string(DiagnosticsReport::Method m);

/// Exact per-kernel diagnostics. The fourth moment goes through the
/// structured path for poisson providers and through brute force otherwise
/// (both when the budget allows). No asymptotic verdict is attached: limits
/// are a property of kernel sequences, not of a single kernel.
DiagnosticsReport diagnose(const SymmetricKernel& f, const WeightVector& w,
                           const MomentProvider& provider);

}  // namespace homsum

#endif  // HOMSUM_MOMENTS_HPP_
