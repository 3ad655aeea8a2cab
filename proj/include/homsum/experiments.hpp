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

#ifndef HOMSUM_EXPERIMENTS_HPP_
#define HOMSUM_EXPERIMENTS_HPP_

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homsum/montecarlo.hpp"

namespace homsum {

/// A kernel sequence indexed by n, together with the weight vector it lives
/// on and the variance its members are normalized to.
struct KernelFamily {
  std::string name;
  std::function<std::pair<SymmetricKernel, WeightVector>(int)> generator;
  double sigma2_target = 1.0;
  std::string note;
};

/// The non-universal Walsh-chaos witness: a fixed sign block times a growing
/// normalized sum. f_N is supported on the tuples {1, .., q-1, s} for
/// q <= s <= N with constant value 1/(q! sqrt(N-q+1)); generator(n) uses
/// N = n + q. Unit variance for every n. The weight can be overridden to
/// exercise alpha-dependence.
KernelFamily counterexample_family(int q, double lambda0 = 1.0);

/// q = 2 positive example: f(2i-1, 2i) = 1/(2 sqrt(n)) for i = 1..n on
/// N = 2n. Unit variance, and ||g *_1^1 g||^2 = 1/(8n).
KernelFamily pair_partition_family();

/// q = 1 escape-to-infinity sequence: f_n(n) = 1 on N = n with lambda_i = i.
/// The cond-(3a) statistic 1/n vanishes while the law under a fixed
/// coordinate distribution is just that single coordinate.
KernelFamily q1_escape_family();

/// Lookup by the CLI names counterexample | pair-partition | q1-escape.
KernelFamily family_by_name(const std::string& name, int q = 2, double lambda0 = 1.0);

struct UniversalityThresholds {
  double gap = 0.05;
  double contraction = 0.05;
  double w1 = 0.05;
};

struct UniversalityRow {
  int n = 0;
  int size = 0;  // N of the generated kernel
  std::string provider;
  double var_exact = 0.0;
  double gap = 0.0;              // NaN when no exact path fits the budget
  double max_contraction = 0.0;  // NaN for q = 1
  std::optional<double> cond3a;  // q = 1 only
  double w1 = 0.0;
  double ks = 0.0;
  double m4_empirical = 0.0;
};

struct ProviderTrend {
  std::string provider;
  bool gap_abs_decreasing = false;
  bool contraction_decreasing = false;
  bool w1_decreased = false;
  double gap_final = 0.0;
  double contraction_final = 0.0;
  double w1_final = 0.0;
  bool gap_below = false;
  bool contraction_below = false;
  bool w1_below = false;
};

struct UniversalityReport {
  std::string family;
  int order = 0;
  std::vector<int> grid;
  std::vector<UniversalityRow> rows;     // grid-major, provider order within
  std::vector<ProviderTrend> trends;
};

/// Exact diagnostics plus Monte Carlo distances for every (n, provider)
/// cell. Monotonicity flags are computed on |gap| and on the contraction
/// statistic (the cond-(3a) sum when q = 1); no limit claim is made beyond
/// the finite grid. Each cell draws from an RngSpec derived from
/// (seed, n, provider), so the report is deterministic for fixed inputs.
UniversalityReport universality_run(const KernelFamily& family,
                                    const std::vector<MomentProvider::Kind>& providers,
                                    const std::vector<int>& n_grid, int n_samples,
                                    const RngSpec& rng,
                                    const UniversalityThresholds& thresholds = {},
                                    int threads = 1);

struct VectorComponent {
  int order = 0;
  double var = 0.0;
  double m4 = 0.0;             // structured Poisson fourth moment
  double gap_vs_target = 0.0;  // m4 - 3 C(j,j)^2
  double stat = 0.0;           // max contraction norm, or cond3a when q = 1
  bool stat_is_cond3a = false;
};

struct VectorDiagnostics {
  int dimension = 0;
  std::vector<double> cross;     // row-major d x d exact covariances
  std::vector<double> residual;  // cross - C
  std::vector<VectorComponent> components;
};

/// Componentwise and pairwise diagnostics against a target covariance C.
/// Kernels of different orders have exactly zero covariance.
VectorDiagnostics vector_diagnose(const std::vector<SymmetricKernel>& fs,
                                  const WeightVector& w,
                                  const std::vector<std::vector<double>>& C);

}  // namespace homsum

#endif  // HOMSUM_EXPERIMENTS_HPP_
