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

#include "homsum/experiments.hpp"

#include <cmath>
#include <limits>

#include "homsum/numeric.hpp"

namespace homsum {

namespace {

void check_generation_index(int n) {
  if (n < 1) throw DomainError("family index n must be >= 1");
}

std::uint64_t avalanche(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_cell_seed(std::uint64_t seed, int n, int provider_id) {
  std::uint64_t h = avalanche(seed ^ 0x9E3779B97F4A7C15ULL);
  h = avalanche(h ^ (0xBF58476D1CE4E5B9ULL * (static_cast<std::uint64_t>(n) + 1)));
  h = avalanche(h ^ (0x94D049BB133111EBULL * (static_cast<std::uint64_t>(provider_id) + 1)));
  return h;
}

int provider_id(MomentProvider::Kind kind) {
  switch (kind) {
    case MomentProvider::Kind::gaussian: return 1;
    case MomentProvider::Kind::rademacher: return 2;
    case MomentProvider::Kind::poisson: return 3;
    case MomentProvider::Kind::custom: return 4;
  }
  return 0;
}

MomentProvider make_provider(MomentProvider::Kind kind, const WeightVector& w) {
  switch (kind) {
    case MomentProvider::Kind::gaussian: return MomentProvider::gaussian();
    case MomentProvider::Kind::rademacher: return MomentProvider::rademacher();
    case MomentProvider::Kind::poisson: return MomentProvider::poisson(w);
    case MomentProvider::Kind::custom:
      throw UnsupportedSamplerError("custom providers are not addressable in the harness");
  }
  throw DomainError("unknown provider kind");
}

}  // namespace

KernelFamily counterexample_family(int q, double lambda0) {
  if (q < 2) throw OrderTooSmallError("counterexample family requires q >= 2");
  if (!(lambda0 > 0.0)) throw DomainError("lambda override must be positive");
  KernelFamily fam;
  fam.name = "counterexample";
  fam.sigma2_target = 1.0;
  fam.note = "sign block times a normalized sum; unit variance for every n";
  fam.generator = [q, lambda0](int n) {
    check_generation_index(n);
    const int N = n + q;
    const double value = 1.0 / (factorial(q) * std::sqrt(static_cast<double>(N - q + 1)));
    std::vector<std::pair<Tuple, double>> entries;
    entries.reserve(static_cast<std::size_t>(N - q + 1));
    Tuple base(static_cast<std::size_t>(q));
    for (int i = 0; i < q - 1; ++i) base[static_cast<std::size_t>(i)] = i + 1;
    for (int s = q; s <= N; ++s) {
      base[static_cast<std::size_t>(q - 1)] = s;
      entries.emplace_back(base, value);
    }
    return std::make_pair(build_symmetric(q, N, entries),
                          WeightVector(std::vector<double>(static_cast<std::size_t>(N), lambda0)));
  };
  return fam;
}

KernelFamily pair_partition_family() {
  KernelFamily fam;
  fam.name = "pair-partition";
  fam.sigma2_target = 1.0;
  fam.note = "disjoint pair blocks; all contraction norms decay like 1/n";
  fam.generator = [](int n) {
    check_generation_index(n);
    const int N = 2 * n;
    const double value = 1.0 / (2.0 * std::sqrt(static_cast<double>(n)));
    std::vector<std::pair<Tuple, double>> entries;
    entries.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
      entries.push_back({Tuple{2 * i - 1, 2 * i}, value});
    }
    return std::make_pair(build_symmetric(2, N, entries), WeightVector::ones(N));
  };
  return fam;
}

KernelFamily q1_escape_family() {
  KernelFamily fam;
  fam.name = "q1-escape";
  fam.sigma2_target = 1.0;
  fam.note = "mass escapes along lambda_i = i; cond-(3a) statistic is 1/n";
  fam.generator = [](int n) {
    check_generation_index(n);
    std::vector<double> lambda(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) lambda[static_cast<std::size_t>(i - 1)] = i;
    return std::make_pair(build_symmetric(1, n, {{Tuple{n}, 1.0}}),
                          WeightVector(std::move(lambda)));
  };
  return fam;
}

KernelFamily family_by_name(const std::string& name, int q, double lambda0) {
  if (name == "counterexample") return counterexample_family(q, lambda0);
  if (name == "pair-partition") return pair_partition_family();
  if (name == "q1-escape") return q1_escape_family();
  throw DomainError("unknown family '" + name +
                    "' (expected counterexample | pair-partition | q1-escape)");
}

UniversalityReport universality_run(const KernelFamily& family,
                                    const std::vector<MomentProvider::Kind>& providers,
                                    const std::vector<int>& n_grid, int n_samples,
                                    const RngSpec& rng,
                                    const UniversalityThresholds& thresholds, int threads) {
  if (n_grid.empty()) throw DomainError("n_grid must be nonempty");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) throw DomainError("n_grid must be increasing");
  }

  UniversalityReport report;
  report.family = family.name;
  report.grid = n_grid;

  for (int n : n_grid) {
    const auto [kernel, weights] = family.generator(n);
    report.order = kernel.order();
    for (MomentProvider::Kind kind : providers) {
      const MomentProvider provider = make_provider(kind, weights);
      const DiagnosticsReport diag = diagnose(kernel, weights, provider);

      UniversalityRow row;
      row.n = n;
      row.size = kernel.size();
      row.provider = provider.name();
      row.var_exact = diag.var_exact;
      row.gap = diag.gap;
      row.max_contraction = kernel.order() >= 2
                                ? diag.table->max_offdiagonal_norm()
                                : std::numeric_limits<double>::quiet_NaN();
      row.cond3a = diag.cond3a;

      const RngSpec cell{derive_cell_seed(rng.seed, n, provider_id(kind)), rng.streams};
      const SimulationReport sim =
          simulate(kernel, weights, provider, n_samples, cell, family.sigma2_target, threads);
      row.w1 = sim.w1;
      row.ks = sim.ks;
      row.m4_empirical = sim.m4_empirical;
      report.rows.push_back(std::move(row));
    }
  }

  for (std::size_t pi = 0; pi < providers.size(); ++pi) {
    ProviderTrend trend;
    std::vector<const UniversalityRow*> cells;
    for (std::size_t g = 0; g < n_grid.size(); ++g) {
      cells.push_back(&report.rows[g * providers.size() + pi]);
    }
    trend.provider = cells.front()->provider;

    auto contraction_stat = [&](const UniversalityRow& r) {
      return report.order >= 2 ? r.max_contraction : r.cond3a.value_or(0.0);
    };
    trend.gap_abs_decreasing = true;
    trend.contraction_decreasing = true;
    for (std::size_t g = 0; g < cells.size(); ++g) {
      if (std::isnan(cells[g]->gap)) trend.gap_abs_decreasing = false;
      if (g > 0) {
        if (!(std::abs(cells[g]->gap) < std::abs(cells[g - 1]->gap))) {
          trend.gap_abs_decreasing = false;
        }
        if (!(contraction_stat(*cells[g]) < contraction_stat(*cells[g - 1]))) {
          trend.contraction_decreasing = false;
        }
      }
    }
    trend.gap_final = cells.back()->gap;
    trend.contraction_final = contraction_stat(*cells.back());
    trend.w1_final = cells.back()->w1;
    trend.w1_decreased = cells.back()->w1 < cells.front()->w1;
    trend.gap_below = std::abs(trend.gap_final) < thresholds.gap;
    trend.contraction_below = trend.contraction_final < thresholds.contraction;
    trend.w1_below = trend.w1_final < thresholds.w1;
    report.trends.push_back(std::move(trend));
  }
  return report;
}

VectorDiagnostics vector_diagnose(const std::vector<SymmetricKernel>& fs,
                                  const WeightVector& w,
                                  const std::vector<std::vector<double>>& C) {
  if (fs.empty()) throw DimensionMismatchError("need at least one kernel");
  const std::size_t d = fs.size();
  for (const SymmetricKernel& f : fs) {
    if (f.size() != fs.front().size()) {
      throw SizeMismatchError("all kernels must share the same size N");
    }
  }
  if (C.size() != d) throw DimensionMismatchError("covariance dimension != kernel count");
  for (const auto& row : C) {
    if (row.size() != d) throw DimensionMismatchError("covariance matrix is not square");
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (std::abs(C[i][j] - C[j][i]) > 1e-12 * std::max(1.0, std::abs(C[i][j]))) {
        throw DimensionMismatchError("covariance matrix is not symmetric");
      }
    }
  }

  VectorDiagnostics out;
  out.dimension = static_cast<int>(d);
  out.cross.resize(d * d);
  out.residual.resize(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double cov = cross_covariance(fs[i], fs[j]);
      out.cross[i * d + j] = cov;
      out.residual[i * d + j] = cov - C[i][j];
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    VectorComponent comp;
    comp.order = fs[j].order();
    comp.var = variance_exact(fs[j]);
    comp.m4 = fourth_moment_structured(fs[j], w);
    comp.gap_vs_target = comp.m4 - 3.0 * C[j][j] * C[j][j];
    const ContractionTable table = contraction_table(fs[j], w);
    if (comp.order >= 2) {
      comp.stat = table.max_offdiagonal_norm();
      comp.stat_is_cond3a = false;
    } else {
      comp.stat = table.cond3a.value_or(0.0);
      comp.stat_is_cond3a = true;
    }
    out.components.push_back(comp);
  }
  return out;
}

}  // namespace homsum
