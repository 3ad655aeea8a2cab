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

#include <doctest.h>

#include <cmath>

#include "homsum/experiments.hpp"

using namespace homsum;

TEST_CASE("counterexample family closed forms") {
  for (int q : {2, 3}) {
    const KernelFamily fam = counterexample_family(q);
    for (int N : {std::max(4, q + 1), 8, 12}) {
      const auto [kernel, weights] = fam.generator(N - q);
      CHECK(kernel.size() == N);
      CHECK(variance_exact(kernel) == doctest::Approx(1.0).epsilon(1e-12));

      const double M = static_cast<double>(N - q + 1);
      const double m4_rademacher =
          moment_bruteforce(kernel, MomentProvider::rademacher(), 4);
      CHECK(m4_rademacher == doctest::Approx(3.0 - 2.0 / M).epsilon(1e-11));

      const double m4_gaussian = moment_bruteforce(kernel, MomentProvider::gaussian(), 4);
      CHECK(m4_gaussian == doctest::Approx(std::pow(3.0, q)).epsilon(1e-11));
    }
  }
  CHECK_THROWS_AS(counterexample_family(1), OrderTooSmallError);
}

TEST_CASE("counterexample family accepts a weight override") {
  const KernelFamily fam = counterexample_family(2, 0.5);
  const auto [kernel, weights] = fam.generator(6);
  CHECK(weights.alpha() == 0.5);
  const GeneralKernel g = embed(kernel);
  // int g^4 scales as alpha^{-q} for flat weights.
  const double flat = p_integral(embed(kernel), 4, WeightVector::ones(kernel.size()));
  CHECK(p_integral(g, 4, weights) == doctest::Approx(flat / 0.25).epsilon(1e-12));
}

TEST_CASE("pair partition family closed forms") {
  const KernelFamily fam = pair_partition_family();
  for (int n : {1, 2, 4, 16, 64}) {
    const auto [kernel, weights] = fam.generator(n);
    CHECK(kernel.size() == 2 * n);
    CHECK(variance_exact(kernel) == doctest::Approx(1.0).epsilon(1e-12));
    const ContractionTable table = contraction_table(kernel, weights);
    const double norm = table.star_norms.at({1, 1});
    CHECK(norm * norm == doctest::Approx(1.0 / (8.0 * n)).epsilon(1e-12));
  }

  const auto [k8, w8] = fam.generator(8);
  const auto [k64, w64] = fam.generator(64);
  const double gap8 = fourth_moment_structured(k8, w8) - 3.0;
  const double gap64 = fourth_moment_structured(k64, w64) - 3.0;
  CHECK(gap64 < gap8);
  CHECK(gap8 == doctest::Approx(13.0 / 8.0).epsilon(1e-11));
  CHECK(gap64 == doctest::Approx(13.0 / 64.0).epsilon(1e-11));
}

TEST_CASE("q1 escape family statistics") {
  const KernelFamily fam = q1_escape_family();
  for (int n : {1, 4, 16}) {
    const auto [kernel, weights] = fam.generator(n);
    CHECK(variance_exact(kernel) == doctest::Approx(1.0).epsilon(1e-14));
    const ContractionTable table = contraction_table(kernel, weights);
    REQUIRE(table.cond3a.has_value());
    CHECK(*table.cond3a == doctest::Approx(1.0 / n).epsilon(1e-13));
  }
}

TEST_CASE("family lookup by name") {
  CHECK(family_by_name("counterexample", 3).name == "counterexample");
  CHECK(family_by_name("pair-partition").name == "pair-partition");
  CHECK(family_by_name("q1-escape").name == "q1-escape");
  CHECK_THROWS_AS(family_by_name("nope"), DomainError);
}

TEST_CASE("universality run shapes, determinism, and validation") {
  const KernelFamily fam = pair_partition_family();
  const std::vector<MomentProvider::Kind> providers{
      MomentProvider::Kind::gaussian, MomentProvider::Kind::poisson};
  const std::vector<int> grid{2, 8};
  const RngSpec rng{31337, 4};

  const UniversalityReport a = universality_run(fam, providers, grid, 2000, rng);
  const UniversalityReport b = universality_run(fam, providers, grid, 2000, rng);
  REQUIRE(a.rows.size() == 4);
  REQUIRE(a.trends.size() == 2);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].w1 == b.rows[i].w1);
    CHECK(a.rows[i].ks == b.rows[i].ks);
    CHECK(a.rows[i].gap == b.rows[i].gap);
  }
  CHECK(a.rows[0].provider == "gaussian");
  CHECK(a.rows[1].provider == "poisson");
  CHECK(a.rows[0].n == 2);
  CHECK(a.rows[2].n == 8);

  // Exact gaps for this family: 6/n under gaussian, 13/n under poisson.
  CHECK(a.rows[0].gap == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(a.rows[1].gap == doctest::Approx(6.5).epsilon(1e-10));
  CHECK(a.trends[0].gap_abs_decreasing);
  CHECK(a.trends[1].gap_abs_decreasing);
  CHECK(a.trends[0].contraction_decreasing);

  const UniversalityReport empty = universality_run(fam, {}, grid, 2000, rng);
  CHECK(empty.rows.empty());
  CHECK(empty.trends.empty());

  CHECK_THROWS_AS(universality_run(fam, providers, {}, 2000, rng), DomainError);
  CHECK_THROWS_AS(universality_run(fam, providers, {8, 8}, 2000, rng), DomainError);
}

TEST_CASE("universality harness exposes the witness contrast") {
  const UniversalityReport rep = universality_run(
      counterexample_family(2),
      {MomentProvider::Kind::gaussian, MomentProvider::Kind::rademacher}, {8, 32}, 20000,
      RngSpec{42, 8}, UniversalityThresholds{}, 2);
  REQUIRE(rep.rows.size() == 4);
  for (const UniversalityRow& row : rep.rows) {
    if (row.provider == "gaussian") {
      CHECK(row.gap == doctest::Approx(6.0).epsilon(1e-10));
      CHECK(row.ks >= 0.05);
    } else {
      CHECK(row.gap == doctest::Approx(-2.0 / (row.n + 1)).epsilon(1e-10));
    }
  }
  CHECK_FALSE(rep.trends[0].gap_abs_decreasing);
  CHECK(rep.trends[1].gap_abs_decreasing);
}

TEST_CASE("universality harness separates providers on the q1 escape family") {
  const UniversalityReport rep = universality_run(
      q1_escape_family(),
      {MomentProvider::Kind::rademacher, MomentProvider::Kind::poisson}, {16, 64}, 20000,
      RngSpec{7, 8}, UniversalityThresholds{}, 2);
  for (const UniversalityRow& row : rep.rows) {
    REQUIRE(row.cond3a.has_value());
    CHECK(*row.cond3a == doctest::Approx(1.0 / row.n).epsilon(1e-12));
    if (row.provider == "rademacher") {
      CHECK(row.ks >= 0.3);
    } else if (row.n == 64) {
      CHECK(row.ks <= 0.1);
    }
  }
}

TEST_CASE("vector diagnostics on disjoint kernels") {
  const SymmetricKernel f1 = build_symmetric(2, 4, {{{1, 2}, 0.5}});
  const SymmetricKernel f2 = build_symmetric(2, 4, {{{3, 4}, 0.5}});
  const WeightVector w = WeightVector::ones(4);
  const std::vector<std::vector<double>> C{{1.0, 0.0}, {0.0, 1.0}};
  const VectorDiagnostics rep = vector_diagnose({f1, f2}, w, C);
  CHECK(rep.dimension == 2);
  CHECK(rep.residual[1] == 0.0);
  CHECK(rep.residual[2] == 0.0);
  CHECK(rep.cross[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(rep.components[0].gap_vs_target ==
        doctest::Approx(fourth_moment_structured(f1, w) - 3.0).epsilon(1e-12));
}

TEST_CASE("vector diagnostics with one kernel reduces to diagnose") {
  const SymmetricKernel f = build_symmetric(2, 3, {{{1, 2}, 0.4}, {{2, 3}, 0.3}});
  const WeightVector w({1.0, 2.0, 4.0});
  const double var = variance_exact(f);
  const VectorDiagnostics rep = vector_diagnose({f}, w, {{var}});
  const DiagnosticsReport diag = diagnose(f, w, MomentProvider::poisson(w));
  CHECK(rep.components[0].m4 == doctest::Approx(diag.m4_exact).epsilon(1e-12));
  CHECK(rep.components[0].gap_vs_target == doctest::Approx(diag.gap).epsilon(1e-12));
  CHECK(rep.components[0].stat ==
        doctest::Approx(diag.table->max_offdiagonal_norm()).epsilon(1e-12));
}

TEST_CASE("vector diagnostics crosses orders with exact zero covariance") {
  const SymmetricKernel f1 = build_symmetric(1, 4, {{{1}, 1.0}});
  const SymmetricKernel f2 = build_symmetric(2, 4, {{{1, 2}, 0.5}});
  const WeightVector w = WeightVector::ones(4);
  const std::vector<std::vector<double>> C{{1.0, 0.3}, {0.3, 1.0}};
  const VectorDiagnostics rep = vector_diagnose({f1, f2}, w, C);
  CHECK(rep.cross[1] == 0.0);
  CHECK(rep.residual[1] == doctest::Approx(-0.3));
  CHECK(rep.components[0].stat_is_cond3a);
  CHECK_FALSE(rep.components[1].stat_is_cond3a);
}

TEST_CASE("vector diagnostics validates shapes") {
  const SymmetricKernel f1 = build_symmetric(2, 4, {{{1, 2}, 0.5}});
  const SymmetricKernel f2 = build_symmetric(2, 5, {{{3, 4}, 0.5}});
  const WeightVector w = WeightVector::ones(5);
  CHECK_THROWS_AS(vector_diagnose({f1, f2}, w, {{1, 0}, {0, 1}}), SizeMismatchError);
  CHECK_THROWS_AS(vector_diagnose({f1}, WeightVector::ones(4), {{1, 0}, {0, 1}}),
                  DimensionMismatchError);
  CHECK_THROWS_AS(
      vector_diagnose({f1, build_symmetric(2, 4, {{{3, 4}, 0.5}})},
                      WeightVector::ones(4), {{1.0, 0.5}, {0.2, 1.0}}),
      DimensionMismatchError);
}
