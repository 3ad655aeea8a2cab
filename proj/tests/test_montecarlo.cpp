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

#include <algorithm>
#include <cmath>

#include "homsum/montecarlo.hpp"
#include "homsum/numeric.hpp"
#include "oracles.hpp"

using namespace homsum;

TEST_CASE("rng streams are reproducible and distinct") {
  RngStream a(42, 0);
  RngStream b(42, 0);
  RngStream c(42, 1);
  bool all_equal = true;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next_u64();
    CHECK(va == b.next_u64());
    if (va != c.next_u64()) all_equal = false;
  }
  CHECK_FALSE(all_equal);
}

TEST_CASE("normal quantile and cdf") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-6));
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));

  for (double x = -6.0; x <= 6.0; x += 0.25) {
    CHECK(std::abs(normal_quantile(normal_cdf(x)) - x) <= 1e-7);
  }
  for (double u : {1e-12, 1e-9, 1e-4, 0.3, 0.9, 1.0 - 1e-9}) {
    CHECK(std::abs(normal_cdf(normal_quantile(u)) - u) <= 1e-14 + 1e-9 * u);
  }
  CHECK_THROWS_AS(normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS(normal_quantile(1.0), DomainError);
}

TEST_CASE("rademacher sampler hits only signs") {
  RngStream rng(1, 0);
  int plus = 0;
  for (int i = 0; i < 4000; ++i) {
    const double v = sample_rademacher(rng);
    CHECK((v == 1.0 || v == -1.0));
    if (v > 0) ++plus;
  }
  CHECK(plus > 1700);
  CHECK(plus < 2300);
}

TEST_CASE("poisson sampler moments at small and large lambda") {
  RngStream rng(5, 0);
  const int n = 200000;

  // lambda = 4: inversion path; third moment of the normalized coordinate
  // is lambda^{-1/2} = 0.5.
  KahanSum sum1, sum2, sum3, sum6;
  for (int i = 0; i < n; ++i) {
    const double x = sample_poisson_normalized(rng, 4.0);
    sum1.add(x);
    sum2.add(x * x);
    const double x3 = x * x * x;
    sum3.add(x3);
    sum6.add(x3 * x3);
  }
  const double mean = sum1.value() / n;
  const double var = sum2.value() / n - mean * mean;
  const double m3 = sum3.value() / n;
  const double se_m3 = std::sqrt((sum6.value() / n - m3 * m3) / n);
  CHECK(std::abs(mean) <= 5.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) <= 5.0 * std::sqrt(2.0 / n) * 2.0);
  CHECK(std::abs(m3 - 0.5) <= 5.0 * se_m3);

  // lambda = 120: rejection path; mean/variance of the raw count.
  KahanSum c1, c2;
  for (int i = 0; i < n; ++i) {
    const double k = static_cast<double>(sample_poisson_count(rng, 120.0));
    c1.add(k);
    c2.add(k * k);
  }
  const double cmean = c1.value() / n;
  const double cvar = c2.value() / n - cmean * cmean;
  CHECK(std::abs(cmean - 120.0) <= 5.0 * std::sqrt(120.0 / n));
  CHECK(std::abs(cvar - 120.0) <= 5.0 * 120.0 * std::sqrt(2.0 / n) * 1.5);
}

TEST_CASE("sample matrix determinism and moments") {
  const WeightVector w({1.0, 2.0, 3.0});
  const MomentProvider p = MomentProvider::poisson(w);
  const RngSpec rng{2718, 4};
  const SampleMatrix a = sample_matrix(p, w, 3, 257, rng);
  const SampleMatrix b = sample_matrix(p, w, 3, 257, rng);
  CHECK(a.data == b.data);

  const int n = 40000;
  const SampleMatrix big = sample_matrix(p, w, 3, n, rng);
  for (int c = 0; c < 3; ++c) {
    KahanSum s1, s2;
    for (int r = 0; r < n; ++r) {
      s1.add(big.at(r, c));
      s2.add(big.at(r, c) * big.at(r, c));
    }
    const double mean = s1.value() / n;
    const double var = s2.value() / n - mean * mean;
    CHECK(std::abs(mean) <= 5.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) <= 5.0 * 3.0 / std::sqrt(static_cast<double>(n)));
  }

  CHECK_THROWS_AS(
      sample_matrix(MomentProvider::custom({1.0, 0.0, 1.0}), w, 3, 4, rng),
      UnsupportedSamplerError);
}

TEST_CASE("eval_sums worked rows") {
  const SymmetricKernel pair = build_symmetric(2, 2, {{{1, 2}, 0.5}});
  SampleMatrix m;
  m.rows = 2;
  m.cols = 2;
  m.data = {1.0, -1.0, 2.0, 3.0};
  const std::vector<double> vals = eval_sums(pair, m);
  CHECK(vals[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(vals[1] == doctest::Approx(6.0).epsilon(1e-14));

  const std::vector<double> zeros = eval_sums(SymmetricKernel(2, 2), m);
  CHECK(zeros == std::vector<double>{0.0, 0.0});

  const SymmetricKernel lin = build_symmetric(1, 2, {{{1}, 0.25}, {{2}, 2.0}});
  const std::vector<double> linear = eval_sums(lin, m);
  CHECK(linear[0] == doctest::Approx(0.25 - 2.0).epsilon(1e-14));

  SampleMatrix narrow;
  narrow.rows = 1;
  narrow.cols = 1;
  narrow.data = {1.0};
  CHECK_THROWS_AS(eval_sums(pair, narrow), WidthMismatchError);
}

TEST_CASE("w1 on a quantile grid is small and matches quadrature") {
  const int n = 10000;
  std::vector<double> samples;
  samples.reserve(n);
  for (int j = 1; j <= n; ++j) {
    samples.push_back(normal_quantile((j - 0.5) / n));
  }
  const Distances d = distances(samples, 1.0);
  CHECK(d.w1 <= 2e-3);
  const double oracle = oracles::w1_quadrature(samples, 1.0);
  CHECK(d.w1 == doctest::Approx(oracle).epsilon(2e-4));
  CHECK(std::abs(d.w1 - oracle) <= 1e-5);
}

TEST_CASE("w1 matches quadrature on rough samples") {
  RngStream rng(31, 0);
  std::vector<double> samples;
  for (int i = 0; i < 200; ++i) samples.push_back(3.0 * (rng.next_uniform() - 0.5));
  for (double s2 : {0.5, 1.0, 2.0}) {
    const Distances d = distances(samples, s2);
    const double oracle = oracles::w1_quadrature(samples, s2);
    CHECK(std::abs(d.w1 - oracle) <= 1e-5);
  }
}

TEST_CASE("ks of a point mass against the normal is one half") {
  const std::vector<double> zeros(100, 0.0);
  const Distances d = distances(zeros, 1.0);
  CHECK(d.ks == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("distances are invariant under duplication and permutation") {
  RngStream rng(32, 0);
  std::vector<double> samples;
  for (int i = 0; i < 117; ++i) samples.push_back(normal_quantile(rng.next_uniform()));

  const Distances base = distances(samples, 1.0);

  std::vector<double> doubled = samples;
  doubled.insert(doubled.end(), samples.begin(), samples.end());
  const Distances dd = distances(doubled, 1.0);
  CHECK(dd.w1 == doctest::Approx(base.w1).epsilon(1e-12));
  CHECK(dd.ks == doctest::Approx(base.ks).epsilon(1e-12));

  std::vector<double> shuffled = samples;
  std::reverse(shuffled.begin(), shuffled.end());
  std::swap(shuffled[3], shuffled[77]);
  const Distances ds = distances(shuffled, 1.0);
  CHECK(ds.w1 == base.w1);
  CHECK(ds.ks == base.ks);

  CHECK_THROWS_AS(distances({1.0}, 1.0), InsufficientSamplesError);
  CHECK_THROWS_AS(distances(samples, 0.0), NonpositiveVarianceError);
}

TEST_CASE("simulate is consistent with sample_matrix plus eval_sums") {
  const SymmetricKernel pair = build_symmetric(2, 3, {{{1, 2}, 0.5}, {{2, 3}, 0.25}});
  const WeightVector w({1.0, 2.0, 0.5});
  const MomentProvider p = MomentProvider::poisson(w);
  const RngSpec rng{77, 4};
  const int n = 501;

  const SimulationReport rep = simulate(pair, w, p, n, rng, variance_exact(pair), 2);
  const SampleMatrix m = sample_matrix(p, w, 3, n, rng);
  const std::vector<double> vals = eval_sums(pair, m);
  KahanSum mean;
  for (double v : vals) mean.add(v);
  CHECK(rep.mean == doctest::Approx(mean.value() / n).epsilon(1e-12));
  const Distances d = distances(vals, variance_exact(pair));
  CHECK(rep.w1 == doctest::Approx(d.w1).epsilon(1e-12));
  CHECK(rep.ks == doctest::Approx(d.ks).epsilon(1e-12));
}

TEST_CASE("simulate is deterministic across thread counts") {
  const SymmetricKernel pair = build_symmetric(2, 4, {{{1, 2}, 0.5}, {{3, 4}, 0.5}});
  const WeightVector w = WeightVector::ones(4);
  const RngSpec rng{123, 8};
  const SimulationReport r1 = simulate(pair, w, MomentProvider::gaussian(), 4001, rng, 0.5, 1);
  const SimulationReport r8 = simulate(pair, w, MomentProvider::gaussian(), 4001, rng, 0.5, 8);
  CHECK(r1.mean == r8.mean);
  CHECK(r1.variance == r8.variance);
  CHECK(r1.w1 == r8.w1);
  CHECK(r1.ks == r8.ks);
  CHECK(r1.m4_empirical == r8.m4_empirical);
  CHECK(r1.se_m4 == r8.se_m4);
}

TEST_CASE("simulate near-gaussian poisson coordinate") {
  const SymmetricKernel one = build_symmetric(1, 1, {{{1}, 1.0}});
  const WeightVector w({1e4});
  const SimulationReport rep = simulate(one, w, MomentProvider::poisson(w), 100000,
                                        RngSpec{4242, 8}, 1.0, 2);
  CHECK(rep.w1 <= 0.02);
  CHECK(std::abs(rep.variance - 1.0) <= 5.0 * std::sqrt(2.0 / 100000.0) * 2.0);
}

TEST_CASE("simulate keeps the product-of-gaussians law away from normal") {
  const SymmetricKernel pair = build_symmetric(2, 2, {{{1, 2}, 0.5}});
  const SimulationReport rep = simulate(pair, WeightVector::ones(2),
                                        MomentProvider::gaussian(), 100000,
                                        RngSpec{9, 8}, 1.0, 2);
  CHECK(rep.ks >= 0.05);
}

TEST_CASE("simulate works at the degenerate size two") {
  const SymmetricKernel one = build_symmetric(1, 1, {{{1}, 1.0}});
  const WeightVector w({1.0});
  const SimulationReport rep =
      simulate(one, w, MomentProvider::rademacher(), 2, RngSpec{0, 1}, 1.0, 1);
  CHECK(rep.n_samples == 2);
  CHECK(rep.ks > 0.0);
}

TEST_CASE("empirical moments track the exact ones within five standard errors") {
  RngStream seeder(404, 0);
  int ok_var = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    const SymmetricKernel f = oracles::random_kernel(seeder, 2, 5, 4);
    const WeightVector w = oracles::random_weights(seeder, 5, 0.5, 4.0);
    const MomentProvider prov = MomentProvider::poisson(w);
    const int n = 20000;
    const RngSpec rng{seeder.next_u64(), 4};
    const SampleMatrix m = sample_matrix(prov, w, 5, n, rng);
    const std::vector<double> vals = eval_sums(f, m);
    KahanSum s2, s4;
    for (double v : vals) {
      s2.add(v * v);
      s4.add(v * v * v * v);
    }
    const double emp_var = s2.value() / n;
    const double se_var = std::sqrt((s4.value() / n - emp_var * emp_var) / n);
    if (std::abs(emp_var - variance_exact(f)) <= 5.0 * se_var) ++ok_var;
  }
  CHECK(ok_var >= trials - 1);
}
