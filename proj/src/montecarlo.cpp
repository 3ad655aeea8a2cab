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

#include "homsum/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "homsum/numeric.hpp"

namespace homsum {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

inline std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
  for (auto& s : state_) s = splitmix64(x);
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl64(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl64(state_[3], 45);
  return result;
}

double RngStream::next_uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_quantile(double u) {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw DomainError("normal quantile requires u in (0, 1)");
  }
  // Acklam's rational approximation.
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (u < p_low) {
    const double r = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  } else if (u <= 1.0 - p_low) {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double r = std::sqrt(-2.0 * std::log(1.0 - u));
    x = -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }
  // One Halley step on the cdf.
  const double e = normal_cdf(x) - u;
  const double g = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
  x -= g / (1.0 + 0.5 * x * g);
  return x;
}

double sample_gaussian(RngStream& rng) { return normal_quantile(rng.next_uniform()); }

double sample_rademacher(RngStream& rng) {
  return (rng.next_u64() >> 63) != 0 ? 1.0 : -1.0;
}

namespace {

long sample_poisson_inversion(RngStream& rng, double lambda) {
  const double u = rng.next_uniform();
  double p = std::exp(-lambda);
  double cum = p;
  long k = 0;
  const long cap = static_cast<long>(lambda + 40.0 * std::sqrt(lambda) + 60.0);
  while (u > cum && k < cap) {
    ++k;
    p *= lambda / static_cast<double>(k);
    cum += p;
  }
  return k;
}

// Transformed rejection with squeeze (Hormann's PTRS).
long sample_poisson_ptrs(RngStream& rng, double lambda) {
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * std::sqrt(lambda);
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    const double u = rng.next_uniform() - 0.5;
    const double v = rng.next_uniform();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<long>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const long k = static_cast<long>(kf);
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        kf * loglam - lambda - log_factorial(k)) {
      return k;
    }
  }
}

}  // namespace

long sample_poisson_count(RngStream& rng, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  return lambda <= 30.0 ? sample_poisson_inversion(rng, lambda)
                        : sample_poisson_ptrs(rng, lambda);
}

double sample_poisson_normalized(RngStream& rng, double lambda) {
  const double k = static_cast<double>(sample_poisson_count(rng, lambda));
  return (k - lambda) / std::sqrt(lambda);
}

namespace {

void check_sampler(const MomentProvider& provider, const WeightVector& w, int width) {
  if (provider.kind() == MomentProvider::Kind::custom) {
    throw UnsupportedSamplerError("custom moment tables have no sampler");
  }
  if (provider.kind() == MomentProvider::Kind::poisson && width > w.size()) {
    throw WeightLengthMismatchError("sampling width exceeds weight vector length");
  }
}

inline double draw_coordinate(const MomentProvider& provider, const WeightVector& w,
                              int index, RngStream& rng) {
  switch (provider.kind()) {
    case MomentProvider::Kind::gaussian:
      return sample_gaussian(rng);
    case MomentProvider::Kind::rademacher:
      return sample_rademacher(rng);
    case MomentProvider::Kind::poisson:
      return sample_poisson_normalized(rng, w.lambda(index));
    case MomentProvider::Kind::custom:
      break;
  }
  throw UnsupportedSamplerError("custom moment tables have no sampler");
}

/// Runs fn(stream_index, stream_count, stream_rng) once per stream. Streams
/// own the rows j with j mod streams == stream_index, in increasing j, so the
/// produced values do not depend on the worker count.
template <typename StreamFn>
void run_streams(const RngSpec& rng, int threads, StreamFn fn) {
  const int streams = std::max(1, rng.streams);
  const int workers = std::max(1, std::min(threads, streams));
  auto run_stream = [&](int s) {
    RngStream stream_rng(rng.seed, static_cast<std::uint64_t>(s));
    fn(s, streams, stream_rng);
  };
  if (workers == 1) {
    for (int s = 0; s < streams; ++s) run_stream(s);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int wk = 0; wk < workers; ++wk) {
    pool.emplace_back([&, wk] {
      for (int s = wk; s < streams; s += workers) run_stream(s);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

SampleMatrix sample_matrix(const MomentProvider& provider, const WeightVector& w, int N,
                           int n, const RngSpec& rng) {
  if (n < 1) throw InsufficientSamplesError("need at least one sample");
  check_sampler(provider, w, N);
  SampleMatrix m;
  m.rows = n;
  m.cols = N;
  m.data.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(N), 0.0);
  run_streams(rng, 1, [&](int s, int streams, RngStream& stream_rng) {
    for (int j = s; j < n; j += streams) {
      double* out = m.data.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(N);
      for (int i = 1; i <= N; ++i) out[i - 1] = draw_coordinate(provider, w, i, stream_rng);
    }
  });
  return m;
}

std::vector<double> eval_sums(const SymmetricKernel& f, const SampleMatrix& samples) {
  if (samples.cols < f.size()) {
    throw WidthMismatchError("sample width below kernel size");
  }
  const double qfact = factorial(f.order());
  std::vector<double> out(static_cast<std::size_t>(samples.rows), 0.0);
  for (int row = 0; row < samples.rows; ++row) {
    const double* x =
        samples.data.data() + static_cast<std::size_t>(row) * static_cast<std::size_t>(samples.cols);
    KahanSum sum;
    for (const auto& [tuple, val] : f.entries()) {
      double term = val;
      for (int idx : tuple) term *= x[idx - 1];
      sum.add(term);
    }
    out[static_cast<std::size_t>(row)] = qfact * sum.value();
  }
  return out;
}

namespace {

// d/du of the antiderivative of Phi^{-1}: int_a^b Phi^{-1}(u) du
// = pdf(Phi^{-1}(a)) - pdf(Phi^{-1}(b)), with the boundary values -> 0.
inline double pdf_at_quantile(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return normal_pdf(normal_quantile(u));
}

}  // namespace

Distances distances(std::vector<double> samples, double sigma2) {
  const std::size_t n = samples.size();
  if (n < 2) throw InsufficientSamplesError("need at least two samples");
  if (!(sigma2 > 0.0)) throw NonpositiveVarianceError("target variance must be positive");
  std::sort(samples.begin(), samples.end());
  const double sigma = std::sqrt(sigma2);
  const double inv_n = 1.0 / static_cast<double>(n);

  KahanSum w1;
  double ks = 0.0;
  double pdf_left = 0.0;  // pdf at quantile of the left segment edge
  for (std::size_t j = 0; j < n; ++j) {
    const double a = static_cast<double>(j) * inv_n;
    const double b = static_cast<double>(j + 1) * inv_n;
    const double x = samples[j];
    const double pdf_right = pdf_at_quantile(b);
    const double ustar = normal_cdf(x / sigma);
    if (ustar <= a || ustar >= b) {
      w1.add(std::abs(x * (b - a) - sigma * (pdf_left - pdf_right)));
    } else {
      const double pdf_star = pdf_at_quantile(ustar);
      w1.add(std::abs(x * (ustar - a) - sigma * (pdf_left - pdf_star)) +
             std::abs(x * (b - ustar) - sigma * (pdf_star - pdf_right)));
    }
    pdf_left = pdf_right;

    ks = std::max(ks, std::max(ustar - a, b - ustar));
  }
  return Distances{w1.value(), ks};
}

SimulationReport simulate(const SymmetricKernel& f, const WeightVector& w,
                          const MomentProvider& provider, int n, const RngSpec& rng,
                          double sigma2, int threads) {
  if (n < 2) throw InsufficientSamplesError("need at least two samples");
  check_sampler(provider, w, f.size());
  const int N = f.size();
  const double qfact = factorial(f.order());

  std::vector<double> values(static_cast<std::size_t>(n), 0.0);
  run_streams(rng, threads, [&](int s, int streams, RngStream& stream_rng) {
    std::vector<double> x(static_cast<std::size_t>(N));
    for (int j = s; j < n; j += streams) {
      for (int i = 1; i <= N; ++i) {
        x[static_cast<std::size_t>(i - 1)] = draw_coordinate(provider, w, i, stream_rng);
      }
      KahanSum sum;
      for (const auto& [tuple, val] : f.entries()) {
        double term = val;
        for (int idx : tuple) term *= x[static_cast<std::size_t>(idx - 1)];
        sum.add(term);
      }
      values[static_cast<std::size_t>(j)] = qfact * sum.value();
    }
  });

  SimulationReport report;
  report.n_samples = n;
  KahanSum mean_sum;
  for (double v : values) mean_sum.add(v);
  report.mean = mean_sum.value() / n;

  KahanSum var_sum;
  KahanSum m4_sum;
  for (double v : values) {
    const double d = v - report.mean;
    var_sum.add(d * d);
    m4_sum.add(v * v * v * v);
  }
  report.variance = var_sum.value() / (n - 1);
  report.m4_empirical = m4_sum.value() / n;

  KahanSum m4_var_sum;
  for (double v : values) {
    const double d = v * v * v * v - report.m4_empirical;
    m4_var_sum.add(d * d);
  }
  report.se_m4 = std::sqrt(m4_var_sum.value() / (static_cast<double>(n) - 1.0) /
                           static_cast<double>(n));

  const Distances d = distances(values, sigma2);
  report.w1 = d.w1;
  report.ks = d.ks;
  return report;
}

}  // namespace homsum
