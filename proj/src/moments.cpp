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

#include "homsum/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "homsum/numeric.hpp"

namespace homsum {

namespace {
constexpr int kMaxPoissonMoment = 16;
constexpr int kMaxGenericMoment = 8;
constexpr long kBruteforceWorkBudget = 10'000'000;
}  // namespace

double poisson_central_moment(int k, double lambda) {
  if (k < 0 || k > kMaxPoissonMoment) {
    throw OrderTooLargeError("poisson central moment supported for k <= " +
                             std::to_string(kMaxPoissonMoment));
  }
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  std::vector<double> t(static_cast<std::size_t>(k) + 1, 0.0);
  t[0] = 1.0;
  for (int m = 2; m <= k; ++m) {
    double acc = 0.0;
    for (int j = 0; j <= m - 2; ++j) {
      acc += binomial(m - 1, j) * t[static_cast<std::size_t>(j)];
    }
    t[static_cast<std::size_t>(m)] = lambda * acc;
  }
  return t[static_cast<std::size_t>(k)];
}

MomentProvider::MomentProvider(Kind kind, std::string name)
    : kind_(kind), name_(std::move(name)) {}

MomentProvider MomentProvider::gaussian() { return MomentProvider(Kind::gaussian, "gaussian"); }

MomentProvider MomentProvider::rademacher() {
  return MomentProvider(Kind::rademacher, "rademacher");
}

MomentProvider MomentProvider::poisson(WeightVector lambdas) {
  MomentProvider p(Kind::poisson, "poisson");
  p.lambdas_ = std::move(lambdas);
  return p;
}

MomentProvider MomentProvider::custom(std::vector<double> moments) {
  if (moments.size() < 3) {
    throw MissingCustomMomentError("custom table must provide m0, m1, m2 at least");
  }
  const double eps = 1e-12;
  if (std::abs(moments[0] - 1.0) > eps || std::abs(moments[1]) > eps ||
      std::abs(moments[2] - 1.0) > eps) {
    throw DomainError("custom moments must be centered with unit variance");
  }
  MomentProvider p(Kind::custom, "custom");
  p.custom_moments_ = std::move(moments);
  return p;
}

int MomentProvider::max_moment_order() const {
  return kind_ == Kind::poisson ? kMaxPoissonMoment : kMaxGenericMoment;
}

const WeightVector* MomentProvider::weights() const {
  return lambdas_ ? &*lambdas_ : nullptr;
}

MomentProvider::Kind MomentProvider::kind_from_name(const std::string& name) {
  if (name == "gaussian") return Kind::gaussian;
  if (name == "rademacher") return Kind::rademacher;
  if (name == "poisson") return Kind::poisson;
  if (name == "custom") return Kind::custom;
  throw DomainError("unknown provider '" + name + "'");
}

double MomentProvider::central_moment(int index, int k) const {
  if (k < 0 || k > max_moment_order()) {
    throw OrderTooLargeError("moment order " + std::to_string(k) + " beyond provider cap");
  }
  switch (kind_) {
    case Kind::gaussian: {
      if (k % 2 == 1) return 0.0;
      double dfact = 1.0;
      for (int i = k - 1; i > 1; i -= 2) dfact *= i;
      return dfact;
    }
    case Kind::rademacher:
      return k % 2 == 0 ? 1.0 : 0.0;
    case Kind::poisson: {
      if (index < 1 || index > lambdas_->size()) {
        throw IndexOutOfRangeError("poisson provider has no lambda for index " +
                                   std::to_string(index));
      }
      const double lam = lambdas_->lambda(index);
      return poisson_central_moment(k, lam) / std::pow(lam, 0.5 * k);
    }
    case Kind::custom: {
      if (static_cast<std::size_t>(k) >= custom_moments_.size()) {
        throw MissingCustomMomentError("custom table has no moment of order " +
                                       std::to_string(k));
      }
      return custom_moments_[static_cast<std::size_t>(k)];
    }
  }
  return 0.0;
}

double variance_exact(const SymmetricKernel& f) {
  const double qfact = factorial(f.order());
  KahanSum sum;
  for (const auto& [tuple, val] : f.entries()) {
    sum.add(val * val);
  }
  return qfact * qfact * sum.value();
}

namespace {

struct Factor {
  std::vector<const Tuple*> tuples;
  std::vector<double> coeffs;       // q! * value
  std::vector<int> last_pos;        // per index: last support position holding it
  int power = 0;
};

/// Depth-first expansion of E[prod_s Q_s^{p_s}] over nondecreasing support
/// selections, with two exact prunings: an index stuck at multiplicity one
/// kills the branch (first moments vanish), and the search stops touching
/// positions that can no longer cover such an index.
class ProductExpansion {
 public:
  ProductExpansion(const std::vector<std::pair<const SymmetricKernel*, int>>& raw,
                   const MomentProvider& provider)
      : provider_(provider) {
    int max_index = 0;
    for (const auto& [kernel, power] : raw) {
      if (power < 0) throw DomainError("factor power must be nonnegative");
      max_index = std::max(max_index, kernel->size());
    }
    counts_.assign(static_cast<std::size_t>(max_index) + 1, 0);
    for (const auto& [kernel, power] : raw) {
      if (power == 0) continue;
      Factor fac;
      fac.power = power;
      fac.last_pos.assign(static_cast<std::size_t>(max_index) + 1, -1);
      const double scale = factorial(kernel->order());
      int pos = 0;
      for (const auto& [tuple, val] : kernel->entries()) {
        fac.tuples.push_back(&tuple);
        fac.coeffs.push_back(scale * val);
        for (int idx : tuple) fac.last_pos[static_cast<std::size_t>(idx)] = pos;
        ++pos;
      }
      factors_.push_back(std::move(fac));
    }
    // suffix_contains_[f][i]: index i occurs in some factor after f.
    suffix_contains_.assign(factors_.size(),
                            std::vector<char>(static_cast<std::size_t>(max_index) + 1, 0));
    for (std::size_t f = factors_.size(); f-- > 1;) {
      std::vector<char>& prev = suffix_contains_[f - 1];
      const std::vector<char>& cur = suffix_contains_[f];
      const Factor& fac = factors_[f];
      for (std::size_t i = 0; i < prev.size(); ++i) {
        prev[i] = static_cast<char>(cur[i] || fac.last_pos[i] >= 0);
      }
    }
  }

  double run() {
    double coeff0 = 1.0;
    for (const Factor& fac : factors_) coeff0 *= factorial(fac.power);
    recurse(0, 0, 0, 0, coeff0);
    return total_.value();
  }

 private:
  void leaf(double coeff) {
    double prod = coeff;
    for (int idx : touched_) {
      const int c = counts_[static_cast<std::size_t>(idx)];
      if (c == 1) return;
      prod *= provider_.central_moment(idx, c);
      if (prod == 0.0) return;
    }
    total_.add(prod);
  }

  void recurse(std::size_t f, int slot, int min_pos, int run, double coeff) {
    if (f == factors_.size()) {
      leaf(coeff);
      return;
    }
    const Factor& fac = factors_[f];
    if (slot == fac.power) {
      recurse(f + 1, 0, 0, 0, coeff);
      return;
    }
    const int n_pos = static_cast<int>(fac.tuples.size());
    for (int pos = min_pos; pos < n_pos; ++pos) {
      if (++work_ > kBruteforceWorkBudget) {
        throw BudgetExceededError("bruteforce moment expansion exceeded the work guard");
      }
      bool stranded = false;
      for (int idx : touched_) {
        if (counts_[static_cast<std::size_t>(idx)] == 1 &&
            fac.last_pos[static_cast<std::size_t>(idx)] < pos &&
            !suffix_contains_[f][static_cast<std::size_t>(idx)]) {
          stranded = true;
          break;
        }
      }
      if (stranded) break;

      const Tuple& tuple = *fac.tuples[pos];
      for (int idx : tuple) {
        if (counts_[static_cast<std::size_t>(idx)]++ == 0) touched_.push_back(idx);
      }
      const int next_run = (slot > 0 && pos == min_pos) ? run + 1 : 1;
      recurse(f, slot + 1, pos, next_run,
              coeff * fac.coeffs[static_cast<std::size_t>(pos)] / next_run);
      for (int idx : tuple) {
        if (--counts_[static_cast<std::size_t>(idx)] == 0) {
          touched_.erase(std::find(touched_.begin(), touched_.end(), idx));
        }
      }
    }
  }

  const MomentProvider& provider_;
  std::vector<Factor> factors_;
  std::vector<std::vector<char>> suffix_contains_;
  std::vector<int> counts_;
  std::vector<int> touched_;
  long work_ = 0;
  KahanSum total_;
};

}  // namespace

double product_moment_bruteforce(
    const std::vector<std::pair<const SymmetricKernel*, int>>& factors,
    const MomentProvider& provider) {
  return ProductExpansion(factors, provider).run();
}

double moment_bruteforce(const SymmetricKernel& f, const MomentProvider& provider, int m) {
  if (m < 0 || m > 4) throw DomainError("bruteforce moments supported for m <= 4");
  return product_moment_bruteforce({{&f, m}}, provider);
}

double fourth_moment_structured(const SymmetricKernel& f, const WeightVector& w) {
  if (f.size() > w.size()) {
    throw WeightLengthMismatchError("kernel size exceeds weight vector length");
  }
  const int q = f.order();
  const GeneralKernel g = embed(f);
  const double norm2 = inner_product(g, g);
  const double qfact = factorial(q);

  KahanSum total;
  total.add(qfact * qfact * norm2 * norm2);
  for (int k = 1; k <= 2 * q - 1; ++k) {
    const double n = l2_norm(gamma_operator(g, g, k, w));
    total.add(factorial(k) * n * n);
  }
  KahanSum top;
  top.add(2.0 * qfact * qfact * norm2 * norm2);
  const double qfact2 = qfact * qfact;
  for (int p = 1; p <= q - 1; ++p) {
    const double denom = factorial(p) * factorial(q - p);
    const double c = (qfact2 / denom) * (qfact2 / denom);
    const double n = l2_norm(star(g, g, p, p, w));
    top.add(c * n * n);
  }
  total.add(top.value());
  return total.value();
}

double cross_covariance(const SymmetricKernel& f1, const SymmetricKernel& f2) {
  if (f1.size() != f2.size()) {
    throw SizeMismatchError("cross covariance requires kernels of equal size");
  }
  if (f1.order() != f2.order()) return 0.0;
  const double qfact = factorial(f1.order());
  KahanSum sum;
  for (const auto& [tuple, val] : f1.entries()) {
    auto it = f2.entries().find(tuple);
    if (it != f2.entries().end()) sum.add(val * it->second);
  }
  return qfact * qfact * sum.value();
}

std::string to_string(DiagnosticsReport::Method m) {
  switch (m) {
    case DiagnosticsReport::Method::none: return "none";
    case DiagnosticsReport::Method::bruteforce: return "bruteforce";
    case DiagnosticsReport::Method::structured: return "structured";
    case DiagnosticsReport::Method::both: return "both";
  }
  return "none";
}

DiagnosticsReport diagnose(const SymmetricKernel& f, const WeightVector& w,
                           const MomentProvider& provider) {
  DiagnosticsReport report;
  report.order = f.order();
  report.size = f.size();
  report.var_exact = variance_exact(f);
  report.table = contraction_table(f, w);
  report.cond3a = report.table->cond3a;

  std::optional<double> structured;
  std::optional<double> bruteforce;
  if (provider.kind() == MomentProvider::Kind::poisson) {
    try {
      structured = fourth_moment_structured(f, w);
    } catch (const OrderTooLargeError&) {
    }
  }
  try {
    bruteforce = moment_bruteforce(f, provider, 4);
  } catch (const BudgetExceededError&) {
  }

  if (structured && bruteforce) {
    report.method = DiagnosticsReport::Method::both;
    report.m4_exact = *structured;
  } else if (structured) {
    report.method = DiagnosticsReport::Method::structured;
    report.m4_exact = *structured;
  } else if (bruteforce) {
    report.method = DiagnosticsReport::Method::bruteforce;
    report.m4_exact = *bruteforce;
  } else {
    report.method = DiagnosticsReport::Method::none;
    report.m4_exact = std::numeric_limits<double>::quiet_NaN();
  }
  report.gap = report.m4_exact - 3.0 * report.var_exact * report.var_exact;
  return report;
}

}  // namespace homsum
