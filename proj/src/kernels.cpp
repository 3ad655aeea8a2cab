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

#include "homsum/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "homsum/numeric.hpp"

namespace homsum {

namespace {

void check_tuple_range(const Tuple& t, int size) {
  for (int i : t) {
    if (i < 1 || i > size) {
      throw IndexOutOfRangeError("index " + std::to_string(i) + " outside [1, " +
                                 std::to_string(size) + "]");
    }
  }
}

void check_size(int size) {
  if (size < 1 || size > kMaxSize) {
    throw IndexOutOfRangeError("size N must lie in [1, " + std::to_string(kMaxSize) + "]");
  }
}

}  // namespace

WeightVector::WeightVector(std::vector<double> lambda) : lambda_(std::move(lambda)) {
  if (lambda_.empty()) throw DomainError("weight vector must be nonempty");
  if (lambda_.size() > static_cast<std::size_t>(kMaxSize)) {
    throw IndexOutOfRangeError("weight vector longer than " + std::to_string(kMaxSize));
  }
  double alpha = lambda_[0];
  for (double v : lambda_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("every lambda must be a positive finite real");
    }
    alpha = std::min(alpha, v);
  }
  alpha_ = alpha;
}

WeightVector WeightVector::ones(int n) {
  return WeightVector(std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

SymmetricKernel::SymmetricKernel(int order, int size) : order_(order), size_(size) {
  if (order < 1) throw InvalidOrderError("kernel order must be positive");
  if (order > kMaxUserOrder) {
    throw OrderTooLargeError("kernel order capped at " + std::to_string(kMaxUserOrder));
  }
  check_size(size);
}

double SymmetricKernel::value(const Tuple& t) const {
  if (static_cast<int>(t.size()) != order_) {
    throw OrderMismatchError("tuple arity does not match kernel order");
  }
  check_tuple_range(t, size_);
  Tuple sorted = t;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) return 0.0;
  }
  auto it = entries_.find(sorted);
  return it == entries_.end() ? 0.0 : it->second;
}

SymmetricKernel build_symmetric(int order, int size,
                                const std::vector<std::pair<Tuple, double>>& raw_entries) {
  SymmetricKernel kernel(order, size);
  for (const auto& [tuple, val] : raw_entries) {
    if (static_cast<int>(tuple.size()) != order) {
      throw OrderMismatchError("entry tuple has " + std::to_string(tuple.size()) +
                               " components, expected " + std::to_string(order));
    }
    check_tuple_range(tuple, size);
    Tuple canonical = tuple;
    std::sort(canonical.begin(), canonical.end());
    for (std::size_t i = 1; i < canonical.size(); ++i) {
      if (canonical[i] == canonical[i - 1]) {
        throw RepeatedIndexError("tuple has repeated index " + std::to_string(canonical[i]));
      }
    }
    if (kernel.entries_.count(canonical) != 0) {
      throw DuplicateEntryError("two entries canonicalize to the same tuple");
    }
    if (std::abs(val) < kCoefficientDropTolerance) continue;
    kernel.entries_.emplace(std::move(canonical), val);
  }
  return kernel;
}

GeneralKernel::GeneralKernel(int order, int size) : order_(order), size_(size) {
  if (order < 0) throw InvalidOrderError("kernel order must be nonnegative");
  if (order > kMaxInternalOrder) {
    throw OrderTooLargeError("kernel order capped at " + std::to_string(kMaxInternalOrder));
  }
  check_size(size);
}

GeneralKernel::GeneralKernel(int order, int size, std::map<Tuple, double> coefficients)
    : GeneralKernel(order, size) {
  for (auto it = coefficients.begin(); it != coefficients.end();) {
    if (static_cast<int>(it->first.size()) != order) {
      throw OrderMismatchError("coefficient tuple arity does not match kernel order");
    }
    check_tuple_range(it->first, size);
    if (std::abs(it->second) < kCoefficientDropTolerance) {
      it = coefficients.erase(it);
    } else {
      ++it;
    }
  }
  coefficients_ = std::move(coefficients);
}

GeneralKernel GeneralKernel::scalar(double value, int size) {
  std::map<Tuple, double> coeffs;
  coeffs.emplace(Tuple{}, value);
  return GeneralKernel(0, size, std::move(coeffs));
}

double GeneralKernel::coefficient(const Tuple& t) const {
  auto it = coefficients_.find(t);
  return it == coefficients_.end() ? 0.0 : it->second;
}

double GeneralKernel::scalar_value() const {
  if (order_ != 0) throw OrderMismatchError("scalar_value on a kernel of positive order");
  return coefficients_.empty() ? 0.0 : coefficients_.begin()->second;
}

GeneralKernel embed(const SymmetricKernel& f) {
  std::map<Tuple, double> coeffs;
  for (const auto& [tuple, val] : f.entries()) {
    Tuple perm = tuple;
    do {
      coeffs.emplace(perm, val);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return GeneralKernel(f.order(), f.size(), std::move(coeffs));
}

GeneralKernel symmetrize(const GeneralKernel& h) {
  const int k = h.order();
  if (k > kMaxSymmetrizeOrder) {
    throw OrderTooLargeError("symmetrization capped at order " +
                             std::to_string(kMaxSymmetrizeOrder));
  }
  if (k <= 1) return h;
  const double inv_fact = 1.0 / factorial(k);
  std::map<Tuple, double> coeffs;
  std::vector<int> positions(static_cast<std::size_t>(k));
  Tuple rearranged(static_cast<std::size_t>(k));
  for (const auto& [tuple, val] : h.coefficients()) {
    std::iota(positions.begin(), positions.end(), 0);
    const double share = val * inv_fact;
    do {
      for (int i = 0; i < k; ++i) {
        rearranged[static_cast<std::size_t>(i)] =
            tuple[static_cast<std::size_t>(positions[static_cast<std::size_t>(i)])];
      }
      coeffs[rearranged] += share;
    } while (std::next_permutation(positions.begin(), positions.end()));
  }
  return GeneralKernel(k, h.size(), std::move(coeffs));
}

double l2_norm(const GeneralKernel& h) {
  KahanSum sum;
  for (const auto& [tuple, val] : h.coefficients()) {
    sum.add(val * val);
  }
  return std::sqrt(sum.value());
}

double inner_product(const GeneralKernel& a, const GeneralKernel& b) {
  if (a.order() != b.order()) {
    throw OrderMismatchError("inner product requires equal orders");
  }
  KahanSum sum;
  for (const auto& [tuple, val] : a.coefficients()) {
    auto it = b.coefficients().find(tuple);
    if (it != b.coefficients().end()) sum.add(val * it->second);
  }
  return sum.value();
}

double p_integral(const GeneralKernel& h, int p, const WeightVector& w) {
  if (p != 3 && p != 4) throw DomainError("p_integral supports p in {3, 4}");
  if (h.size() > w.size()) {
    throw WeightLengthMismatchError("kernel size exceeds weight vector length");
  }
  // exponent 1 - p/2 per coordinate: -1/2 for p = 3, -1 for p = 4.
  KahanSum sum;
  for (const auto& [tuple, val] : h.coefficients()) {
    double term = 1.0;
    for (int i = 0; i < p; ++i) term *= val;
    for (int idx : tuple) {
      const double lam = w.lambda(idx);
      term *= (p == 4) ? 1.0 / lam : 1.0 / std::sqrt(lam);
    }
    sum.add(term);
  }
  return sum.value();
}

}  // namespace homsum
