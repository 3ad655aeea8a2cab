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

#include "homsum/contract.hpp"

#include <algorithm>
#include <cmath>

#include "homsum/numeric.hpp"

namespace homsum {

GeneralKernel star(const GeneralKernel& h1, const GeneralKernel& h2, int r, int l,
                   const WeightVector& w) {
  const int p = h1.order();
  const int q = h2.order();
  if (l < 0 || l > r || r > std::min(p, q)) {
    throw InvalidContractionIndicesError("need 0 <= l <= r <= min(order, order)");
  }
  if (h1.size() != h2.size()) {
    throw SizeMismatchError("contraction of kernels with different sizes");
  }
  if (h1.size() > w.size()) {
    throw SizeMismatchError("kernel size exceeds weight vector length");
  }

  const int out_order = p + q - r - l;
  // Sparse index-join: bucket h2's support by its first r coordinates, then
  // join each h1 tuple against the matching bucket.
  std::map<Tuple, std::vector<std::pair<const Tuple*, double>>> buckets;
  for (const auto& [tuple, val] : h2.coefficients()) {
    Tuple prefix(tuple.begin(), tuple.begin() + r);
    buckets[std::move(prefix)].emplace_back(&tuple, val);
  }

  std::map<Tuple, double> out;
  Tuple out_tuple(static_cast<std::size_t>(out_order));
  for (const auto& [t1, v1] : h1.coefficients()) {
    const Tuple prefix(t1.begin(), t1.begin() + r);
    auto bucket = buckets.find(prefix);
    if (bucket == buckets.end()) continue;

    double factor = v1;
    std::size_t pos = 0;
    for (int j = l; j < r; ++j) {
      const int idx = t1[static_cast<std::size_t>(j)];
      factor /= std::sqrt(w.lambda(idx));
      out_tuple[pos++] = idx;
    }
    for (int j = r; j < p; ++j) out_tuple[pos++] = t1[static_cast<std::size_t>(j)];

    const std::size_t tail_start = pos;
    for (const auto& [t2_ptr, v2] : bucket->second) {
      const Tuple& t2 = *t2_ptr;
      pos = tail_start;
      for (int j = r; j < q; ++j) out_tuple[pos++] = t2[static_cast<std::size_t>(j)];
      out[out_tuple] += factor * v2;
    }
  }
  return GeneralKernel(out_order, h1.size(), std::move(out));
}

GeneralKernel gamma_operator(const GeneralKernel& h1, const GeneralKernel& h2, int k,
                             const WeightVector& w) {
  const int p = h1.order();
  const int q = h2.order();
  if (k < std::abs(q - p) || k > p + q) {
    throw InvalidOrderError("gamma operator requires |q-p| <= k <= p+q");
  }
  std::map<Tuple, double> out;
  for (int r = 0; r <= std::min(p, q); ++r) {
    for (int l = 0; l <= r; ++l) {
      if (p + q - r - l != k) continue;
      const double coeff = factorial(r) * binomial(p, r) * binomial(q, r) * binomial(r, l);
      const GeneralKernel term = symmetrize(star(h1, h2, r, l, w));
      for (const auto& [tuple, val] : term.coefficients()) {
        out[tuple] += coeff * val;
      }
    }
  }
  return GeneralKernel(k, h1.size(), std::move(out));
}

double ContractionTable::max_offdiagonal_norm() const {
  double best = 0.0;
  for (int r = 1; r < order; ++r) {
    auto it = star_norms.find({r, r});
    if (it != star_norms.end()) best = std::max(best, it->second);
  }
  return best;
}

ContractionTable contraction_table(const SymmetricKernel& f, const WeightVector& w) {
  ContractionTable table;
  table.order = f.order();
  table.size = f.size();
  const GeneralKernel g = embed(f);
  for (int r = 1; r <= f.order(); ++r) {
    for (int l = 0; l <= r; ++l) {
      table.star_norms[{r, l}] = l2_norm(star(g, g, r, l, w));
    }
  }
  table.g4_integral = p_integral(g, 4, w);
  if (f.order() == 1) {
    KahanSum stat;
    for (const auto& [tuple, val] : f.entries()) {
      const double sq = val * val;
      stat.add(sq * sq / w.lambda(tuple[0]));
    }
    table.cond3a = stat.value();
  }
  return table;
}

std::vector<InequalityResidual> prop41_residuals(const SymmetricKernel& f,
                                                 const WeightVector& w) {
  const int q = f.order();
  if (q < 2) throw OrderTooSmallError("inequality residuals require order >= 2");
  if (f.size() > w.size()) {
    throw SizeMismatchError("kernel size exceeds weight vector length");
  }

  const GeneralKernel g = embed(f);
  const double alpha = w.alpha();
  std::map<std::pair<int, int>, double> norm2;
  for (int r = 1; r <= q; ++r) {
    for (int l = 0; l <= r; ++l) {
      const double n = l2_norm(star(g, g, r, l, w));
      norm2[{r, l}] = n * n;
    }
  }
  const double g4 = p_integral(g, 4, w);
  KahanSum f4_ordered;
  for (const auto& [tuple, val] : f.entries()) {
    const double sq = val * val;
    f4_ordered.add(factorial(q) * sq * sq);
  }

  std::vector<InequalityResidual> out;
  const double alpha_q = std::pow(alpha, q);
  out.push_back({"a", norm2[{q - 1, q - 1}], alpha_q * g4,
                 norm2[{q - 1, q - 1}] - alpha_q * g4});
  out.push_back({"a'", g4, f4_ordered.value() / alpha_q,
                 f4_ordered.value() / alpha_q - g4});
  for (int l = 1; l <= q - 1; ++l) {
    const double rhs = std::pow(alpha, -(q - l)) * norm2[{l, l}];
    out.push_back({"b1[l=" + std::to_string(l) + "]", norm2[{q, l}], rhs,
                   rhs - norm2[{q, l}]});
  }
  for (int l = 1; l <= q - 1; ++l) {
    for (int r = l; r <= q - 1; ++r) {
      const double rhs = std::pow(alpha, -(r - l)) * norm2[{l, l}];
      out.push_back({"b2[r=" + std::to_string(r) + ",l=" + std::to_string(l) + "]",
                     norm2[{r, l}], rhs, rhs - norm2[{r, l}]});
    }
  }
  return out;
}

}  // namespace homsum
