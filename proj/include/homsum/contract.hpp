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

#ifndef HOMSUM_CONTRACT_HPP_
#define HOMSUM_CONTRACT_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homsum/kernels.hpp"

namespace homsum {

/// Star contraction h1 *_r^l h2: identify r coordinates between the kernels
/// and integrate l of them out. Output order is order(h1)+order(h2)-r-l,
/// with the surviving identified coordinates first, then the free
/// coordinates of h1, then those of h2.
///
/// On the orthonormal indicator basis an integrated coordinate pair (a, b)
/// contributes <g_a, g_b> = delta_ab, and an identified-but-kept pair
/// contributes g_a g_b = delta_ab lambda_a^{-1/2} g_a. r = l = 0 is the
/// plain tensor product; r = l needs no lambda factors at all.
GeneralKernel star(const GeneralKernel& h1, const GeneralKernel& h2, int r, int l,
                   const WeightVector& w);

/// The order-k coefficient kernel of the product of two multiple integrals:
///   sum over (r, l) with p+q-r-l = k of
///   r! C(p,r) C(q,r) C(r,l) sym(h1 *_r^l h2).
/// Valid for |q-p| <= k <= p+q.
GeneralKernel gamma_operator(const GeneralKernel& h1, const GeneralKernel& h2, int k,
                             const WeightVector& w);

/// All contraction norms of g = embed(f) against itself, plus the fourth
/// L4-type integral. The (r = q, l = q) row holds the scalar |<g, g>|, i.e.
/// the squared L2 norm of g.
struct ContractionTable {
  int order = 0;
  int size = 0;
  /// (r, l) -> ||g *_r^l g||_{L2} for 1 <= r <= q, 0 <= l <= r.
  std::map<std::pair<int, int>, double> star_norms;
  double g4_integral = 0.0;
  /// Present when q = 1: sum_i f(i)^4 / lambda_i.
  std::optional<double> cond3a;

  /// max over r = 1..q-1 of ||g *_r^r g|| (0 when q = 1).
  double max_offdiagonal_norm() const;
};

ContractionTable contraction_table(const SymmetricKernel& f, const WeightVector& w);

struct InequalityResidual {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // oriented so the inequality holds iff slack >= 0
};

/// Residuals of the contraction-norm inequalities controlling the chain from
/// ||g *_l^l g|| to every other contraction norm and to the fourth integral:
///   (a)   ||g *_{q-1}^{q-1} g||^2 >= alpha^q int g^4
///   (a')  int g^4 <= alpha^{-q} sum_ordered f^4
///   (b1)  ||g *_q^l g||^2 <= alpha^{-(q-l)} ||g *_l^l g||^2,  1 <= l <= q-1
///   (b2)  ||g *_r^l g||^2 <= alpha^{-(r-l)} ||g *_l^l g||^2,  1 <= l <= r <= q-1
/// Requires q >= 2.
std::vector<InequalityResidual> prop41_residuals(const SymmetricKernel& f,
                                                 const WeightVector& w);

}  // namespace homsum

#endif  // HOMSUM_CONTRACT_HPP_
