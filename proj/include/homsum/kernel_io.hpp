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

#ifndef HOMSUM_KERNEL_IO_HPP_
#define HOMSUM_KERNEL_IO_HPP_

#include <string>
#include <utility>

#include "homsum/kernels.hpp"

namespace homsum::io {

/// Kernel files are plain JSON:
///   {"q": 2, "N": 2, "lambda": [2.0, 2.0],
///    "entries": [{"idx": [1, 2], "val": 0.5}]}
/// "lambda" is optional and defaults to all ones. Indices are 1-based.
struct KernelFile {
  SymmetricKernel kernel;
  WeightVector weights;
};

/// Parses and validates. Malformed JSON or wrong field shapes raise
/// ParseError with positional context; semantic violations raise the kernel
/// construction errors.
KernelFile parse_kernel_text(const std::string& text);

KernelFile load_kernel_file(const std::string& path);

/// Canonical serialization: increasing tuples in order, numbers with 17
/// significant digits. parse(serialize(k)) reproduces the kernel exactly.
std::string serialize_kernel(const SymmetricKernel& kernel, const WeightVector& weights);

}  // namespace homsum::io

#endif  // HOMSUM_KERNEL_IO_HPP_
