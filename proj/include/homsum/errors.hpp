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

#ifndef HOMSUM_ERRORS_HPP_
#define HOMSUM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace homsum {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HOMSUM_DEFINE_ERROR(NAME)              \
  class NAME : public Error {                  \
   public:                                     \
    using Error::Error;                        \
  };

// Kernel construction and lookup.
HOMSUM_DEFINE_ERROR(RepeatedIndexError)
HOMSUM_DEFINE_ERROR(DuplicateEntryError)
HOMSUM_DEFINE_ERROR(IndexOutOfRangeError)
HOMSUM_DEFINE_ERROR(OrderMismatchError)
HOMSUM_DEFINE_ERROR(WeightLengthMismatchError)

// Contractions and product-formula operators.
HOMSUM_DEFINE_ERROR(InvalidContractionIndicesError)
HOMSUM_DEFINE_ERROR(SizeMismatchError)
HOMSUM_DEFINE_ERROR(InvalidOrderError)
HOMSUM_DEFINE_ERROR(OrderTooSmallError)
HOMSUM_DEFINE_ERROR(OrderTooLargeError)

// Moment machinery.
HOMSUM_DEFINE_ERROR(MissingCustomMomentError)
HOMSUM_DEFINE_ERROR(BudgetExceededError)

// Sampling and distances.
HOMSUM_DEFINE_ERROR(UnsupportedSamplerError)
HOMSUM_DEFINE_ERROR(WidthMismatchError)
HOMSUM_DEFINE_ERROR(DomainError)
HOMSUM_DEFINE_ERROR(InsufficientSamplesError)
HOMSUM_DEFINE_ERROR(NonpositiveVarianceError)

// Multidimensional diagnostics.
HOMSUM_DEFINE_ERROR(DimensionMismatchError)

// File I/O.
HOMSUM_DEFINE_ERROR(ParseError)

#undef HOMSUM_DEFINE_ERROR

}  // namespace homsum

#endif  // HOMSUM_ERRORS_HPP_
