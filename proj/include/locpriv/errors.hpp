// Copyright 2026 The locpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOCPRIV_ERRORS_HPP_
#define LOCPRIV_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace locpriv {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define LOCPRIV_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

LOCPRIV_DEFINE_ERROR(EmptyInput);
LOCPRIV_DEFINE_ERROR(DegenerateBody);
LOCPRIV_DEFINE_ERROR(OriginOutside);
LOCPRIV_DEFINE_ERROR(DimensionMismatch);
LOCPRIV_DEFINE_ERROR(ZeroEvidence);
LOCPRIV_DEFINE_ERROR(EmptySet);
LOCPRIV_DEFINE_ERROR(InvalidDelta);
LOCPRIV_DEFINE_ERROR(InvalidEpsilon);
LOCPRIV_DEFINE_ERROR(InvalidParams);
LOCPRIV_DEFINE_ERROR(EmptyList);
LOCPRIV_DEFINE_ERROR(IoError);
LOCPRIV_DEFINE_ERROR(FormatError);
LOCPRIV_DEFINE_ERROR(OutOfRange);
LOCPRIV_DEFINE_ERROR(InvalidTiming);
LOCPRIV_DEFINE_ERROR(UnreachableDestination);
LOCPRIV_DEFINE_ERROR(InsufficientSamples);

#undef LOCPRIV_DEFINE_ERROR

}  // namespace locpriv

#endif  // LOCPRIV_ERRORS_HPP_
