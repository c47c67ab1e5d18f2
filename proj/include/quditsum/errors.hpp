// Copyright 2026 The quditsum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUDITSUM_ERRORS_HPP
#define QUDITSUM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace quditsum {

// Argument outside the mathematical domain of an operation (digit out of
// range, p outside [0,1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A precondition on the *shape* of the input was violated: non-unitary
// matrix, state not of the required form, incompatible configuration.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The request would exceed a configured size cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace quditsum

#endif  // QUDITSUM_ERRORS_HPP
