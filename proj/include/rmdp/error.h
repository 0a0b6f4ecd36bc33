// Copyright 2026 The rmdp Authors. All rights reserved.
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

#ifndef RMDP_ERROR_H_
#define RMDP_ERROR_H_

#include <stdexcept>
#include <string>

namespace rmdp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed model, policy, or dimension mismatch.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A perturbation that leaves the probability simplex.
class InvalidPerturbationError : public Error {
 public:
  using Error::Error;
};

// The uncertainty set is empty for some state-action pair.
class InfeasibleSetError : public Error {
 public:
  using Error::Error;
};

// The operation does not support this uncertainty-set variant.
class UnsupportedSetError : public Error {
 public:
  using Error::Error;
};

// Numeric parameter outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rmdp

#endif  // RMDP_ERROR_H_
