// Copyright 2026 The fmixkit Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace fmix {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar argument (alpha, delta, lambda, class index...) is out of its domain.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Dimensions are empty, zero, too many, or do not agree between operands.
class InvalidShape : public Error {
 public:
  using Error::Error;
};

/// Data content is unusable (non-finite values, malformed log-probabilities).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An operation guarded against quadratic blow-up was given too large an input.
class SizeLimit : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read, parsed or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fmix
