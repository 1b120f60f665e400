// Copyright 2026 The Bugsol Authors.
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

#ifndef BUGSOL_ERROR_H_
#define BUGSOL_ERROR_H_

#include <stdexcept>
#include <string>

namespace bugsol {

// Base of every error raised by the library. The CLI maps subclasses to exit
// codes: ValidationError family -> 1, IoError -> 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invariant or argument violation (bad input value, bad config).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Out-of-range step / index.
class BoundsError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Malformed serialized input. Carries the 1-based line number when known.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, long line = 0)
      : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + what
                                 : what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

// A record that cannot be serialized, naming the offending field.
class SchemaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bugsol

#endif  // BUGSOL_ERROR_H_
