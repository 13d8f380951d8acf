// Copyright 2026 The aigtkit Authors.
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

#ifndef AIGT_ERROR_H_
#define AIGT_ERROR_H_

#include <stdexcept>
#include <string>

namespace aigt {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented precondition or schema.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed corpus / cache / config input. `line` is 1-based, 0 if unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A detector is undefined for this input (zero variance, all ranks 1, ...).
// The evaluation harness counts these as excluded rather than scoring them.
class UnscorableError : public Error {
 public:
  using Error::Error;
};

// Remote endpoint failed after all retries, or returned garbage.
class RemoteError : public Error {
 public:
  using Error::Error;
};

}  // namespace aigt

#endif  // AIGT_ERROR_H_
