// Copyright 2026 The numprobe Authors
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

#ifndef NUMPROBE_ERRORS_H_
#define NUMPROBE_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace numprobe {

// Root of every error this library throws. The CLI maps subclasses onto exit
// codes, so new error kinds must derive from one of the classes below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller input: unknown language, out-of-range value, invalid config.
class UsageError : public Error {
 public:
  using Error::Error;
};

class RangeError : public UsageError {
 public:
  using UsageError::UsageError;
};

// A surface string that is not a canonical number word.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t token_position)
      : Error(what), token_position_(token_position) {}

  // Index of the first token that disagrees with every canonical reading.
  std::size_t token_position() const { return token_position_; }

 private:
  std::size_t token_position_;
};

// Malformed file contents (datasets, embeddings, checkpoints, metrics).
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  // 1-based line number, or 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class TemplateError : public FormatError {
 public:
  using FormatError::FormatError;
};

class DimensionError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Retry budget exhausted while synthesizing ungrammatical strings.
class SynthesisError : public Error {
 public:
  using Error::Error;
};

// Not enough distinct inputs to fill the requested dataset.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Non-finite loss or parameters during probe training.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace numprobe

#endif  // NUMPROBE_ERRORS_H_
