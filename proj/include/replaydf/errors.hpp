// Copyright 2026 The replaydf-toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REPLAYDF_ERRORS_HPP_
#define REPLAYDF_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace replaydf {

// Base of every error raised by the toolkit. Input errors (bad files, bad
// arguments, unbalanced pools) derive from InputError; the CLI maps those to
// exit status 2 and everything else to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

// Malformed RIFF/WAVE structure. `chunk` names the offending chunk.
class FormatError : public InputError {
 public:
  FormatError(std::string chunk, std::string detail)
      : InputError("malformed '" + chunk + "' chunk: " + detail),
        chunk_(std::move(chunk)),
        detail_(std::move(detail)) {}
  const std::string& chunk() const noexcept { return chunk_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string chunk_;
  std::string detail_;
};

class UnsupportedEncodingError : public InputError {
 public:
  using InputError::InputError;
};

class IoError : public InputError {
 public:
  using InputError::InputError;
};

// Mathematically undefined request: silent signal, zero variance, empty input.
class DomainError : public InputError {
 public:
  using InputError::InputError;
};

// Manifest / score-file parse failure carrying the 1-based line number.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, std::string detail, const std::string& source = {})
      : InputError((source.empty() ? "" : source + ": ") + "line " +
                   std::to_string(line) + ": " + detail),
        line_(line),
        detail_(std::move(detail)) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

}  // namespace replaydf

#endif  // REPLAYDF_ERRORS_HPP_
