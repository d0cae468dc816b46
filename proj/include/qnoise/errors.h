// Copyright 2026 The QNoise Authors
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

#ifndef QNOISE_ERRORS_H
#define QNOISE_ERRORS_H

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qnoise {

/// Input text could not be parsed. Carries a 1-based source position.
class ParseError : public std::runtime_error {
   public:
    ParseError(const std::string &message, std::size_t line, std::size_t column)
        : std::runtime_error(
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {
    }

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

   private:
    std::size_t line_;
    std::size_t column_;
};

/// An argument or object violates a documented precondition.
class ValidationError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A computation would exceed a configured size or memory limit.
class ResourceError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace qnoise

#endif
