// Copyright 2026 The l4ptr Authors
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

namespace l4ptr {

// Base of every recoverable error raised by the library. Faults observed by
// an interpreted program are not errors; they are reported in an Outcome.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeOutOfRange : public Error {
 public:
  using Error::Error;
};

class OutOfMemory : public Error {
 public:
  using Error::Error;
};

class InvalidFree : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class DuplicateSymbol : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

class InstrumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace l4ptr
