// Copyright 2026 The asrec Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace asrec {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (dataset records, lattices, files).
class DataError : public Error {
 public:
  using Error::Error;
};

// A caller violated an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Structural problem in a lattice (cycle, dangling subword piece, ...).
class LatticeError : public DataError {
 public:
  using DataError::DataError;
};

// Failure talking to a scorer backend or chat endpoint.
class ScorerError : public Error {
 public:
  ScorerError(const std::string& what, bool retryable)
      : Error(what), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

// Model reply that could not be interpreted.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace asrec
