// Copyright 2026 The Authors.
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

#ifndef F2SKETCH_ERROR_HPP_
#define F2SKETCH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace f2sketch {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a precondition: dimension mismatch, bad argument, malformed
// input document.
class UsageError : public Error {
 public:
  using Error::Error;
};

// A size guard tripped (enumeration limits, row caps).
class CapacityError : public Error {
 public:
  using Error::Error;
};

// The request is well-formed but mathematically unsatisfiable.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A claimed property of an input did not survive checking (LTF margin,
// matroid oracle consistency). `witness` names the offending input if any.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::string witness = {})
      : Error(what), witness_(std::move(witness)) {}
  const std::string& witness() const { return witness_; }

 private:
  std::string witness_;
};

// Structured-document problem; `field` is a dotted path into the document.
class SchemaError : public UsageError {
 public:
  SchemaError(const std::string& field, const std::string& what)
      : UsageError("field '" + field + "': " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace f2sketch

#endif  // F2SKETCH_ERROR_HPP_
