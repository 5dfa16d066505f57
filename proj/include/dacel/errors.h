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

#ifndef DACEL_ERRORS_H_
#define DACEL_ERRORS_H_

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

namespace dacel {

// Caller broke a documented precondition (bad index, malformed allocation).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A required setting is missing or inconsistent, e.g. an unset deadline.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value violates a Scenario / GenSpec / SweepSpec invariant.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Malformed text input. Line numbers are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Exhaustive search refused because the instance exceeds the evaluation cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(double required, double cap)
      : std::runtime_error("exhaustive search needs " + Format(required) +
                           " evaluations, cap is " + Format(cap)),
        required_(required), cap_(cap) {}
  double required() const { return required_; }
  double cap() const { return cap_; }

 private:
  static std::string Format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
  }
  double required_;
  double cap_;
};

}  // namespace dacel

#endif  // DACEL_ERRORS_H_
