/* Copyright 2026 The ssdscreen Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssd {

/// Failure classes surfaced by the library. The CLI maps these onto its
/// exit codes, the service onto HTTP status codes.
enum class ErrorKind {
  Decode,             // malformed container bytes
  UnsupportedFormat,  // well-formed but outside the supported subset
  EmptyAudio,
  Parameter,          // argument outside its documented range
  Precondition,       // argument violates an input contract
  Io,
  Parse,              // schema violation in a text document
  Validation,         // parsed fine, failed a domain rule
  Degenerate,         // mathematically undefined input (zero power, zero count)
  Infeasible,         // request cannot be satisfied (e.g. stratification)
  Shape,
  Numeric,
  Config,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Decode: return "decode";
    case ErrorKind::UnsupportedFormat: return "unsupported-format";
    case ErrorKind::EmptyAudio: return "empty-audio";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Io: return "io";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Degenerate: return "degenerate-input";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Config: return "configuration";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace ssd
