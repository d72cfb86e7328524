/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xplx {

enum class ErrorKind {
  NegativeProbability,
  NonFinite,
  SumOutOfTolerance,
  ManifestSchemaError,
  DimensionMismatch,
  PayloadTruncated,
  LineCountMismatch,
  LabelOutOfRange,
  ParseError,
  IncompleteGrid,
  HeaderMismatch,
  IoError,
  EmptyPopulation,
  EmptyInput,
  DegenerateSample,
  EmptySubset,
  ConfigInvalid,
  InvalidArgument,
  InvariantViolation,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the core carries one of the kinds above; the C API
/// maps them one-to-one onto status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace xplx
