/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "xplx/error.hpp"

namespace xplx {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NegativeProbability: return "NegativeProbability";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::SumOutOfTolerance: return "SumOutOfTolerance";
    case ErrorKind::ManifestSchemaError: return "ManifestSchemaError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::PayloadTruncated: return "PayloadTruncated";
    case ErrorKind::LineCountMismatch: return "LineCountMismatch";
    case ErrorKind::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IncompleteGrid: return "IncompleteGrid";
    case ErrorKind::HeaderMismatch: return "HeaderMismatch";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::EmptyPopulation: return "EmptyPopulation";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::DegenerateSample: return "DegenerateSample";
    case ErrorKind::EmptySubset: return "EmptySubset";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

}  // namespace xplx
