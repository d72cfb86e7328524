/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "xplx/model.hpp"

namespace xplx {

// Payload file layout, all little-endian:
//   bytes  0..7   magic "XPLXPRD1"
//   bytes  8..15  num_examples (u64)
//   bytes 16..23  num_classes  (u64)
//   then num_examples * num_classes binary32 values, example-major.
inline constexpr std::array<char, 8> kPayloadMagic = {'X', 'P', 'L', 'X', 'P', 'R', 'D', '1'};
inline constexpr std::size_t kPayloadHeaderBytes = 24;

struct Payload {
  std::uint64_t num_examples = 0;
  std::uint64_t num_classes = 0;
  std::vector<float> values;
};

Payload read_payload(const std::filesystem::path& path);
void write_payload(const std::filesystem::path& path, std::uint64_t num_examples,
                   std::uint64_t num_classes, std::span<const float> values);

PopulationManifest parse_manifest(const std::string& json_text);
std::string manifest_to_json(const PopulationManifest& manifest);

/// Loads a JSON manifest and its payloads (paths relative to the manifest's
/// directory), one worker per classifier block. A path ending in ".csv" is
/// routed to load_csv_population.
Population load_population(const std::filesystem::path& manifest_path, std::size_t threads = 0);

/// Small-population CSV: header "classifier,example,p0,...,p{M-1}", one row
/// per (classifier, example). Classifiers keep their first-appearance order.
Population load_csv_population(const std::filesystem::path& path);

/// Writes the manifest and every payload. Payload paths are taken from the
/// entries and resolved against the manifest's directory.
void save_population(const Population& population, const std::filesystem::path& manifest_path);

/// One decimal label per line, exactly `num_examples` lines.
LabelVector load_labels(const std::filesystem::path& path, std::size_t num_examples,
                        std::size_t num_classes);
void write_labels(const std::filesystem::path& path, const LabelVector& labels);

/// Optional sidecar with one class name per line.
std::vector<std::string> load_class_names(const std::filesystem::path& path,
                                          std::size_t num_classes);

}  // namespace xplx
