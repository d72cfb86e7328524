/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xplx/audit.hpp"
#include "xplx/population.hpp"
#include "xplx/reports.hpp"
#include "xplx/votes.hpp"

namespace xplx {

struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path labels;
  std::filesystem::path out_dir;
  ReportFormat format = ReportFormat::Csv;
  std::size_t threads = 0;
  std::optional<std::filesystem::path> class_names;
  std::size_t top_k = kDefaultTopK;
};

/// examples.{csv,json}, summary.json, cp_by_xp.csv
void cmd_analyze(const RunConfig& config);

/// classes.csv plus confusion_{voted,expected}[_sym].csv, or the sparse
/// confusion_{voted,expected}.json with --format json.
void cmd_classes(const RunConfig& config, ClassSortKey sort);

struct FlagOptions {
  ExampleThresholds thresholds;
  double tau_s = kDefaultPairThreshold;
  ConfusionMode pair_mode = ConfusionMode::Voted;
};

struct FlagCounts {
  std::size_t mislabel = 0;
  std::size_t inappropriate = 0;
  std::size_t pairs = 0;
};

/// findings.csv: example findings first, then class pairs.
FlagCounts cmd_flag(const RunConfig& config, const FlagOptions& options);

/// spread.csv, correlations.csv and subsets/<name>/ with metrics, histograms
/// and KDE curves.
void cmd_compare(const RunConfig& config, std::span<const std::string> subset_specs,
                 const CompareOptions& options);

/// manifest.json, payloads/, labels.txt, corruption_log.csv under `out_dir`.
void cmd_synth(const SynthConfig& config, const std::filesystem::path& out_dir);

enum class HistMetric { CPerplexity, XPerplexity };

struct HistOptions {
  HistMetric metric = HistMetric::XPerplexity;
  std::size_t bins = 20;
  std::size_t kde_points = stats::kDefaultKdePoints;
};

/// hist_{cp,xp}.csv and kde_{cp,xp}.csv. A constant sample gets no KDE file
/// and a warning.
void cmd_hist(const RunConfig& config, const HistOptions& options);

}  // namespace xplx
