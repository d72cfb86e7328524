/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xplx/model.hpp"
#include "xplx/stats.hpp"

namespace xplx {

/// Metadata filter. An absent field matches everything; a present one
/// matches entries whose value is in the list.
struct SubsetFilter {
  std::optional<std::vector<TrainFraction>> train_fractions;
  std::optional<std::vector<std::string>> architectures;
  std::optional<std::vector<EpochStage>> epoch_stages;
  std::optional<std::vector<std::string>> ids;
  std::optional<std::vector<std::string>> tiers;

  bool matches(const ClassifierEntry& entry) const;
  /// Matches exactly the entries both filters match.
  SubsetFilter combined(const SubsetFilter& other) const;
};

struct NamedSubset {
  std::string name;
  SubsetFilter filter;
};

/// "name=strong:train_fraction=1.0:architecture=a,b". Keys: name,
/// train_fraction, architecture, epoch_stage, id, tier. Without a name the
/// whole spec text is used.
NamedSubset parse_subset_spec(std::string_view spec);

std::vector<std::size_t> matching_classifiers(const PopulationManifest& manifest,
                                              const SubsetFilter& filter);

/// View over the matching classifiers in manifest order; blocks are shared.
Population subset(const Population& population, const SubsetFilter& filter);

struct MetricSummary {
  std::vector<double> values;  // one per example
  double mean = 0.0;
  double stddev = 0.0;  // population form
  stats::BoxStats box;
  stats::Histogram histogram;
  std::optional<stats::KdeCurve> kde;  // absent for constant samples
};

struct SubsetSummary {
  std::string name;
  std::size_t num_classifiers = 0;
  MetricSummary c_perplexity;
  MetricSummary x_perplexity;
};

struct PairCorrelation {
  std::size_t a = 0;
  std::size_t b = 0;
  std::optional<stats::CorrelationReport> x_perplexity;  // absent when degenerate
  std::optional<stats::CorrelationReport> c_perplexity;
};

struct ComparisonReport {
  std::vector<SubsetSummary> subsets;
  std::vector<PairCorrelation> pairs;  // every a <= b, row-major

  const PairCorrelation& pair(std::size_t a, std::size_t b) const;
};

struct CompareOptions {
  std::size_t threads = 0;
  std::size_t bins = 20;
  std::size_t kde_points = stats::kDefaultKdePoints;
  bool with_kde = true;
};

/// Histograms use [0, 1] for X-perplexity and [1, max(M, 2)] for C-perplexity.
ComparisonReport compare_populations(const Population& population,
                                     std::span<const NamedSubset> subsets,
                                     const LabelVector& labels, const CompareOptions& options = {});

struct TierSpec {
  std::string label;
  std::size_t count = 0;
  double strength_lo = 0.0;
  double strength_hi = 0.0;
};

/// "25:10:0.2:0.4,100:5:0.8:1.0" -> label:count:lo:hi per tier.
std::vector<TierSpec> parse_tiers(std::string_view text);
/// Four tiers of ten, strengths [0.2,0.4] [0.4,0.6] [0.6,0.8] [0.8,1.0].
std::vector<TierSpec> default_tiers();

struct SynthConfig {
  std::size_t num_classes = 100;
  std::size_t num_examples = 1000;
  std::vector<TierSpec> tiers = default_tiers();
  double base_concentration = 0.01;  // alpha0
  double sharpness = 20.0;           // kappa
  double confusion = 0.0;            // lambda, weight of the per-example decoy class
  double mislabel_fraction = 0.0;
  std::uint64_t seed = 20211;
  std::size_t threads = 0;

  void validate() const;
};

struct SynthResult {
  Population population;
  LabelVector labels;       // as written to the labels file, after corruption
  LabelVector true_labels;  // what the classifiers were drawn around
  std::vector<LabelFlip> corruption_log;
};

/// Row for classifier strength s on example x with true label y and decoy z:
/// Dirichlet(alpha) with alpha_j = alpha0, alpha_y += kappa*s and
/// alpha_z += kappa*lambda*c_x, where c_x ~ Beta(0.5, 4) is the example's
/// intrinsic ambiguity. Each classifier draws from its own substream keyed
/// by its global index.
SynthResult synthesize_population(const SynthConfig& config);

}  // namespace xplx
