/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xplx {

using ClassIndex = std::uint32_t;

/// Rows whose sum strays further than this from 1 are rejected.
inline constexpr double kRowSumTolerance = 1e-3;

/// Checks one probability vector and returns it rescaled to sum to exactly 1.
/// `row_index` only feeds the error message.
std::vector<double> validate_row(std::span<const double> p, std::size_t row_index = 0);

/// Same checks for a stored float32 row; returns the row sum in double so
/// callers can renormalize on read.
double checked_row_sum(std::span<const float> row, std::size_t row_index = 0);

class TrainFraction {
 public:
  static TrainFraction synthetic() { return TrainFraction(); }
  /// Accepts only 0.25, 0.5, 0.75 and 1.0.
  static TrainFraction of(double value);
  static std::optional<TrainFraction> parse(std::string_view text);

  bool is_synthetic() const noexcept { return synthetic_; }
  double value() const noexcept { return value_; }
  std::string to_string() const;

  friend bool operator==(const TrainFraction&, const TrainFraction&) = default;

 private:
  TrainFraction() = default;
  double value_ = 0.0;
  bool synthetic_ = true;
};

enum class EpochStage { Early1, Early2, Early3, Early4, Converged };

std::string_view to_string(EpochStage stage) noexcept;
std::optional<EpochStage> parse_epoch_stage(std::string_view text) noexcept;

struct ClassifierEntry {
  std::string id;
  std::string architecture;
  TrainFraction train_fraction = TrainFraction::synthetic();
  EpochStage epoch_stage = EpochStage::Converged;
  std::optional<double> strength;  // synthetic populations only
  std::string tier;                // optional grouping tag, empty when absent
  std::string payload_path;        // relative to the manifest directory
};

struct PopulationManifest {
  std::size_t num_classes = 0;
  std::size_t num_examples = 0;
  std::vector<ClassifierEntry> classifiers;

  /// Throws ManifestSchemaError on duplicate ids, empty list, zero dims or
  /// an out-of-range strength.
  void validate() const;
};

/// Read-only view of one stored row, renormalized on access.
struct ProbabilityRow {
  std::span<const float> raw;
  double sum = 1.0;

  std::size_t size() const noexcept { return raw.size(); }
  double operator[](std::size_t j) const noexcept { return static_cast<double>(raw[j]) / sum; }
};

/// One classifier's E x M outputs, example-major, validated at construction.
class ClassifierBlock {
 public:
  ClassifierBlock(std::vector<float> values, std::size_t num_examples, std::size_t num_classes);

  std::size_t num_examples() const noexcept { return num_examples_; }
  std::size_t num_classes() const noexcept { return num_classes_; }
  std::span<const float> values() const noexcept { return values_; }

  ProbabilityRow row(std::size_t example) const noexcept {
    return {std::span<const float>(values_).subspan(example * num_classes_, num_classes_),
            row_sums_[example]};
  }

 private:
  std::size_t num_examples_;
  std::size_t num_classes_;
  std::vector<float> values_;
  std::vector<double> row_sums_;
};

/// N classifier blocks over the same E examples and M classes. Blocks are
/// shared, so selecting a sub-population never copies payload values.
class PredictionStore {
 public:
  PredictionStore(std::size_t num_examples, std::size_t num_classes,
                  std::vector<std::shared_ptr<const ClassifierBlock>> blocks);

  std::size_t num_classifiers() const noexcept { return blocks_.size(); }
  std::size_t num_examples() const noexcept { return num_examples_; }
  std::size_t num_classes() const noexcept { return num_classes_; }

  ProbabilityRow row(std::size_t classifier, std::size_t example) const noexcept {
    return blocks_[classifier]->row(example);
  }
  const ClassifierBlock& block(std::size_t classifier) const { return *blocks_.at(classifier); }
  const std::shared_ptr<const ClassifierBlock>& shared_block(std::size_t classifier) const {
    return blocks_.at(classifier);
  }

  PredictionStore select(std::span<const std::size_t> classifiers) const;

 private:
  std::size_t num_examples_;
  std::size_t num_classes_;
  std::vector<std::shared_ptr<const ClassifierBlock>> blocks_;
};

struct Population {
  PopulationManifest manifest;
  PredictionStore store;

  /// Keeps manifest entries and store blocks for `classifiers`, in the order given.
  Population select(std::span<const std::size_t> classifiers) const;
};

class LabelVector {
 public:
  LabelVector() = default;
  /// Throws LabelOutOfRange for any label >= num_classes.
  LabelVector(std::vector<ClassIndex> labels, std::size_t num_classes);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t num_classes() const noexcept { return num_classes_; }
  ClassIndex operator[](std::size_t i) const noexcept { return labels_[i]; }
  std::span<const ClassIndex> values() const noexcept { return labels_; }

 private:
  std::vector<ClassIndex> labels_;
  std::size_t num_classes_ = 0;
};

struct LabelScore {
  ClassIndex label = 0;
  double value = 0.0;

  friend bool operator==(const LabelScore&, const LabelScore&) = default;
};

/// Nonzero entries only, ascending by class.
using SparseFractions = std::vector<LabelScore>;

struct ExampleReport {
  std::size_t example_index = 0;
  ClassIndex label = 0;
  double c_perplexity = 1.0;
  double x_perplexity = 0.0;
  SparseFractions vote_fractions;
  SparseFractions expected_fractions;
  std::vector<LabelScore> top_voted_labels;
  std::vector<LabelScore> top_expected_labels;
  bool top_vote_unique = true;  // false when the leading vote count is shared
};

enum class ConfusionMode { Voted, Expected };

std::string_view to_string(ConfusionMode mode) noexcept;

/// Class-level confusion. Rows of classes without examples hold NaN, as do
/// the symmetric cells that would need them.
struct ConfusionTable {
  ConfusionMode mode = ConfusionMode::Voted;
  std::size_t num_classes = 0;
  std::vector<std::size_t> class_counts;
  std::vector<double> freq;  // row-major M x M, f(c, j)
  std::vector<double> sym;   // row-major M x M, s(c, j)

  bool has_row(std::size_t c) const noexcept { return class_counts[c] > 0; }
  double freq_at(std::size_t c, std::size_t j) const noexcept { return freq[c * num_classes + j]; }
  double sym_at(std::size_t c, std::size_t j) const noexcept { return sym[c * num_classes + j]; }
};

/// One label replaced by the synthetic generator; the labels file holds
/// `corrupted`, the classifiers were drawn around `original`.
struct LabelFlip {
  std::size_t example = 0;
  ClassIndex original = 0;
  ClassIndex corrupted = 0;
  friend bool operator==(const LabelFlip&, const LabelFlip&) = default;
};

}  // namespace xplx
