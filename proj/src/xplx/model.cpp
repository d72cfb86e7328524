/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "xplx/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "xplx/error.hpp"

namespace xplx {

namespace {

template <typename T>
double checked_sum(std::span<const T> row, std::size_t row_index) {
  double sum = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    const double v = static_cast<double>(row[j]);
    if (!std::isfinite(v)) {
      fail(ErrorKind::NonFinite,
           "row " + std::to_string(row_index) + ", class " + std::to_string(j) + " is not finite");
    }
    if (v < 0.0) {
      std::ostringstream msg;
      msg << "row " << row_index << ", class " << j << " has value " << v;
      fail(ErrorKind::NegativeProbability, msg.str());
    }
    sum += v;
  }
  if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "row " << row_index << " sums to " << sum;
    fail(ErrorKind::SumOutOfTolerance, msg.str());
  }
  return sum;
}

}  // namespace

std::vector<double> validate_row(std::span<const double> p, std::size_t row_index) {
  const double sum = checked_sum(p, row_index);
  std::vector<double> out(p.begin(), p.end());
  for (double& v : out) v /= sum;
  return out;
}

double checked_row_sum(std::span<const float> row, std::size_t row_index) {
  return checked_sum(row, row_index);
}

TrainFraction TrainFraction::of(double value) {
  if (value != 0.25 && value != 0.5 && value != 0.75 && value != 1.0) {
    fail(ErrorKind::InvalidArgument, "train fraction must be one of 0.25, 0.5, 0.75, 1.0");
  }
  TrainFraction f;
  f.value_ = value;
  f.synthetic_ = false;
  return f;
}

std::optional<TrainFraction> TrainFraction::parse(std::string_view text) {
  if (text == "synthetic") return synthetic();
  if (text == "0.25" || text == ".25") return of(0.25);
  if (text == "0.5" || text == "0.50" || text == ".5") return of(0.5);
  if (text == "0.75" || text == ".75") return of(0.75);
  if (text == "1" || text == "1.0" || text == "1.00") return of(1.0);
  return std::nullopt;
}

std::string TrainFraction::to_string() const {
  if (synthetic_) return "synthetic";
  if (value_ == 0.25) return "0.25";
  if (value_ == 0.5) return "0.5";
  if (value_ == 0.75) return "0.75";
  return "1.0";
}

std::string_view to_string(EpochStage stage) noexcept {
  switch (stage) {
    case EpochStage::Early1: return "early-1";
    case EpochStage::Early2: return "early-2";
    case EpochStage::Early3: return "early-3";
    case EpochStage::Early4: return "early-4";
    case EpochStage::Converged: return "converged";
  }
  return "converged";
}

std::optional<EpochStage> parse_epoch_stage(std::string_view text) noexcept {
  for (EpochStage s : {EpochStage::Early1, EpochStage::Early2, EpochStage::Early3,
                       EpochStage::Early4, EpochStage::Converged}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::string_view to_string(ConfusionMode mode) noexcept {
  return mode == ConfusionMode::Voted ? "voted" : "expected";
}

void PopulationManifest::validate() const {
  if (num_classes == 0) fail(ErrorKind::ManifestSchemaError, "num_classes must be positive");
  if (num_examples == 0) fail(ErrorKind::ManifestSchemaError, "num_examples must be positive");
  if (classifiers.empty()) fail(ErrorKind::ManifestSchemaError, "classifier list is empty");
  std::unordered_set<std::string> seen;
  for (const auto& entry : classifiers) {
    if (entry.id.empty()) fail(ErrorKind::ManifestSchemaError, "classifier id is empty");
    if (!seen.insert(entry.id).second) {
      fail(ErrorKind::ManifestSchemaError, "duplicate classifier id '" + entry.id + "'");
    }
    if (entry.strength && !(*entry.strength > 0.0 && *entry.strength <= 1.0)) {
      fail(ErrorKind::ManifestSchemaError, "classifier '" + entry.id + "' strength outside (0, 1]");
    }
  }
}

ClassifierBlock::ClassifierBlock(std::vector<float> values, std::size_t num_examples,
                                 std::size_t num_classes)
    : num_examples_(num_examples), num_classes_(num_classes), values_(std::move(values)) {
  if (num_examples_ == 0 || num_classes_ == 0) {
    fail(ErrorKind::DimensionMismatch, "classifier block needs positive dimensions");
  }
  if (values_.size() != num_examples_ * num_classes_) {
    fail(ErrorKind::DimensionMismatch, "classifier block holds " + std::to_string(values_.size()) +
                                           " values, expected " +
                                           std::to_string(num_examples_ * num_classes_));
  }
  row_sums_.resize(num_examples_);
  for (std::size_t e = 0; e < num_examples_; ++e) {
    row_sums_[e] = checked_row_sum(
        std::span<const float>(values_).subspan(e * num_classes_, num_classes_), e);
  }
}

PredictionStore::PredictionStore(std::size_t num_examples, std::size_t num_classes,
                                 std::vector<std::shared_ptr<const ClassifierBlock>> blocks)
    : num_examples_(num_examples), num_classes_(num_classes), blocks_(std::move(blocks)) {
  if (blocks_.empty()) fail(ErrorKind::EmptyPopulation, "prediction store has no classifiers");
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& b = blocks_[i];
    if (!b || b->num_examples() != num_examples_ || b->num_classes() != num_classes_) {
      fail(ErrorKind::DimensionMismatch,
           "classifier block " + std::to_string(i) + " does not match store dimensions");
    }
  }
}

PredictionStore PredictionStore::select(std::span<const std::size_t> classifiers) const {
  std::vector<std::shared_ptr<const ClassifierBlock>> picked;
  picked.reserve(classifiers.size());
  for (std::size_t i : classifiers) picked.push_back(blocks_.at(i));
  return PredictionStore(num_examples_, num_classes_, std::move(picked));
}

Population Population::select(std::span<const std::size_t> classifiers) const {
  PopulationManifest sub;
  sub.num_classes = manifest.num_classes;
  sub.num_examples = manifest.num_examples;
  for (std::size_t i : classifiers) sub.classifiers.push_back(manifest.classifiers.at(i));
  return Population{std::move(sub), store.select(classifiers)};
}

LabelVector::LabelVector(std::vector<ClassIndex> labels, std::size_t num_classes)
    : labels_(std::move(labels)), num_classes_(num_classes) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] >= num_classes_) {
      fail(ErrorKind::LabelOutOfRange, "label " + std::to_string(labels_[i]) + " at index " +
                                           std::to_string(i) + " is not below " +
                                           std::to_string(num_classes_));
    }
  }
}

}  // namespace xplx
