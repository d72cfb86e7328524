/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "xplx/model.hpp"

namespace xplx {

inline constexpr std::size_t kDefaultTopK = 5;

/// f(x, j): share of classifiers whose argmax is j.
std::vector<double> vote_fraction(const PredictionStore& store, std::size_t example);

/// f_e(x, j): mean predicted probability of j across classifiers.
std::vector<double> expected_vote_fraction(const PredictionStore& store, std::size_t example);

/// The k largest entries, descending, ties to the smaller class, zeros dropped.
std::vector<LabelScore> top_labels(std::span<const double> fractions, std::size_t k);
std::vector<LabelScore> top_labels(std::span<const LabelScore> sparse, std::size_t k);

struct ClassReport {
  ClassIndex label = 0;
  std::size_t example_count = 0;
  std::optional<double> c_perplexity;  // empty for classes without examples
  std::optional<double> x_perplexity;
  std::vector<LabelScore> top_voted_confusion;
  std::vector<LabelScore> top_expected_confusion;
};

/// Arithmetic means of the example metrics over each class, one entry per
/// class in index order.
std::vector<ClassReport> class_perplexities(std::span<const ExampleReport> reports,
                                            const LabelVector& labels);

/// Fills the confusion list matching `table.mode`. The class itself is
/// excluded, so only genuine confusions are listed.
void attach_top_confusion(std::span<ClassReport> classes, const ConfusionTable& table,
                          std::size_t k = kDefaultTopK);

enum class ClassSortKey { CPerplexity, XPerplexity };

/// Descending by the chosen metric; empty classes last; ties by class index.
void sort_class_reports(std::vector<ClassReport>& classes, ClassSortKey key);

ConfusionTable class_confusion(const PredictionStore& store, const LabelVector& labels,
                               ConfusionMode mode, std::size_t threads = 0);

}  // namespace xplx
