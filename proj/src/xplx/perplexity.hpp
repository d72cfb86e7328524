/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "xplx/model.hpp"

namespace xplx {

// Row kernels. `Row` is anything with size() and operator[] yielding a
// normalized probability (ProbabilityRow, std::span<const double>, ...).

/// Base-2 entropy; zero entries contribute exactly 0.
template <typename Row>
double entropy_bits(const Row& p) noexcept {
  double h = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double v = p[j];
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

/// Argmax with ties going to the smallest class index.
template <typename Row>
ClassIndex argmax_class(const Row& p) noexcept {
  std::size_t best = 0;
  double best_value = p.size() > 0 ? p[0] : 0.0;
  for (std::size_t j = 1; j < p.size(); ++j) {
    const double v = p[j];
    if (v > best_value) {
      best = j;
      best_value = v;
    }
  }
  return static_cast<ClassIndex>(best);
}

// Validated entry points over caller-owned rows.

double shannon_entropy(std::span<const double> p);
double distribution_perplexity(std::span<const double> p);
ClassIndex assign_class(std::span<const double> p);

/// Geometric mean of the per-classifier perplexities, evaluated as
/// 2^(mean entropy) so large populations cannot overflow.
double c_perplexity(std::span<const std::vector<double>> rows);

/// Fraction of rows whose assigned class differs from `label`.
double x_perplexity(std::span<const std::vector<double>> rows, ClassIndex label);

struct AnalysisOptions {
  std::size_t top_k = 5;
  std::size_t threads = 0;
  bool keep_fractions = true;  // retain sparse f and f_e per example
};

/// One report per example in index order. Per-example sums run in ascending
/// classifier order, so results are bit-identical for any thread count.
std::vector<ExampleReport> analyze_examples(const PredictionStore& store, const LabelVector& labels,
                                            const AnalysisOptions& options = {});

}  // namespace xplx
