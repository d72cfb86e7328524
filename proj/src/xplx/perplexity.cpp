/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "xplx/perplexity.hpp"

#include <algorithm>
#include <cstdint>

#include "xplx/error.hpp"
#include "xplx/parallel.hpp"
#include "xplx/votes.hpp"

namespace xplx {

double shannon_entropy(std::span<const double> p) {
  const auto q = validate_row(p);
  return entropy_bits(std::span<const double>(q));
}

double distribution_perplexity(std::span<const double> p) { return std::exp2(shannon_entropy(p)); }

ClassIndex assign_class(std::span<const double> p) {
  const auto q = validate_row(p);
  return argmax_class(std::span<const double>(q));
}

double c_perplexity(std::span<const std::vector<double>> rows) {
  if (rows.empty()) fail(ErrorKind::EmptyPopulation, "c_perplexity needs at least one row");
  double total = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto q = validate_row(rows[i], i);
    total += entropy_bits(std::span<const double>(q));
  }
  // entropy <= log2(M) can be exceeded by rounding; keep the result in [1, M]
  return std::min(std::exp2(total / static_cast<double>(rows.size())),
                  static_cast<double>(rows.front().size()));
}

double x_perplexity(std::span<const std::vector<double>> rows, ClassIndex label) {
  if (rows.empty()) fail(ErrorKind::EmptyPopulation, "x_perplexity needs at least one row");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (label >= rows[i].size()) {
      fail(ErrorKind::InvalidArgument, "label " + std::to_string(label) + " outside row width");
    }
    const auto q = validate_row(rows[i], i);
    if (argmax_class(std::span<const double>(q)) == label) ++correct;
  }
  return 1.0 - static_cast<double>(correct) / static_cast<double>(rows.size());
}

std::vector<ExampleReport> analyze_examples(const PredictionStore& store, const LabelVector& labels,
                                            const AnalysisOptions& options) {
  const std::size_t n = store.num_classifiers();
  const std::size_t e_count = store.num_examples();
  const std::size_t m = store.num_classes();
  if (labels.size() != e_count) {
    fail(ErrorKind::DimensionMismatch, "store has " + std::to_string(e_count) +
                                           " examples but " + std::to_string(labels.size()) +
                                           " labels were given");
  }
  if (labels.num_classes() != m) {
    fail(ErrorKind::DimensionMismatch, "labels declare " + std::to_string(labels.num_classes()) +
                                           " classes, store has " + std::to_string(m));
  }
  if (options.top_k == 0) fail(ErrorKind::InvalidArgument, "top_k must be at least 1");

  std::vector<ExampleReport> reports(e_count);
  const double n_real = static_cast<double>(n);
  const double m_real = static_cast<double>(m);

  parallel_for(e_count, options.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> votes(m);
    std::vector<double> expected(m);
    std::vector<double> fractions(m);
    for (std::size_t e = begin; e < end; ++e) {
      std::fill(votes.begin(), votes.end(), 0u);
      std::fill(expected.begin(), expected.end(), 0.0);
      const ClassIndex label = labels[e];
      double entropy_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const ProbabilityRow row = store.row(i, e);
        entropy_sum += entropy_bits(row);
        const ClassIndex assigned = argmax_class(row);
        ++votes[assigned];
        for (std::size_t j = 0; j < m; ++j) expected[j] += row[j];
      }

      ExampleReport& r = reports[e];
      r.example_index = e;
      r.label = label;
      r.c_perplexity = std::min(std::exp2(entropy_sum / n_real), m_real);

      for (std::size_t j = 0; j < m; ++j) fractions[j] = static_cast<double>(votes[j]) / n_real;
      // complement of the correct-vote fraction, so X-perplexity == 1 - f(x, y) bit for bit
      r.x_perplexity = 1.0 - fractions[label];
      r.top_voted_labels = top_labels(std::span<const double>(fractions), options.top_k);
      std::uint32_t best = 0;
      std::size_t best_count = 0;
      for (std::uint32_t v : votes) {
        if (v > best) {
          best = v;
          best_count = 1;
        } else if (v == best) {
          ++best_count;
        }
      }
      r.top_vote_unique = best_count == 1;
      if (options.keep_fractions) {
        r.vote_fractions.clear();
        for (std::size_t j = 0; j < m; ++j) {
          if (votes[j] > 0) r.vote_fractions.push_back({static_cast<ClassIndex>(j), fractions[j]});
        }
      }

      for (std::size_t j = 0; j < m; ++j) fractions[j] = expected[j] / n_real;
      r.top_expected_labels = top_labels(std::span<const double>(fractions), options.top_k);
      if (options.keep_fractions) {
        r.expected_fractions.clear();
        for (std::size_t j = 0; j < m; ++j) {
          if (fractions[j] > 0.0) {
            r.expected_fractions.push_back({static_cast<ClassIndex>(j), fractions[j]});
          }
        }
      }
    }
  });
  return reports;
}

}  // namespace xplx
