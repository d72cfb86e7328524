/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "xplx/votes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "xplx/error.hpp"
#include "xplx/parallel.hpp"
#include "xplx/perplexity.hpp"

namespace xplx {

namespace {

void check_example(const PredictionStore& store, std::size_t example) {
  if (example >= store.num_examples()) {
    fail(ErrorKind::InvalidArgument, "example index " + std::to_string(example) + " out of range");
  }
}

bool ranks_before(const LabelScore& a, const LabelScore& b) {
  if (a.value != b.value) return a.value > b.value;
  return a.label < b.label;
}

std::vector<LabelScore> take_top(std::vector<LabelScore> scores, std::size_t k) {
  if (k == 0) fail(ErrorKind::InvalidArgument, "top label count must be at least 1");
  std::erase_if(scores, [](const LabelScore& s) { return !(s.value > 0.0); });
  const std::size_t keep = std::min(k, scores.size());
  std::partial_sort(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(keep),
                    scores.end(), ranks_before);
  scores.resize(keep);
  return scores;
}

}  // namespace

std::vector<double> vote_fraction(const PredictionStore& store, std::size_t example) {
  check_example(store, example);
  std::vector<double> counts(store.num_classes(), 0.0);
  for (std::size_t i = 0; i < store.num_classifiers(); ++i) {
    counts[argmax_class(store.row(i, example))] += 1.0;
  }
  const double n = static_cast<double>(store.num_classifiers());
  for (double& c : counts) c /= n;
  return counts;
}

std::vector<double> expected_vote_fraction(const PredictionStore& store, std::size_t example) {
  check_example(store, example);
  std::vector<double> sums(store.num_classes(), 0.0);
  for (std::size_t i = 0; i < store.num_classifiers(); ++i) {
    const ProbabilityRow row = store.row(i, example);
    for (std::size_t j = 0; j < sums.size(); ++j) sums[j] += row[j];
  }
  const double n = static_cast<double>(store.num_classifiers());
  for (double& s : sums) s /= n;
  return sums;
}

std::vector<LabelScore> top_labels(std::span<const double> fractions, std::size_t k) {
  std::vector<LabelScore> scores;
  scores.reserve(fractions.size());
  for (std::size_t j = 0; j < fractions.size(); ++j) {
    scores.push_back({static_cast<ClassIndex>(j), fractions[j]});
  }
  return take_top(std::move(scores), k);
}

std::vector<LabelScore> top_labels(std::span<const LabelScore> sparse, std::size_t k) {
  return take_top(std::vector<LabelScore>(sparse.begin(), sparse.end()), k);
}

std::vector<ClassReport> class_perplexities(std::span<const ExampleReport> reports,
                                            const LabelVector& labels) {
  if (reports.size() != labels.size()) {
    fail(ErrorKind::DimensionMismatch, "report count does not match label count");
  }
  const std::size_t m = labels.num_classes();
  std::vector<ClassReport> out(m);
  std::vector<double> cp_sum(m, 0.0);
  std::vector<double> xp_sum(m, 0.0);
  for (std::size_t c = 0; c < m; ++c) out[c].label = static_cast<ClassIndex>(c);
  for (std::size_t e = 0; e < reports.size(); ++e) {
    const ClassIndex c = labels[e];
    cp_sum[c] += reports[e].c_perplexity;
    xp_sum[c] += reports[e].x_perplexity;
    ++out[c].example_count;
  }
  for (std::size_t c = 0; c < m; ++c) {
    if (out[c].example_count == 0) continue;
    const double count = static_cast<double>(out[c].example_count);
    out[c].c_perplexity = cp_sum[c] / count;
    out[c].x_perplexity = xp_sum[c] / count;
  }
  return out;
}

void attach_top_confusion(std::span<ClassReport> classes, const ConfusionTable& table,
                          std::size_t k) {
  const std::size_t m = table.num_classes;
  for (ClassReport& cls : classes) {
    const std::size_t c = cls.label;
    if (c >= m) fail(ErrorKind::DimensionMismatch, "class report outside confusion table");
    std::vector<LabelScore> row;
    if (table.has_row(c)) {
      for (std::size_t j = 0; j < m; ++j) {
        if (j != c) row.push_back({static_cast<ClassIndex>(j), table.freq_at(c, j)});
      }
    }
    auto top = take_top(std::move(row), k);
    if (table.mode == ConfusionMode::Voted) {
      cls.top_voted_confusion = std::move(top);
    } else {
      cls.top_expected_confusion = std::move(top);
    }
  }
}

void sort_class_reports(std::vector<ClassReport>& classes, ClassSortKey key) {
  auto metric = [key](const ClassReport& r) {
    return key == ClassSortKey::CPerplexity ? r.c_perplexity : r.x_perplexity;
  };
  std::stable_sort(classes.begin(), classes.end(), [&](const ClassReport& a, const ClassReport& b) {
    const auto ma = metric(a);
    const auto mb = metric(b);
    if (ma.has_value() != mb.has_value()) return ma.has_value();
    if (ma && *ma != *mb) return *ma > *mb;
    return a.label < b.label;
  });
}

ConfusionTable class_confusion(const PredictionStore& store, const LabelVector& labels,
                               ConfusionMode mode, std::size_t threads) {
  const std::size_t m = store.num_classes();
  const std::size_t n = store.num_classifiers();
  if (labels.size() != store.num_examples() || labels.num_classes() != m) {
    fail(ErrorKind::DimensionMismatch, "labels do not match prediction store dimensions");
  }

  std::vector<std::vector<std::size_t>> members(m);
  for (std::size_t e = 0; e < labels.size(); ++e) members[labels[e]].push_back(e);

  ConfusionTable table;
  table.mode = mode;
  table.num_classes = m;
  table.class_counts.resize(m);
  table.freq.assign(m * m, std::numeric_limits<double>::quiet_NaN());
  table.sym.assign(m * m, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t c = 0; c < m; ++c) table.class_counts[c] = members[c].size();

  const double n_real = static_cast<double>(n);
  // One class row per task; each row sums its examples in ascending order.
  parallel_for(m, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> acc(m);
    std::vector<double> per_example(m);
    for (std::size_t c = begin; c < end; ++c) {
      if (members[c].empty()) continue;
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t e : members[c]) {
        std::fill(per_example.begin(), per_example.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          const ProbabilityRow row = store.row(i, e);
          if (mode == ConfusionMode::Voted) {
            per_example[argmax_class(row)] += 1.0;
          } else {
            for (std::size_t j = 0; j < m; ++j) per_example[j] += row[j];
          }
        }
        for (std::size_t j = 0; j < m; ++j) acc[j] += per_example[j] / n_real;
      }
      const double count = static_cast<double>(members[c].size());
      for (std::size_t j = 0; j < m; ++j) table.freq[c * m + j] = acc[j] / count;
    }
  });

  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t j = c; j < m; ++j) {
      const double s = (table.freq[c * m + j] + table.freq[j * m + c]) / 2.0;
      table.sym[c * m + j] = s;
      table.sym[j * m + c] = s;
    }
  }
  return table;
}

}  // namespace xplx
