/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "xplx/audit.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "xplx/error.hpp"

namespace xplx {

std::string_view to_string(FindingKind kind) noexcept {
  switch (kind) {
    case FindingKind::MislabelCandidate:
      return "mislabel_candidate";
    case FindingKind::InappropriateLabelCandidate:
      return "inappropriate_label_candidate";
    case FindingKind::OverlappingClassPair:
      return "overlapping_class_pair";
  }
  return "unknown";
}

std::vector<AuditFinding> flag_examples(std::span<const ExampleReport> reports,
                                        const LabelVector& labels,
                                        const ExampleThresholds& thresholds) {
  if (std::isnan(thresholds.tau_x) || std::isnan(thresholds.tau_c)) {
    fail(ErrorKind::InvalidArgument, "audit thresholds must not be NaN");
  }
  if (labels.size() != reports.size()) {
    fail(ErrorKind::DimensionMismatch, "audit got " + std::to_string(reports.size()) +
                                           " reports for " + std::to_string(labels.size()) +
                                           " labels");
  }
  std::vector<AuditFinding> out;
  for (const ExampleReport& r : reports) {
    if (!(r.x_perplexity >= thresholds.tau_x)) continue;
    AuditFinding f;
    f.example_index = r.example_index;
    f.label = labels[r.example_index];
    f.x_perplexity = r.x_perplexity;
    f.c_perplexity = r.c_perplexity;
    f.top_voted = r.top_voted_labels;
    f.top_expected = r.top_expected_labels;
    const bool confident = r.c_perplexity <= thresholds.tau_c;
    const bool clear_winner = r.top_vote_unique && !r.top_voted_labels.empty() &&
                              r.top_voted_labels.front().label != f.label;
    if (confident && clear_winner) {
      f.kind = FindingKind::MislabelCandidate;
      f.suggested_label = r.top_voted_labels.front().label;
    } else {
      f.kind = FindingKind::InappropriateLabelCandidate;
    }
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), [](const AuditFinding& a, const AuditFinding& b) {
    if (a.x_perplexity != b.x_perplexity) return a.x_perplexity > b.x_perplexity;
    if (a.c_perplexity != b.c_perplexity) return a.c_perplexity < b.c_perplexity;
    return a.example_index < b.example_index;
  });
  return out;
}

std::vector<AuditFinding> flag_class_pairs(const ConfusionTable& table, double tau_s) {
  if (std::isnan(tau_s)) fail(ErrorKind::InvalidArgument, "pair threshold must not be NaN");
  std::vector<AuditFinding> out;
  const std::size_t m = table.num_classes;
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t j = c + 1; j < m; ++j) {
      const double s = table.sym_at(c, j);
      if (std::isnan(s) || !(s >= tau_s)) continue;
      AuditFinding f;
      f.kind = FindingKind::OverlappingClassPair;
      f.class_a = static_cast<ClassIndex>(c);
      f.class_b = static_cast<ClassIndex>(j);
      f.confusion = s;
      out.push_back(std::move(f));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const AuditFinding& a, const AuditFinding& b) {
    return a.confusion > b.confusion;
  });
  return out;
}

RecoveryScore score_recovery(std::span<const AuditFinding> findings,
                             std::span<const LabelFlip> corruption_log) {
  std::unordered_set<std::size_t> flipped;
  for (const LabelFlip& flip : corruption_log) flipped.insert(flip.example);
  RecoveryScore score;
  score.corrupted = flipped.size();
  for (const AuditFinding& f : findings) {
    if (f.kind != FindingKind::MislabelCandidate) continue;
    ++score.flagged;
    if (flipped.contains(f.example_index)) ++score.true_positives;
  }
  if (score.flagged > 0) {
    score.precision = static_cast<double>(score.true_positives) / static_cast<double>(score.flagged);
  }
  if (score.corrupted > 0) {
    score.recall = static_cast<double>(score.true_positives) / static_cast<double>(score.corrupted);
  }
  return score;
}

}  // namespace xplx
