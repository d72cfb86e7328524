/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "xplx/model.hpp"

namespace xplx {

enum class FindingKind { MislabelCandidate, InappropriateLabelCandidate, OverlappingClassPair };

std::string_view to_string(FindingKind kind) noexcept;

/// Example findings fill the example fields; pair findings fill class_a,
/// class_b and confusion.
struct AuditFinding {
  FindingKind kind = FindingKind::MislabelCandidate;

  std::size_t example_index = 0;
  ClassIndex label = 0;
  double x_perplexity = 0.0;
  double c_perplexity = 0.0;
  std::vector<LabelScore> top_voted;
  std::vector<LabelScore> top_expected;
  std::optional<ClassIndex> suggested_label;  // mislabel candidates only

  ClassIndex class_a = 0;
  ClassIndex class_b = 0;
  double confusion = 0.0;
};

struct ExampleThresholds {
  double tau_x = 0.95;
  double tau_c = 1.5;
};

inline constexpr double kDefaultPairThreshold = 0.2;

/// High-X-perplexity examples. Low C-perplexity plus a unique top voted label
/// other than the recorded one makes a mislabel candidate; everything else
/// above tau_x (including vote ties) is an inappropriate-label candidate.
/// Sorted by X-perplexity descending, then C-perplexity ascending, then index.
std::vector<AuditFinding> flag_examples(std::span<const ExampleReport> reports,
                                        const LabelVector& labels,
                                        const ExampleThresholds& thresholds = {});

/// Pairs c < j with sym(c, j) >= tau_s, strongest first. Cells involving an
/// empty class are skipped.
std::vector<AuditFinding> flag_class_pairs(const ConfusionTable& table,
                                           double tau_s = kDefaultPairThreshold);

struct RecoveryScore {
  std::size_t flagged = 0;
  std::size_t true_positives = 0;
  std::size_t corrupted = 0;
  double precision = 1.0;  // 1 when nothing was flagged
  double recall = 1.0;     // 1 when nothing was corrupted
};

/// Scores mislabel candidates against a known corruption log.
RecoveryScore score_recovery(std::span<const AuditFinding> findings,
                             std::span<const LabelFlip> corruption_log);

}  // namespace xplx
