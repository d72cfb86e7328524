/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xplx/audit.hpp"
#include "xplx/model.hpp"
#include "xplx/stats.hpp"
#include "xplx/votes.hpp"

namespace xplx {

enum class ReportFormat { Csv, Json };

std::optional<ReportFormat> parse_report_format(std::string_view text) noexcept;

/// Fixed six decimals; NaN renders as an empty cell.
std::string format_real(double value);
std::string format_real(const std::optional<double>& value);

/// "2:0.600000|0:0.200000". Class indices are replaced by names when
/// `names` is non-empty.
std::string format_label_scores(std::span<const LabelScore> scores,
                                std::span<const std::string> names = {});

std::string csv_escape(std::string_view field);

// Renderers return the whole file body; write_text puts it on disk.

/// Columns: index,c_perplexity,x_perplexity,top_voted,top_expected.
std::string render_examples(std::span<const ExampleReport> reports, ReportFormat format,
                            std::span<const std::string> names = {});

/// Columns: class,name,example_count,c_perplexity,x_perplexity,
/// top_voted_confusion,top_expected_confusion.
std::string render_classes(std::span<const ClassReport> classes,
                           std::span<const std::string> names = {});

/// Dense M x (M+1) CSV of freq (or sym when `symmetric`), empty rows for
/// classes without examples.
std::string render_confusion_csv(const ConfusionTable& table, bool symmetric);
/// Sparse JSON: nonzero cells only, null rows for empty classes.
std::string render_confusion_json(const ConfusionTable& table);

/// Columns: kind,example,label,x_perplexity,c_perplexity,top_voted,
/// top_expected,suggested_label,class_a,class_b,confusion.
std::string render_findings(std::span<const AuditFinding> findings,
                            std::span<const std::string> names = {});

/// Columns: bin_lo,bin_hi,count.
std::string render_histogram(const stats::Histogram& histogram);
/// Columns: grid,density.
std::string render_kde(const stats::KdeCurve& curve);
/// Columns: example,original_label,corrupted_label.
std::string render_corruption_log(std::span<const LabelFlip> log);

void write_text(const std::filesystem::path& path, std::string_view body);

/// Example reports as CSV or JSON.
void write_report(const std::filesystem::path& path, std::span<const ExampleReport> reports,
                  ReportFormat format, std::span<const std::string> names = {});

}  // namespace xplx
