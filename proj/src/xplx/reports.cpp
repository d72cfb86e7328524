/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "xplx/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "xplx/error.hpp"

namespace xplx {

using json = nlohmann::ordered_json;

namespace {

std::string class_text(ClassIndex c, std::span<const std::string> names) {
  if (c < names.size()) return names[c];
  return std::to_string(c);
}

json scores_json(std::span<const LabelScore> scores, std::span<const std::string> names) {
  json arr = json::array();
  for (const LabelScore& s : scores) {
    json item;
    item["class"] = s.label;
    if (s.label < names.size()) item["name"] = names[s.label];
    item["value"] = s.value;
    arr.push_back(std::move(item));
  }
  return arr;
}

json sparse_row(const ConfusionTable& table, std::size_t c, bool symmetric) {
  json arr = json::array();
  for (std::size_t j = 0; j < table.num_classes; ++j) {
    const double v = symmetric ? table.sym_at(c, j) : table.freq_at(c, j);
    if (std::isnan(v) || v == 0.0) continue;
    arr.push_back(json{{"class", j}, {"value", v}});
  }
  return arr;
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view text) noexcept {
  if (text == "csv") return ReportFormat::Csv;
  if (text == "json") return ReportFormat::Json;
  return std::nullopt;
}

std::string format_real(double value) {
  if (std::isnan(value)) return {};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

std::string format_real(const std::optional<double>& value) {
  return value ? format_real(*value) : std::string();
}

std::string format_label_scores(std::span<const LabelScore> scores,
                                std::span<const std::string> names) {
  std::string out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i > 0) out += '|';
    out += class_text(scores[i].label, names);
    out += ':';
    out += format_real(scores[i].value);
  }
  return out;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string render_examples(std::span<const ExampleReport> reports, ReportFormat format,
                            std::span<const std::string> names) {
  if (format == ReportFormat::Json) {
    json arr = json::array();
    for (const ExampleReport& r : reports) {
      json row;
      row["index"] = r.example_index;
      row["c_perplexity"] = r.c_perplexity;
      row["x_perplexity"] = r.x_perplexity;
      row["top_voted"] = scores_json(r.top_voted_labels, names);
      row["top_expected"] = scores_json(r.top_expected_labels, names);
      arr.push_back(std::move(row));
    }
    return arr.dump(2) + "\n";
  }
  std::string out = "index,c_perplexity,x_perplexity,top_voted,top_expected\n";
  for (const ExampleReport& r : reports) {
    out += std::to_string(r.example_index);
    out += ',' + format_real(r.c_perplexity);
    out += ',' + format_real(r.x_perplexity);
    out += ',' + csv_escape(format_label_scores(r.top_voted_labels, names));
    out += ',' + csv_escape(format_label_scores(r.top_expected_labels, names));
    out += '\n';
  }
  return out;
}

std::string render_classes(std::span<const ClassReport> classes,
                           std::span<const std::string> names) {
  std::string out =
      "class,name,example_count,c_perplexity,x_perplexity,top_voted_confusion,"
      "top_expected_confusion\n";
  for (const ClassReport& c : classes) {
    out += std::to_string(c.label);
    out += ',' + (c.label < names.size() ? csv_escape(names[c.label]) : std::string());
    out += ',' + std::to_string(c.example_count);
    out += ',' + format_real(c.c_perplexity);
    out += ',' + format_real(c.x_perplexity);
    out += ',' + csv_escape(format_label_scores(c.top_voted_confusion, names));
    out += ',' + csv_escape(format_label_scores(c.top_expected_confusion, names));
    out += '\n';
  }
  return out;
}

std::string render_confusion_csv(const ConfusionTable& table, bool symmetric) {
  const std::size_t m = table.num_classes;
  std::string out = "class";
  for (std::size_t j = 0; j < m; ++j) out += ',' + std::to_string(j);
  out += '\n';
  for (std::size_t c = 0; c < m; ++c) {
    out += std::to_string(c);
    for (std::size_t j = 0; j < m; ++j) {
      out += ',' + format_real(symmetric ? table.sym_at(c, j) : table.freq_at(c, j));
    }
    out += '\n';
  }
  return out;
}

std::string render_confusion_json(const ConfusionTable& table) {
  json doc;
  doc["mode"] = std::string(to_string(table.mode));
  doc["num_classes"] = table.num_classes;
  json rows = json::array();
  for (std::size_t c = 0; c < table.num_classes; ++c) {
    json row;
    row["class"] = c;
    row["example_count"] = table.class_counts[c];
    if (table.has_row(c)) {
      row["freq"] = sparse_row(table, c, false);
      row["sym"] = sparse_row(table, c, true);
    } else {
      row["freq"] = nullptr;
      row["sym"] = nullptr;
    }
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string render_findings(std::span<const AuditFinding> findings,
                            std::span<const std::string> names) {
  std::string out =
      "kind,example,label,x_perplexity,c_perplexity,top_voted,top_expected,suggested_label,"
      "class_a,class_b,confusion\n";
  for (const AuditFinding& f : findings) {
    out += std::string(to_string(f.kind));
    if (f.kind == FindingKind::OverlappingClassPair) {
      out += ",,,,,,,,";
      out += csv_escape(class_text(f.class_a, names));
      out += ',' + csv_escape(class_text(f.class_b, names));
      out += ',' + format_real(f.confusion);
    } else {
      out += ',' + std::to_string(f.example_index);
      out += ',' + csv_escape(class_text(f.label, names));
      out += ',' + format_real(f.x_perplexity);
      out += ',' + format_real(f.c_perplexity);
      out += ',' + csv_escape(format_label_scores(f.top_voted, names));
      out += ',' + csv_escape(format_label_scores(f.top_expected, names));
      out += ',';
      if (f.suggested_label) out += csv_escape(class_text(*f.suggested_label, names));
      out += ",,,";
    }
    out += '\n';
  }
  return out;
}

std::string render_histogram(const stats::Histogram& histogram) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
    out += format_real(histogram.spec.edge(i));
    out += ',' + format_real(histogram.spec.edge(i + 1));
    out += ',' + std::to_string(histogram.counts[i]);
    out += '\n';
  }
  return out;
}

std::string render_kde(const stats::KdeCurve& curve) {
  std::string out = "grid,density\n";
  char buf[96];
  for (std::size_t k = 0; k < curve.grid.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6g\n", curve.grid[k], curve.density[k]);
    out += buf;
  }
  return out;
}

std::string render_corruption_log(std::span<const LabelFlip> log) {
  std::string out = "example,original_label,corrupted_label\n";
  for (const LabelFlip& flip : log) {
    out += std::to_string(flip.example) + ',' + std::to_string(flip.original) + ',' +
           std::to_string(flip.corrupted) + '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view body) {
  const auto parent = path.parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) fail(ErrorKind::IoError, "cannot create directory '" + parent.string() + "'");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::IoError, "cannot write '" + path.string() + "'");
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) fail(ErrorKind::IoError, "write failed for '" + path.string() + "'");
}

void write_report(const std::filesystem::path& path, std::span<const ExampleReport> reports,
                  ReportFormat format, std::span<const std::string> names) {
  write_text(path, render_examples(reports, format, names));
}

}  // namespace xplx
