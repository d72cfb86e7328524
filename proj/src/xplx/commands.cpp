/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "xplx/commands.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "xplx/diagnostics.hpp"
#include "xplx/error.hpp"
#include "xplx/perplexity.hpp"
#include "xplx/storage.hpp"

namespace xplx {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Inputs {
  Population population;
  LabelVector labels;
  std::vector<std::string> names;
};

Inputs load_inputs(const RunConfig& config) {
  if (config.manifest.empty()) fail(ErrorKind::ConfigInvalid, "--manifest is required");
  if (config.labels.empty()) fail(ErrorKind::ConfigInvalid, "--labels is required");
  if (config.out_dir.empty()) fail(ErrorKind::ConfigInvalid, "--out is required");
  Population population = load_population(config.manifest, config.threads);
  LabelVector labels = load_labels(config.labels, population.store.num_examples(),
                                   population.store.num_classes());
  std::vector<std::string> names;
  if (config.class_names) names = load_class_names(*config.class_names, population.store.num_classes());
  return {std::move(population), std::move(labels), std::move(names)};
}

std::vector<ExampleReport> analyze(const Inputs& in, const RunConfig& config, bool keep_fractions) {
  AnalysisOptions opts;
  opts.top_k = config.top_k;
  opts.threads = config.threads;
  opts.keep_fractions = keep_fractions;
  return analyze_examples(in.population.store, in.labels, opts);
}

json metric_json(std::span<const double> values) {
  const auto box = stats::box_stats(values);
  json j;
  j["mean"] = stats::mean(values);
  j["stddev"] = stats::stddev(values);
  j["min"] = box.min;
  j["q1"] = box.q1;
  j["median"] = box.median;
  j["q3"] = box.q3;
  j["max"] = box.max;
  return j;
}

json correlation_json(const std::optional<stats::CorrelationReport>& r) {
  if (!r) return nullptr;
  return json{{"pearson", r->pearson},
              {"spearman", r->spearman},
              {"kendall_tau_a", r->kendall_tau_a},
              {"kendall_tau_b", r->kendall_tau_b},
              {"n", r->n}};
}

std::optional<stats::CorrelationReport> correlate_or_null(std::span<const double> x,
                                                          std::span<const double> y) {
  try {
    return stats::correlate(x, y);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateSample) throw;
    return std::nullopt;
  }
}

std::string safe_dir_name(const std::string& name) {
  std::string out;
  for (char ch : name) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '-' || ch == '_' || ch == '.';
    out.push_back(ok ? ch : '_');
  }
  if (out.empty() || out == "." || out == "..") out = "subset";
  return out;
}

std::string correlation_row(const std::string& a, const std::string& b, const char* metric,
                            const std::optional<stats::CorrelationReport>& r, std::size_t n) {
  std::string row = csv_escape(a) + ',' + csv_escape(b) + ',' + metric;
  if (r) {
    row += ',' + format_real(r->pearson) + ',' + format_real(r->spearman) + ',' +
           format_real(r->kendall_tau_a) + ',' + format_real(r->kendall_tau_b);
  } else {
    row += ",,,,";
  }
  row += ',' + std::to_string(n) + '\n';
  return row;
}

std::string spread_row(const SubsetSummary& s, const char* metric, const MetricSummary& m) {
  return csv_escape(s.name) + ',' + std::to_string(s.num_classifiers) + ',' + metric + ',' +
         format_real(m.mean) + ',' + format_real(m.stddev) + ',' + format_real(m.box.iqr()) + ',' +
         format_real(m.box.min) + ',' + format_real(m.box.q1) + ',' + format_real(m.box.median) +
         ',' + format_real(m.box.q3) + ',' + format_real(m.box.max) + '\n';
}

}  // namespace

void cmd_analyze(const RunConfig& config) {
  const Inputs in = load_inputs(config);
  const auto reports = analyze(in, config, false);
  const fs::path out = config.out_dir;
  write_report(out / (config.format == ReportFormat::Json ? "examples.json" : "examples.csv"),
               reports, config.format, in.names);

  std::vector<double> cp(reports.size());
  std::vector<double> xp(reports.size());
  for (std::size_t e = 0; e < reports.size(); ++e) {
    cp[e] = reports[e].c_perplexity;
    xp[e] = reports[e].x_perplexity;
  }
  json summary;
  summary["num_examples"] = reports.size();
  summary["num_classifiers"] = in.population.store.num_classifiers();
  summary["num_classes"] = in.population.store.num_classes();
  summary["c_perplexity"] = metric_json(cp);
  summary["x_perplexity"] = metric_json(xp);
  summary["correlation"] = correlation_json(correlate_or_null(cp, xp));
  write_text(out / "summary.json", summary.dump(2) + "\n");

  // C-perplexity box statistics per X-perplexity bin.
  const stats::HistogramSpec bins{0.0, 1.0, 10};
  std::vector<std::vector<double>> groups(bins.bin_count);
  for (std::size_t e = 0; e < xp.size(); ++e) {
    if (const auto b = stats::bin_of(xp[e], bins)) groups[*b].push_back(cp[e]);
  }
  std::string box = "xp_lo,xp_hi,count,cp_min,cp_q1,cp_median,cp_q3,cp_max\n";
  for (std::size_t b = 0; b < bins.bin_count; ++b) {
    box += format_real(bins.edge(b)) + ',' + format_real(bins.edge(b + 1)) + ',' +
           std::to_string(groups[b].size());
    if (groups[b].empty()) {
      box += ",,,,,\n";
      continue;
    }
    const auto s = stats::box_stats(groups[b]);
    box += ',' + format_real(s.min) + ',' + format_real(s.q1) + ',' + format_real(s.median) + ',' +
           format_real(s.q3) + ',' + format_real(s.max) + '\n';
  }
  write_text(out / "cp_by_xp.csv", box);
}

void cmd_classes(const RunConfig& config, ClassSortKey sort) {
  const Inputs in = load_inputs(config);
  const auto reports = analyze(in, config, false);
  auto classes = class_perplexities(reports, in.labels);
  for (const auto& c : classes) {
    if (c.example_count > 0) continue;
    std::string what = "class " + std::to_string(c.label);
    if (c.label < in.names.size()) what += " (" + in.names[c.label] + ")";
    warn(what + " has no examples");
  }
  const fs::path out = config.out_dir;
  for (ConfusionMode mode : {ConfusionMode::Voted, ConfusionMode::Expected}) {
    const auto table = class_confusion(in.population.store, in.labels, mode, config.threads);
    attach_top_confusion(classes, table, config.top_k);
    const std::string stem = "confusion_" + std::string(to_string(mode));
    if (config.format == ReportFormat::Json) {
      write_text(out / (stem + ".json"), render_confusion_json(table));
    } else {
      write_text(out / (stem + ".csv"), render_confusion_csv(table, false));
      write_text(out / (stem + "_sym.csv"), render_confusion_csv(table, true));
    }
  }
  sort_class_reports(classes, sort);
  write_text(out / "classes.csv", render_classes(classes, in.names));
}

FlagCounts cmd_flag(const RunConfig& config, const FlagOptions& options) {
  const Inputs in = load_inputs(config);
  const auto reports = analyze(in, config, false);
  auto findings = flag_examples(reports, in.labels, options.thresholds);
  const auto table =
      class_confusion(in.population.store, in.labels, options.pair_mode, config.threads);
  const auto pairs = flag_class_pairs(table, options.tau_s);
  FlagCounts counts;
  for (const auto& f : findings) {
    if (f.kind == FindingKind::MislabelCandidate) ++counts.mislabel;
    else ++counts.inappropriate;
  }
  counts.pairs = pairs.size();
  findings.insert(findings.end(), pairs.begin(), pairs.end());
  write_text(config.out_dir / "findings.csv", render_findings(findings, in.names));
  return counts;
}

void cmd_compare(const RunConfig& config, std::span<const std::string> subset_specs,
                 const CompareOptions& options) {
  if (subset_specs.size() < 2) {
    fail(ErrorKind::ConfigInvalid, "compare needs at least two --subset specs");
  }
  std::vector<NamedSubset> subsets;
  for (const auto& spec : subset_specs) subsets.push_back(parse_subset_spec(spec));
  std::set<std::string> dirs;
  for (const auto& s : subsets) {
    if (!dirs.insert(safe_dir_name(s.name)).second) {
      fail(ErrorKind::ConfigInvalid, "subset names '" + s.name + "' collide on disk");
    }
  }
  const Inputs in = load_inputs(config);
  CompareOptions opts = options;
  opts.threads = config.threads;
  const auto report = compare_populations(in.population, subsets, in.labels, opts);
  const fs::path out = config.out_dir;

  std::string spread = "subset,num_classifiers,metric,mean,stddev,iqr,min,q1,median,q3,max\n";
  for (const auto& s : report.subsets) {
    spread += spread_row(s, "x_perplexity", s.x_perplexity);
    spread += spread_row(s, "c_perplexity", s.c_perplexity);

    const fs::path dir = out / "subsets" / safe_dir_name(s.name);
    std::string metrics = "index,c_perplexity,x_perplexity\n";
    for (std::size_t e = 0; e < s.c_perplexity.values.size(); ++e) {
      metrics += std::to_string(e) + ',' + format_real(s.c_perplexity.values[e]) + ',' +
                 format_real(s.x_perplexity.values[e]) + '\n';
    }
    write_text(dir / "metrics.csv", metrics);
    write_text(dir / "hist_cp.csv", render_histogram(s.c_perplexity.histogram));
    write_text(dir / "hist_xp.csv", render_histogram(s.x_perplexity.histogram));
    if (s.c_perplexity.kde) write_text(dir / "kde_cp.csv", render_kde(*s.c_perplexity.kde));
    if (s.x_perplexity.kde) write_text(dir / "kde_xp.csv", render_kde(*s.x_perplexity.kde));
  }
  write_text(out / "spread.csv", spread);

  std::string corr = "subset_a,subset_b,metric,pearson,spearman,tau_a,tau_b,n\n";
  const std::size_t n = report.subsets.size();
  const std::size_t examples = in.population.store.num_examples();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const auto& p = report.pair(a, b);
      const auto& na = report.subsets[a].name;
      const auto& nb = report.subsets[b].name;
      corr += correlation_row(na, nb, "x_perplexity", p.x_perplexity, examples);
      corr += correlation_row(na, nb, "c_perplexity", p.c_perplexity, examples);
    }
  }
  write_text(out / "correlations.csv", corr);
}

void cmd_synth(const SynthConfig& config, const fs::path& out_dir) {
  if (out_dir.empty()) fail(ErrorKind::ConfigInvalid, "--out is required");
  const SynthResult result = synthesize_population(config);
  save_population(result.population, out_dir / "manifest.json");
  write_labels(out_dir / "labels.txt", result.labels);
  write_text(out_dir / "corruption_log.csv", render_corruption_log(result.corruption_log));
}

void cmd_hist(const RunConfig& config, const HistOptions& options) {
  const Inputs in = load_inputs(config);
  const auto reports = analyze(in, config, false);
  const bool cp = options.metric == HistMetric::CPerplexity;
  std::vector<double> values(reports.size());
  for (std::size_t e = 0; e < reports.size(); ++e) {
    values[e] = cp ? reports[e].c_perplexity : reports[e].x_perplexity;
  }
  const double m = static_cast<double>(in.population.store.num_classes());
  const stats::HistogramSpec spec = cp ? stats::HistogramSpec{1.0, std::max(m, 2.0), options.bins}
                                       : stats::HistogramSpec{0.0, 1.0, options.bins};
  const std::string tag = cp ? "cp" : "xp";
  write_text(config.out_dir / ("hist_" + tag + ".csv"), render_histogram(stats::histogram(values, spec)));
  try {
    const auto curve = stats::gaussian_kde(values, options.kde_points);
    write_text(config.out_dir / ("kde_" + tag + ".csv"), render_kde(curve));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateSample) throw;
    warn("skipping kernel density for " + tag + ": " + e.what());
  }
}

}  // namespace xplx
