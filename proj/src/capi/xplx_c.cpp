/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "xplx/xplx.h"

#include <algorithm>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "xplx/commands.hpp"
#include "xplx/diagnostics.hpp"
#include "xplx/error.hpp"
#include "xplx/perplexity.hpp"
#include "xplx/population.hpp"
#include "xplx/stats.hpp"
#include "xplx/storage.hpp"

struct xplx_population {
  xplx::Population value;
};

struct xplx_labels {
  xplx::LabelVector value;
};

struct xplx_analysis {
  std::vector<xplx::ExampleReport> reports;
};

namespace {

thread_local std::string g_last_error;

xplx_status status_of(xplx::ErrorKind kind) {
  using K = xplx::ErrorKind;
  switch (kind) {
    case K::NegativeProbability: return XPLX_ERR_NEGATIVE_PROBABILITY;
    case K::NonFinite: return XPLX_ERR_NON_FINITE;
    case K::SumOutOfTolerance: return XPLX_ERR_SUM_OUT_OF_TOLERANCE;
    case K::ManifestSchemaError: return XPLX_ERR_MANIFEST_SCHEMA;
    case K::DimensionMismatch: return XPLX_ERR_DIMENSION_MISMATCH;
    case K::PayloadTruncated: return XPLX_ERR_PAYLOAD_TRUNCATED;
    case K::LineCountMismatch: return XPLX_ERR_LINE_COUNT_MISMATCH;
    case K::LabelOutOfRange: return XPLX_ERR_LABEL_OUT_OF_RANGE;
    case K::ParseError: return XPLX_ERR_PARSE;
    case K::IncompleteGrid: return XPLX_ERR_INCOMPLETE_GRID;
    case K::HeaderMismatch: return XPLX_ERR_HEADER_MISMATCH;
    case K::IoError: return XPLX_ERR_IO;
    case K::EmptyPopulation: return XPLX_ERR_EMPTY_POPULATION;
    case K::EmptyInput: return XPLX_ERR_EMPTY_INPUT;
    case K::DegenerateSample: return XPLX_ERR_DEGENERATE_SAMPLE;
    case K::EmptySubset: return XPLX_ERR_EMPTY_SUBSET;
    case K::ConfigInvalid: return XPLX_ERR_CONFIG_INVALID;
    case K::InvalidArgument: return XPLX_ERR_INVALID_ARGUMENT;
    case K::InvariantViolation: return XPLX_ERR_INVARIANT_VIOLATION;
  }
  return XPLX_ERR_INTERNAL;
}

template <typename Fn>
xplx_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return XPLX_OK;
  } catch (const xplx::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return XPLX_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return XPLX_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return XPLX_ERR_INTERNAL;
  }
}

void require(const void* ptr, const char* what) {
  if (ptr == nullptr) xplx::fail(xplx::ErrorKind::InvalidArgument, std::string(what) + " is NULL");
}

xplx::RunConfig to_run_config(const xplx_run_config* c) {
  require(c, "config");
  xplx::RunConfig rc;
  if (c->manifest) rc.manifest = c->manifest;
  if (c->labels) rc.labels = c->labels;
  if (c->out_dir) rc.out_dir = c->out_dir;
  rc.format = c->format_json ? xplx::ReportFormat::Json : xplx::ReportFormat::Csv;
  rc.threads = c->threads;
  if (c->class_names && *c->class_names) rc.class_names = c->class_names;
  rc.top_k = c->top_k == 0 ? xplx::kDefaultTopK : c->top_k;
  return rc;
}

std::vector<std::vector<double>> rows_of(const double* rows, size_t n, size_t m) {
  if (n > 0) require(rows, "rows");
  std::vector<std::vector<double>> out(n);
  for (size_t i = 0; i < n; ++i) out[i].assign(rows + i * m, rows + (i + 1) * m);
  return out;
}

xplx_status copy_scores(const xplx_analysis* a, size_t example, bool voted, xplx_label_score* out,
                        size_t capacity, size_t* written) {
  return guarded([&] {
    require(a, "analysis");
    if (example >= a->reports.size()) {
      xplx::fail(xplx::ErrorKind::InvalidArgument, "example index out of range");
    }
    const auto& list = voted ? a->reports[example].top_voted_labels
                             : a->reports[example].top_expected_labels;
    if (capacity > 0) require(out, "out");
    const size_t count = std::min(capacity, list.size());
    for (size_t k = 0; k < count; ++k) out[k] = {list[k].label, list[k].value};
    if (written) *written = list.size();
  });
}

}  // namespace

extern "C" {

const char* xplx_status_name(xplx_status status) {
  if (status == XPLX_OK) return "ok";
  if (status == XPLX_ERR_INTERNAL) return "Internal";
  if (status < XPLX_ERR_NEGATIVE_PROBABILITY || status > XPLX_ERR_INVARIANT_VIOLATION) {
    return "Unknown";
  }
  // Status codes follow the ErrorKind declaration order, starting at 1.
  return xplx::to_string(static_cast<xplx::ErrorKind>(status - 1)).data();
}

const char* xplx_last_error(void) { return g_last_error.c_str(); }

const char* xplx_version(void) { return XPLX_VERSION_STRING; }

void xplx_set_diagnostic_handler(xplx_diagnostic_fn handler, void* user_data) {
  if (handler == nullptr) {
    xplx::set_diagnostic_sink({});
    return;
  }
  xplx::set_diagnostic_sink([handler, user_data](std::string_view msg) {
    const std::string text(msg);
    handler(text.c_str(), user_data);
  });
}

xplx_status xplx_population_load(const char* manifest_path, size_t threads, xplx_population** out) {
  return guarded([&] {
    require(manifest_path, "manifest_path");
    require(out, "out");
    *out = new xplx_population{xplx::load_population(manifest_path, threads)};
  });
}

xplx_status xplx_population_from_array(const double* values, size_t n, size_t e, size_t m,
                                       xplx_population** out) {
  return guarded([&] {
    require(values, "values");
    require(out, "out");
    if (n == 0) xplx::fail(xplx::ErrorKind::EmptyPopulation, "no classifiers");
    if (e == 0 || m == 0) xplx::fail(xplx::ErrorKind::InvalidArgument, "dimensions must be positive");
    xplx::PopulationManifest manifest;
    manifest.num_classes = m;
    manifest.num_examples = e;
    std::vector<std::shared_ptr<const xplx::ClassifierBlock>> blocks;
    for (size_t i = 0; i < n; ++i) {
      std::vector<float> block(e * m);
      const double* src = values + i * e * m;
      for (size_t k = 0; k < e * m; ++k) block[k] = static_cast<float>(src[k]);
      blocks.push_back(std::make_shared<const xplx::ClassifierBlock>(std::move(block), e, m));
      xplx::ClassifierEntry entry;
      entry.id = "c" + std::to_string(i);
      entry.architecture = "array";
      entry.payload_path = "payloads/" + entry.id + ".bin";
      manifest.classifiers.push_back(std::move(entry));
    }
    manifest.validate();
    *out = new xplx_population{
        xplx::Population{std::move(manifest), xplx::PredictionStore(e, m, std::move(blocks))}};
  });
}

void xplx_population_free(xplx_population* population) { delete population; }

xplx_status xplx_population_dims(const xplx_population* p, size_t* n, size_t* e, size_t* m) {
  return guarded([&] {
    require(p, "population");
    if (n) *n = p->value.store.num_classifiers();
    if (e) *e = p->value.store.num_examples();
    if (m) *m = p->value.store.num_classes();
  });
}

xplx_status xplx_population_subset(const xplx_population* p, const char* spec,
                                   xplx_population** out) {
  return guarded([&] {
    require(p, "population");
    require(spec, "spec");
    require(out, "out");
    const auto named = xplx::parse_subset_spec(spec);
    *out = new xplx_population{xplx::subset(p->value, named.filter)};
  });
}

xplx_status xplx_population_save(const xplx_population* p, const char* manifest_path) {
  return guarded([&] {
    require(p, "population");
    require(manifest_path, "manifest_path");
    xplx::save_population(p->value, manifest_path);
  });
}

xplx_status xplx_labels_load(const char* path, size_t num_examples, size_t num_classes,
                             xplx_labels** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new xplx_labels{xplx::load_labels(path, num_examples, num_classes)};
  });
}

xplx_status xplx_labels_create(const uint32_t* values, size_t num_examples, size_t num_classes,
                               xplx_labels** out) {
  return guarded([&] {
    if (num_examples > 0) require(values, "values");
    require(out, "out");
    std::vector<xplx::ClassIndex> v(values, values + num_examples);
    *out = new xplx_labels{xplx::LabelVector(std::move(v), num_classes)};
  });
}

void xplx_labels_free(xplx_labels* labels) { delete labels; }

xplx_status xplx_analyze(const xplx_population* p, const xplx_labels* labels, size_t top_k,
                         size_t threads, xplx_analysis** out) {
  return guarded([&] {
    require(p, "population");
    require(labels, "labels");
    require(out, "out");
    xplx::AnalysisOptions opts;
    opts.top_k = top_k == 0 ? xplx::kDefaultTopK : top_k;
    opts.threads = threads;
    opts.keep_fractions = false;
    *out = new xplx_analysis{xplx::analyze_examples(p->value.store, labels->value, opts)};
  });
}

void xplx_analysis_free(xplx_analysis* analysis) { delete analysis; }

size_t xplx_analysis_count(const xplx_analysis* analysis) {
  return analysis ? analysis->reports.size() : 0;
}

xplx_status xplx_analysis_metrics(const xplx_analysis* a, double* c_perplexity,
                                  double* x_perplexity, size_t len) {
  return guarded([&] {
    require(a, "analysis");
    if (len != a->reports.size()) {
      xplx::fail(xplx::ErrorKind::InvalidArgument, "len must equal the number of examples");
    }
    for (size_t e = 0; e < len; ++e) {
      if (c_perplexity) c_perplexity[e] = a->reports[e].c_perplexity;
      if (x_perplexity) x_perplexity[e] = a->reports[e].x_perplexity;
    }
  });
}

xplx_status xplx_analysis_top_voted(const xplx_analysis* a, size_t example, xplx_label_score* out,
                                    size_t capacity, size_t* written) {
  return copy_scores(a, example, true, out, capacity, written);
}

xplx_status xplx_analysis_top_expected(const xplx_analysis* a, size_t example,
                                       xplx_label_score* out, size_t capacity, size_t* written) {
  return copy_scores(a, example, false, out, capacity, written);
}

xplx_status xplx_c_perplexity(const double* rows, size_t n, size_t m, double* out) {
  return guarded([&] {
    require(out, "out");
    const auto r = rows_of(rows, n, m);
    *out = xplx::c_perplexity(r);
  });
}

xplx_status xplx_x_perplexity(const double* rows, size_t n, size_t m, uint32_t label, double* out) {
  return guarded([&] {
    require(out, "out");
    const auto r = rows_of(rows, n, m);
    *out = xplx::x_perplexity(r, label);
  });
}

xplx_status xplx_pearson(const double* x, const double* y, size_t n, double* out) {
  return guarded([&] {
    require(out, "out");
    if (n > 0) {
      require(x, "x");
      require(y, "y");
    }
    *out = xplx::stats::pearson({x, n}, {y, n});
  });
}

xplx_status xplx_spearman(const double* x, const double* y, size_t n, double* out) {
  return guarded([&] {
    require(out, "out");
    if (n > 0) {
      require(x, "x");
      require(y, "y");
    }
    *out = xplx::stats::spearman({x, n}, {y, n});
  });
}

xplx_status xplx_kendall(const double* x, const double* y, size_t n, double* tau_a, double* tau_b) {
  return guarded([&] {
    if (n > 0) {
      require(x, "x");
      require(y, "y");
    }
    const auto k = xplx::stats::kendall({x, n}, {y, n});
    if (tau_a) *tau_a = k.tau_a;
    if (tau_b) *tau_b = k.tau_b;
  });
}

void xplx_run_config_init(xplx_run_config* config) {
  if (config) *config = xplx_run_config{nullptr, nullptr, nullptr, 0, 0, nullptr, xplx::kDefaultTopK};
}

xplx_status xplx_cmd_analyze(const xplx_run_config* config) {
  return guarded([&] { xplx::cmd_analyze(to_run_config(config)); });
}

xplx_status xplx_cmd_classes(const xplx_run_config* config, int sort_by_xp) {
  return guarded([&] {
    xplx::cmd_classes(to_run_config(config),
                      sort_by_xp ? xplx::ClassSortKey::XPerplexity : xplx::ClassSortKey::CPerplexity);
  });
}

void xplx_flag_options_init(xplx_flag_options* options) {
  if (options) {
    const xplx::FlagOptions d;
    *options = xplx_flag_options{d.thresholds.tau_x, d.thresholds.tau_c, d.tau_s, 0};
  }
}

xplx_status xplx_cmd_flag(const xplx_run_config* config, const xplx_flag_options* options,
                          size_t* mislabel, size_t* inappropriate, size_t* pairs) {
  return guarded([&] {
    xplx::FlagOptions opts;
    if (options) {
      opts.thresholds.tau_x = options->tau_x;
      opts.thresholds.tau_c = options->tau_c;
      opts.tau_s = options->tau_s;
      opts.pair_mode =
          options->pairs_from_expected ? xplx::ConfusionMode::Expected : xplx::ConfusionMode::Voted;
    }
    const auto counts = xplx::cmd_flag(to_run_config(config), opts);
    if (mislabel) *mislabel = counts.mislabel;
    if (inappropriate) *inappropriate = counts.inappropriate;
    if (pairs) *pairs = counts.pairs;
  });
}

void xplx_compare_options_init(xplx_compare_options* options) {
  if (options) {
    const xplx::CompareOptions d;
    *options = xplx_compare_options{d.bins, d.kde_points, d.with_kde ? 1 : 0};
  }
}

xplx_status xplx_cmd_compare(const xplx_run_config* config, const char* const* specs,
                             size_t spec_count, const xplx_compare_options* options) {
  return guarded([&] {
    if (spec_count > 0) require(specs, "specs");
    std::vector<std::string> list;
    for (size_t i = 0; i < spec_count; ++i) {
      require(specs[i], "spec");
      list.emplace_back(specs[i]);
    }
    xplx::CompareOptions opts;
    if (options) {
      opts.bins = options->bins;
      opts.kde_points = options->kde_points;
      opts.with_kde = options->with_kde != 0;
    }
    xplx::cmd_compare(to_run_config(config), list, opts);
  });
}

void xplx_synth_options_init(xplx_synth_options* options) {
  if (options) {
    const xplx::SynthConfig d;
    *options = xplx_synth_options{d.num_classes, d.num_examples, nullptr, d.base_concentration,
                                  d.sharpness, d.confusion, d.mislabel_fraction, d.seed, d.threads};
  }
}

xplx_status xplx_cmd_synth(const xplx_synth_options* options, const char* out_dir) {
  return guarded([&] {
    require(options, "options");
    require(out_dir, "out_dir");
    xplx::SynthConfig cfg;
    cfg.num_classes = options->num_classes;
    cfg.num_examples = options->num_examples;
    if (options->tiers) cfg.tiers = xplx::parse_tiers(options->tiers);
    cfg.base_concentration = options->base_concentration;
    cfg.sharpness = options->sharpness;
    cfg.confusion = options->confusion;
    cfg.mislabel_fraction = options->mislabel_fraction;
    cfg.seed = options->seed;
    cfg.threads = options->threads;
    xplx::cmd_synth(cfg, out_dir);
  });
}

void xplx_hist_options_init(xplx_hist_options* options) {
  if (options) {
    const xplx::HistOptions d;
    *options = xplx_hist_options{0, d.bins, d.kde_points};
  }
}

xplx_status xplx_cmd_hist(const xplx_run_config* config, const xplx_hist_options* options) {
  return guarded([&] {
    xplx::HistOptions opts;
    if (options) {
      opts.metric = options->metric_cp ? xplx::HistMetric::CPerplexity : xplx::HistMetric::XPerplexity;
      opts.bins = options->bins;
      opts.kde_points = options->kde_points;
    }
    xplx::cmd_hist(to_run_config(config), opts);
  });
}

}  // extern "C"
