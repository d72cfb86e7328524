/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

// xplx command line. Talks to the library only through the C API.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xplx/xplx.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

int exit_code(xplx_status status) {
  if (status == XPLX_OK) return kExitOk;
  if (status == XPLX_ERR_INVARIANT_VIOLATION || status == XPLX_ERR_INTERNAL) return kExitInternal;
  return kExitInput;
}

int report(xplx_status status) {
  if (status != XPLX_OK) std::fprintf(stderr, "xplx: error: %s\n", xplx_last_error());
  return exit_code(status);
}

// --threads wins, then XPLX_THREADS, then every core (0).
size_t resolve_threads(const CLI::Option* flag, size_t flag_value) {
  if (flag->count() > 0) return flag_value;
  const char* env = std::getenv("XPLX_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') {
    std::fprintf(stderr, "xplx: warning: ignoring XPLX_THREADS='%s'\n", env);
    return 0;
  }
  return static_cast<size_t>(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Per-example and per-class difficulty from a population of classifiers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(xplx_version()));

  std::string manifest;
  std::string labels;
  std::string out_dir;
  std::string format = "csv";
  std::string class_names;
  size_t threads = 0;
  size_t top_k = 5;

  app.add_option("--manifest", manifest, "Population manifest (.json) or small CSV population (.csv)");
  app.add_option("--labels", labels, "Labels file, one class index per line");
  app.add_option("--out", out_dir, "Output directory (created if absent)");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--class-names", class_names, "Optional class names, one per line");
  const CLI::Option* threads_opt =
      app.add_option("--threads", threads, "Worker threads; 0 = all cores (env XPLX_THREADS)");
  app.add_option("--top-k", top_k, "Length of top voted / expected label lists")
      ->check(CLI::PositiveNumber);
  app.fallthrough();

  auto* analyze = app.add_subcommand("analyze", "Per-example C-/X-perplexity and top labels");

  auto* classes = app.add_subcommand("classes", "Class perplexities and confusion tables");
  std::string sort = "cp";
  classes->add_option("--sort", sort, "Sort key")->check(CLI::IsMember({"cp", "xp"}));

  auto* flag = app.add_subcommand("flag", "Mislabel, inappropriate-label and class-pair findings");
  xplx_flag_options flag_opts;
  xplx_flag_options_init(&flag_opts);
  std::string pair_mode = "voted";
  flag->add_option("--tau-x", flag_opts.tau_x, "X-perplexity threshold")->capture_default_str();
  flag->add_option("--tau-c", flag_opts.tau_c, "C-perplexity threshold")->capture_default_str();
  flag->add_option("--tau-s", flag_opts.tau_s, "Class-pair confusion threshold")->capture_default_str();
  flag->add_option("--pair-mode", pair_mode, "Confusion table used for class pairs")
      ->check(CLI::IsMember({"voted", "expected"}));

  auto* compare = app.add_subcommand("compare", "Compare sub-populations");
  std::vector<std::string> specs;
  xplx_compare_options compare_opts;
  xplx_compare_options_init(&compare_opts);
  bool no_kde = false;
  compare->add_option("--subset", specs, "name=NAME:KEY=V1,V2 (keys: train_fraction, architecture, "
                                         "epoch_stage, id, tier); repeat for each subset")
      ->required();
  compare->add_option("--bins", compare_opts.bins, "Histogram bins")->check(CLI::PositiveNumber);
  compare->add_option("--kde-points", compare_opts.kde_points, "KDE grid points")
      ->check(CLI::Range(size_t{2}, size_t{1} << 20));
  compare->add_flag("--no-kde", no_kde, "Skip kernel density curves");

  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic population");
  xplx_synth_options synth_opts;
  xplx_synth_options_init(&synth_opts);
  std::string tiers;
  synth->add_option("--classes", synth_opts.num_classes, "Number of classes M")->capture_default_str();
  synth->add_option("--examples", synth_opts.num_examples, "Number of examples E")->capture_default_str();
  synth->add_option("--tiers", tiers, "label:count:lo:hi,... (default 25/50/75/100, ten each)");
  synth->add_option("--alpha0", synth_opts.base_concentration, "Base Dirichlet concentration")
      ->capture_default_str();
  synth->add_option("--kappa", synth_opts.sharpness, "Strength sharpness")->capture_default_str();
  synth->add_option("--confusion", synth_opts.confusion, "Weight of the per-example decoy class")
      ->capture_default_str();
  synth->add_option("--mislabel-fraction", synth_opts.mislabel_fraction,
                    "Fraction of labels replaced by a wrong class")
      ->capture_default_str();
  synth->add_option("--seed", synth_opts.seed, "64-bit seed")->capture_default_str();

  auto* hist = app.add_subcommand("hist", "Histogram and KDE data for one metric");
  xplx_hist_options hist_opts;
  xplx_hist_options_init(&hist_opts);
  std::string metric = "xp";
  hist->add_option("--metric", metric, "Metric")->check(CLI::IsMember({"cp", "xp"}));
  hist->add_option("--bins", hist_opts.bins, "Histogram bins")->check(CLI::PositiveNumber);
  hist->add_option("--kde-points", hist_opts.kde_points, "KDE grid points")
      ->check(CLI::Range(size_t{2}, size_t{1} << 20));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  xplx_run_config config;
  xplx_run_config_init(&config);
  config.manifest = manifest.empty() ? nullptr : manifest.c_str();
  config.labels = labels.empty() ? nullptr : labels.c_str();
  config.out_dir = out_dir.empty() ? nullptr : out_dir.c_str();
  config.format_json = format == "json" ? 1 : 0;
  config.class_names = class_names.empty() ? nullptr : class_names.c_str();
  config.threads = resolve_threads(threads_opt, threads);
  config.top_k = top_k;

  if (*analyze) return report(xplx_cmd_analyze(&config));
  if (*classes) return report(xplx_cmd_classes(&config, sort == "xp"));
  if (*flag) {
    flag_opts.pairs_from_expected = pair_mode == "expected";
    size_t mislabel = 0;
    size_t inappropriate = 0;
    size_t pairs = 0;
    const xplx_status st = xplx_cmd_flag(&config, &flag_opts, &mislabel, &inappropriate, &pairs);
    if (st == XPLX_OK) {
      std::fprintf(stderr, "xplx: %zu mislabel, %zu inappropriate-label, %zu class-pair findings\n",
                   mislabel, inappropriate, pairs);
    }
    return report(st);
  }
  if (*compare) {
    compare_opts.with_kde = no_kde ? 0 : 1;
    std::vector<const char*> ptrs;
    for (const auto& s : specs) ptrs.push_back(s.c_str());
    return report(xplx_cmd_compare(&config, ptrs.data(), ptrs.size(), &compare_opts));
  }
  if (*synth) {
    if (out_dir.empty()) {
      std::fprintf(stderr, "xplx: error: synth requires --out\n");
      return kExitInput;
    }
    synth_opts.tiers = tiers.empty() ? nullptr : tiers.c_str();
    synth_opts.threads = config.threads;
    const xplx_status st = xplx_cmd_synth(&synth_opts, out_dir.c_str());
    if (st == XPLX_OK) std::printf("seed %llu\n", static_cast<unsigned long long>(synth_opts.seed));
    return report(st);
  }
  if (*hist) {
    hist_opts.metric_cp = metric == "cp" ? 1 : 0;
    return report(xplx_cmd_hist(&config, &hist_opts));
  }
  return kExitInput;
}
