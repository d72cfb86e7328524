/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "xplx/population.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "xplx/error.hpp"
#include "xplx/parallel.hpp"
#include "xplx/perplexity.hpp"
#include "xplx/random.hpp"

namespace xplx {

namespace {

constexpr std::uint64_t kLabelDomain = 1;
constexpr std::uint64_t kDecoyDomain = 2;
constexpr std::uint64_t kCorruptionDomain = 3;
constexpr std::uint64_t kClassifierDomain = 4;

constexpr std::string_view kFilterKeys = "name, train_fraction, architecture, epoch_stage, id, tier";

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
std::optional<std::vector<T>> intersect(const std::optional<std::vector<T>>& a,
                                        const std::optional<std::vector<T>>& b) {
  if (!a) return b;
  if (!b) return a;
  std::vector<T> out;
  for (const T& v : *a) {
    if (std::find(b->begin(), b->end(), v) != b->end()) out.push_back(v);
  }
  return out;
}

template <typename T>
bool admits(const std::optional<std::vector<T>>& allowed, const T& value) {
  return !allowed || std::find(allowed->begin(), allowed->end(), value) != allowed->end();
}

template <typename T>
bool parse_value(std::string_view text, T& out) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

MetricSummary summarize(std::vector<double> values, const stats::HistogramSpec& spec,
                        const CompareOptions& options) {
  MetricSummary s;
  s.mean = stats::mean(values);
  s.stddev = stats::stddev(values);
  s.box = stats::box_stats(values);
  s.histogram = stats::histogram(values, spec);
  if (options.with_kde) {
    try {
      s.kde = stats::gaussian_kde(values, options.kde_points);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateSample) throw;
    }
  }
  s.values = std::move(values);
  return s;
}

std::optional<stats::CorrelationReport> try_correlate(std::span<const double> x,
                                                      std::span<const double> y) {
  try {
    return stats::correlate(x, y);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateSample) throw;
    return std::nullopt;
  }
}

TrainFraction tier_fraction(const std::string& label) {
  if (label == "25") return TrainFraction::of(0.25);
  if (label == "50") return TrainFraction::of(0.5);
  if (label == "75") return TrainFraction::of(0.75);
  if (label == "100") return TrainFraction::of(1.0);
  return TrainFraction::synthetic();
}

std::string classifier_id(const std::string& tier, std::size_t k) {
  std::string num = std::to_string(k);
  if (num.size() < 3) num.insert(0, 3 - num.size(), '0');
  return "t" + tier + "-" + num;
}

}  // namespace

bool SubsetFilter::matches(const ClassifierEntry& entry) const {
  return admits(train_fractions, entry.train_fraction) && admits(architectures, entry.architecture) &&
         admits(epoch_stages, entry.epoch_stage) && admits(ids, entry.id) && admits(tiers, entry.tier);
}

SubsetFilter SubsetFilter::combined(const SubsetFilter& other) const {
  SubsetFilter f;
  f.train_fractions = intersect(train_fractions, other.train_fractions);
  f.architectures = intersect(architectures, other.architectures);
  f.epoch_stages = intersect(epoch_stages, other.epoch_stages);
  f.ids = intersect(ids, other.ids);
  f.tiers = intersect(tiers, other.tiers);
  return f;
}

NamedSubset parse_subset_spec(std::string_view spec) {
  NamedSubset out;
  if (spec.empty()) fail(ErrorKind::ConfigInvalid, "empty subset spec; expected key=value[:key=value...]");
  for (std::string_view clause : split(spec, ':')) {
    const std::size_t eq = clause.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == clause.size()) {
      fail(ErrorKind::ConfigInvalid, "malformed subset clause '" + std::string(clause) +
                                         "'; expected key=value with key one of " +
                                         std::string(kFilterKeys));
    }
    const std::string_view key = clause.substr(0, eq);
    const std::string_view value = clause.substr(eq + 1);
    const auto values = split(value, ',');
    if (key == "name") {
      out.name = std::string(value);
    } else if (key == "train_fraction") {
      std::vector<TrainFraction> list;
      for (auto v : values) {
        const auto tf = TrainFraction::parse(v);
        if (!tf) {
          fail(ErrorKind::ConfigInvalid, "train_fraction '" + std::string(v) +
                                             "' is not one of 0.25, 0.5, 0.75, 1.0, synthetic");
        }
        list.push_back(*tf);
      }
      out.filter.train_fractions = intersect(out.filter.train_fractions, std::optional(list));
    } else if (key == "epoch_stage") {
      std::vector<EpochStage> list;
      for (auto v : values) {
        const auto st = parse_epoch_stage(v);
        if (!st) {
          fail(ErrorKind::ConfigInvalid, "epoch_stage '" + std::string(v) +
                                             "' is not one of early-1..early-4, converged");
        }
        list.push_back(*st);
      }
      out.filter.epoch_stages = intersect(out.filter.epoch_stages, std::optional(list));
    } else if (key == "architecture" || key == "id" || key == "tier") {
      std::vector<std::string> list(values.begin(), values.end());
      SubsetFilter extra;
      if (key == "architecture") extra.architectures = list;
      if (key == "id") extra.ids = list;
      if (key == "tier") extra.tiers = list;
      out.filter = out.filter.combined(extra);
    } else {
      fail(ErrorKind::ConfigInvalid, "unknown filter key '" + std::string(key) +
                                         "'; usage: name=NAME:KEY=V1,V2 with KEY one of " +
                                         std::string(kFilterKeys));
    }
  }
  if (out.name.empty()) out.name = std::string(spec);
  return out;
}

std::vector<std::size_t> matching_classifiers(const PopulationManifest& manifest,
                                              const SubsetFilter& filter) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < manifest.classifiers.size(); ++i) {
    if (filter.matches(manifest.classifiers[i])) out.push_back(i);
  }
  return out;
}

Population subset(const Population& population, const SubsetFilter& filter) {
  const auto indices = matching_classifiers(population.manifest, filter);
  if (indices.empty()) fail(ErrorKind::EmptySubset, "filter matches no classifier");
  return population.select(indices);
}

const PairCorrelation& ComparisonReport::pair(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  const std::size_t n = subsets.size();
  if (b >= n) fail(ErrorKind::InvalidArgument, "subset index out of range");
  // row a holds the n - a pairs (a, a..n-1)
  const std::size_t offset = a * n - a * (a - 1) / 2;
  return pairs.at(offset + (b - a));
}

ComparisonReport compare_populations(const Population& population,
                                     std::span<const NamedSubset> subsets,
                                     const LabelVector& labels, const CompareOptions& options) {
  if (subsets.size() < 2) fail(ErrorKind::InvalidArgument, "comparison needs at least two subsets");
  std::set<std::string> names;
  for (const auto& s : subsets) {
    if (!names.insert(s.name).second) {
      fail(ErrorKind::ConfigInvalid, "subset name '" + s.name + "' used twice");
    }
  }
  const double m = static_cast<double>(population.store.num_classes());
  const stats::HistogramSpec xp_spec{0.0, 1.0, options.bins};
  const stats::HistogramSpec cp_spec{1.0, std::max(m, 2.0), options.bins};

  ComparisonReport report;
  AnalysisOptions analysis;
  analysis.threads = options.threads;
  analysis.keep_fractions = false;
  for (const auto& named : subsets) {
    const Population sub = [&] {
      try {
        return subset(population, named.filter);
      } catch (const Error& e) {
        throw Error(e.kind(), "subset '" + named.name + "': " + e.what());
      }
    }();
    const auto reports = analyze_examples(sub.store, labels, analysis);
    std::vector<double> cp(reports.size());
    std::vector<double> xp(reports.size());
    for (std::size_t e = 0; e < reports.size(); ++e) {
      cp[e] = reports[e].c_perplexity;
      xp[e] = reports[e].x_perplexity;
    }
    SubsetSummary s;
    s.name = named.name;
    s.num_classifiers = sub.store.num_classifiers();
    s.c_perplexity = summarize(std::move(cp), cp_spec, options);
    s.x_perplexity = summarize(std::move(xp), xp_spec, options);
    report.subsets.push_back(std::move(s));
  }
  for (std::size_t a = 0; a < report.subsets.size(); ++a) {
    for (std::size_t b = a; b < report.subsets.size(); ++b) {
      PairCorrelation p;
      p.a = a;
      p.b = b;
      p.x_perplexity =
          try_correlate(report.subsets[a].x_perplexity.values, report.subsets[b].x_perplexity.values);
      p.c_perplexity =
          try_correlate(report.subsets[a].c_perplexity.values, report.subsets[b].c_perplexity.values);
      report.pairs.push_back(std::move(p));
    }
  }
  return report;
}

std::vector<TierSpec> parse_tiers(std::string_view text) {
  std::vector<TierSpec> tiers;
  for (std::string_view item : split(text, ',')) {
    const auto fields = split(item, ':');
    if (fields.size() != 4 || fields[0].empty()) {
      fail(ErrorKind::ConfigInvalid,
           "tier '" + std::string(item) + "' must be label:count:strength_lo:strength_hi");
    }
    TierSpec t;
    t.label = std::string(fields[0]);
    if (!parse_value(fields[1], t.count) || !parse_value(fields[2], t.strength_lo) ||
        !parse_value(fields[3], t.strength_hi)) {
      fail(ErrorKind::ConfigInvalid, "tier '" + std::string(item) + "' has a malformed number");
    }
    tiers.push_back(std::move(t));
  }
  return tiers;
}

std::vector<TierSpec> default_tiers() {
  return {{"25", 10, 0.2, 0.4}, {"50", 10, 0.4, 0.6}, {"75", 10, 0.6, 0.8}, {"100", 10, 0.8, 1.0}};
}

void SynthConfig::validate() const {
  auto bad = [](const std::string& msg) { fail(ErrorKind::ConfigInvalid, msg); };
  if (num_classes < 2) bad("synthetic populations need at least 2 classes");
  if (num_examples < 1) bad("synthetic populations need at least 1 example");
  if (tiers.empty()) bad("at least one tier is required");
  if (!(base_concentration > 0.0) || !std::isfinite(base_concentration)) {
    bad("base concentration must be positive and finite");
  }
  if (!(sharpness >= 0.0) || !std::isfinite(sharpness)) bad("sharpness must be >= 0 and finite");
  if (!(confusion >= 0.0) || !std::isfinite(confusion)) bad("confusion weight must be >= 0 and finite");
  if (!(mislabel_fraction >= 0.0 && mislabel_fraction < 1.0)) bad("mislabel fraction must be in [0, 1)");
  std::set<std::string> labels;
  for (const auto& t : tiers) {
    if (t.label.empty() || t.label.find_first_of(":,/\\ ") != std::string::npos) {
      bad("tier label '" + t.label + "' must be non-empty without separators");
    }
    if (!labels.insert(t.label).second) bad("tier label '" + t.label + "' used twice");
    if (t.count < 1) bad("tier '" + t.label + "' needs at least one classifier");
    if (!(t.strength_lo > 0.0 && t.strength_lo <= t.strength_hi && t.strength_hi <= 1.0)) {
      bad("tier '" + t.label + "' needs 0 < strength_lo <= strength_hi <= 1");
    }
  }
}

SynthResult synthesize_population(const SynthConfig& config) {
  config.validate();
  const std::size_t m = config.num_classes;
  const std::size_t e_count = config.num_examples;

  std::vector<ClassIndex> truth(e_count);
  {
    Xoshiro256 rng(derive_seed(config.seed, kLabelDomain, 0));
    for (auto& y : truth) y = static_cast<ClassIndex>(rng.below(m));
  }
  std::vector<ClassIndex> decoy(e_count);
  std::vector<double> ambiguity(e_count);
  {
    Xoshiro256 rng(derive_seed(config.seed, kDecoyDomain, 0));
    for (std::size_t e = 0; e < e_count; ++e) {
      decoy[e] = static_cast<ClassIndex>((truth[e] + 1 + rng.below(m - 1)) % m);
      ambiguity[e] = rng.beta(0.5, 4.0);
    }
  }

  struct Slot {
    std::string tier;
    std::size_t within = 0;
    double lo = 0.0;
    double hi = 0.0;
  };
  std::vector<Slot> slots;
  for (const auto& t : config.tiers) {
    for (std::size_t k = 0; k < t.count; ++k) slots.push_back({t.label, k, t.strength_lo, t.strength_hi});
  }

  const std::size_t n = slots.size();
  std::vector<std::shared_ptr<const ClassifierBlock>> blocks(n);
  std::vector<double> strengths(n);
  parallel_for(n, config.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> alpha(m);
    std::vector<double> logs(m);
    for (std::size_t i = begin; i < end; ++i) {
      Xoshiro256 rng(derive_seed(config.seed, kClassifierDomain, i));
      const double s = rng.uniform(slots[i].lo, slots[i].hi);
      strengths[i] = s;
      std::vector<float> values(e_count * m);
      for (std::size_t e = 0; e < e_count; ++e) {
        std::fill(alpha.begin(), alpha.end(), config.base_concentration);
        alpha[truth[e]] += config.sharpness * s;
        alpha[decoy[e]] += config.sharpness * config.confusion * ambiguity[e];
        double top = -INFINITY;
        for (std::size_t j = 0; j < m; ++j) {
          logs[j] = rng.log_gamma(alpha[j]);
          top = std::max(top, logs[j]);
        }
        double total = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
          logs[j] = std::exp(logs[j] - top);
          total += logs[j];
        }
        float* row = values.data() + e * m;
        for (std::size_t j = 0; j < m; ++j) row[j] = static_cast<float>(logs[j] / total);
      }
      blocks[i] = std::make_shared<const ClassifierBlock>(std::move(values), e_count, m);
    }
  });

  PopulationManifest manifest;
  manifest.num_classes = m;
  manifest.num_examples = e_count;
  for (std::size_t i = 0; i < n; ++i) {
    ClassifierEntry entry;
    entry.id = classifier_id(slots[i].tier, slots[i].within);
    entry.architecture = "dirichlet";
    entry.train_fraction = tier_fraction(slots[i].tier);
    entry.epoch_stage = EpochStage::Converged;
    entry.strength = strengths[i];
    entry.tier = slots[i].tier;
    entry.payload_path = "payloads/" + entry.id + ".bin";
    manifest.classifiers.push_back(std::move(entry));
  }
  manifest.validate();

  std::vector<ClassIndex> recorded = truth;
  std::vector<LabelFlip> log;
  const auto flips = static_cast<std::size_t>(
      std::llround(config.mislabel_fraction * static_cast<double>(e_count)));
  if (flips > 0) {
    Xoshiro256 rng(derive_seed(config.seed, kCorruptionDomain, 0));
    std::vector<std::size_t> order(e_count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t k = 0; k < flips; ++k) {
      const std::size_t pick = k + static_cast<std::size_t>(rng.below(e_count - k));
      std::swap(order[k], order[pick]);
    }
    std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(flips));
    std::sort(chosen.begin(), chosen.end());
    for (std::size_t e : chosen) {
      const auto wrong = static_cast<ClassIndex>((truth[e] + 1 + rng.below(m - 1)) % m);
      recorded[e] = wrong;
      log.push_back({e, truth[e], wrong});
    }
  }

  SynthResult result{Population{std::move(manifest), PredictionStore(e_count, m, std::move(blocks))},
                     LabelVector(std::move(recorded), m), LabelVector(std::move(truth), m),
                     std::move(log)};
  return result;
}

}  // namespace xplx
