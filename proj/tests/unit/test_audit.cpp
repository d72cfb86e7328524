/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "xplx/audit.hpp"
#include "xplx/error.hpp"
#include "xplx/perplexity.hpp"
#include "xplx/population.hpp"
#include "xplx/votes.hpp"

using xplx::FindingKind;
using xplx::LabelScore;

namespace {

constexpr xplx::ClassIndex kGiantPanda = 388;
constexpr xplx::ClassIndex kLesserPanda = 387;
constexpr xplx::ClassIndex kDigitalWatch = 531;
constexpr xplx::ClassIndex kCrutch = 523;
constexpr xplx::ClassIndex kStretcher = 830;
constexpr xplx::ClassIndex kSax = 776;

xplx::ExampleReport report(std::size_t index, xplx::ClassIndex label, double cp, double xp,
                           std::vector<LabelScore> top, bool unique = true) {
  xplx::ExampleReport r;
  r.example_index = index;
  r.label = label;
  r.c_perplexity = cp;
  r.x_perplexity = xp;
  r.top_voted_labels = std::move(top);
  r.top_expected_labels = r.top_voted_labels;
  r.top_vote_unique = unique;
  return r;
}

}  // namespace

TEST_CASE("confident disagreement is a mislabel candidate") {
  const std::vector<xplx::ExampleReport> reports{
      report(0, kLesserPanda, 1.00, 1.0, {{kGiantPanda, 1.0}})};
  const xplx::LabelVector labels({kLesserPanda}, 1000);
  const auto found = xplx::flag_examples(reports, labels);
  REQUIRE(found.size() == 1);
  CHECK(found[0].kind == FindingKind::MislabelCandidate);
  CHECK(found[0].suggested_label == std::optional<xplx::ClassIndex>(kGiantPanda));
  CHECK(found[0].label == kLesserPanda);
  CHECK(xplx::to_string(found[0].kind) == "mislabel_candidate");
}

TEST_CASE("diffuse disagreement is an inappropriate label candidate") {
  const std::vector<xplx::ExampleReport> reports{report(
      0, kDigitalWatch, 14.81, 1.0, {{kCrutch, 0.4}, {kStretcher, 0.3}, {kSax, 0.3}})};
  const xplx::LabelVector labels({kDigitalWatch}, 1000);
  const auto found = xplx::flag_examples(reports, labels);
  REQUIRE(found.size() == 1);
  CHECK(found[0].kind == FindingKind::InappropriateLabelCandidate);
  CHECK_FALSE(found[0].suggested_label.has_value());
  CHECK(found[0].top_voted.size() == 3);
  CHECK(xplx::to_string(found[0].kind) == "inappropriate_label_candidate");
}

TEST_CASE("easy examples give no findings") {
  const std::vector<xplx::ExampleReport> reports{report(0, 3, 1.0, 0.0, {{3, 1.0}})};
  CHECK(xplx::flag_examples(reports, xplx::LabelVector({3}, 5)).empty());
}

TEST_CASE("tied top votes demote to inappropriate") {
  const std::vector<xplx::ExampleReport> reports{
      report(0, 0, 1.2, 1.0, {{1, 0.5}, {2, 0.5}}, false)};
  const auto found = xplx::flag_examples(reports, xplx::LabelVector({0}, 3));
  REQUIRE(found.size() == 1);
  CHECK(found[0].kind == FindingKind::InappropriateLabelCandidate);
}

TEST_CASE("example thresholds are inclusive") {
  const std::vector<xplx::ExampleReport> reports{report(0, 0, 1.5, 0.95, {{1, 0.95}})};
  const xplx::LabelVector labels({0}, 2);
  const auto found = xplx::flag_examples(reports, labels);
  REQUIRE(found.size() == 1);
  CHECK(found[0].kind == FindingKind::MislabelCandidate);
  CHECK(xplx::flag_examples(reports, labels, {0.96, 1.5}).empty());
  CHECK(xplx::flag_examples(reports, labels, {0.95, 1.49})[0].kind ==
        FindingKind::InappropriateLabelCandidate);
}

TEST_CASE("findings are ordered by X-perplexity then C-perplexity then index") {
  const std::vector<xplx::ExampleReport> reports{
      report(0, 0, 3.0, 0.97, {{1, 0.97}}),  report(1, 0, 1.0, 1.0, {{1, 1.0}}),
      report(2, 0, 2.0, 1.0, {{1, 0.5}}),    report(3, 0, 1.0, 1.0, {{2, 1.0}}),
      report(4, 0, 1.0, 0.5, {{1, 0.5}}),
  };
  const auto found = xplx::flag_examples(reports, xplx::LabelVector({0, 0, 0, 0, 0}, 3));
  REQUIRE(found.size() == 4);
  CHECK(found[0].example_index == 1);
  CHECK(found[1].example_index == 3);
  CHECK(found[2].example_index == 2);
  CHECK(found[3].example_index == 0);
}

TEST_CASE("no example is flagged as both kinds") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<xplx::ExampleReport> reports;
  std::vector<xplx::ClassIndex> labels;
  for (std::size_t e = 0; e < 500; ++e) {
    reports.push_back(report(e, 0, 1.0 + 3.0 * u(rng), u(rng) < 0.5 ? 1.0 : u(rng),
                             {{static_cast<xplx::ClassIndex>(u(rng) < 0.2 ? 0 : 1), 0.7}},
                             u(rng) < 0.8));
    labels.push_back(0);
  }
  const auto found = xplx::flag_examples(reports, xplx::LabelVector(labels, 2));
  std::vector<int> seen(reports.size(), 0);
  for (const auto& f : found) {
    ++seen[f.example_index];
    if (f.kind == FindingKind::MislabelCandidate) {
      CHECK(f.c_perplexity <= 1.5);
    }
  }
  for (std::size_t e = 0; e < reports.size(); ++e) {
    CHECK(seen[e] == (reports[e].x_perplexity >= 0.95 ? 1 : 0));
  }
}

TEST_CASE("flag_examples argument checks") {
  const std::vector<xplx::ExampleReport> reports{report(0, 0, 1.0, 0.0, {{0, 1.0}})};
  CHECK_THROWS_AS(xplx::flag_examples(reports, xplx::LabelVector({0, 1}, 2)), xplx::Error);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(xplx::flag_examples(reports, xplx::LabelVector({0}, 2), {nan, 1.5}),
                  xplx::Error);
}

TEST_CASE("class pairs") {
  // identity
  const oracle::Population perfect{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  const auto id = xplx::class_confusion(fixture::make_store(perfect),
                                        xplx::LabelVector({0, 1, 2}, 3), xplx::ConfusionMode::Voted);
  CHECK(xplx::flag_class_pairs(id).empty());

  // two classes, the population always splits its votes evenly
  const oracle::Population split{{{1, 0}, {1, 0}}, {{0, 1}, {0, 1}}};
  const auto t = xplx::class_confusion(fixture::make_store(split), xplx::LabelVector({0, 1}, 2),
                                       xplx::ConfusionMode::Voted);
  CHECK(t.sym_at(0, 1) == 0.5);
  const auto found = xplx::flag_class_pairs(t);
  REQUIRE(found.size() == 1);
  CHECK(found[0].kind == FindingKind::OverlappingClassPair);
  CHECK(found[0].class_a == 0);
  CHECK(found[0].class_b == 1);
  CHECK(found[0].confusion == 0.5);
  CHECK(xplx::flag_class_pairs(t, 0.5).size() == 1);
  CHECK(xplx::flag_class_pairs(t, std::nextafter(0.5, 1.0)).empty());
}

TEST_CASE("class pairs are sorted and skip empty classes") {
  xplx::ConfusionTable t;
  t.num_classes = 4;
  t.class_counts = {1, 1, 1, 0};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  t.freq.assign(16, 0.0);
  t.sym = {0,   0.3, 0.25, nan,  //
           0.3, 0,   0.6,  nan,  //
           0.25, 0.6, 0,   nan,  //
           nan, nan, nan,  nan};
  const auto found = xplx::flag_class_pairs(t, 0.2);
  REQUIRE(found.size() == 3);
  CHECK(found[0].class_a == 1);
  CHECK(found[0].class_b == 2);
  CHECK(found[1].confusion == 0.3);
  CHECK(found[2].confusion == 0.25);
}

TEST_CASE("recovery scoring") {
  std::vector<xplx::AuditFinding> findings(3);
  findings[0].example_index = 4;
  findings[1].example_index = 9;
  findings[2].kind = FindingKind::InappropriateLabelCandidate;
  findings[2].example_index = 7;
  const std::vector<xplx::LabelFlip> log{{4, 0, 1}, {7, 1, 2}};
  const auto s = xplx::score_recovery(findings, log);
  CHECK(s.flagged == 2);
  CHECK(s.true_positives == 1);
  CHECK(s.corrupted == 2);
  CHECK(s.precision == 0.5);
  CHECK(s.recall == 0.5);
  const auto none = xplx::score_recovery({}, {});
  CHECK(none.precision == 1.0);
  CHECK(none.recall == 1.0);
}

TEST_CASE("injected mislabels are recovered") {
  xplx::SynthConfig cfg;
  cfg.num_classes = 50;
  cfg.num_examples = 2000;
  cfg.tiers = xplx::parse_tiers("100:10:0.8:1.0");
  cfg.mislabel_fraction = 0.05;
  const auto synth = xplx::synthesize_population(cfg);
  REQUIRE(synth.corruption_log.size() == 100);
  const auto reports = xplx::analyze_examples(synth.population.store, synth.labels);
  const auto found = xplx::flag_examples(reports, synth.labels);
  const auto score = xplx::score_recovery(found, synth.corruption_log);
  CHECK(score.precision >= 0.9);
  CHECK(score.recall >= 0.9);
  for (const auto& f : found) {
    if (f.kind != FindingKind::MislabelCandidate) continue;
    const auto it = std::find_if(synth.corruption_log.begin(), synth.corruption_log.end(),
                                 [&](const xplx::LabelFlip& x) { return x.example == f.example_index; });
    if (it != synth.corruption_log.end()) {
      CHECK(f.suggested_label == std::optional<xplx::ClassIndex>(it->original));
    }
  }
}

TEST_CASE("clean strong population has no mislabel candidates") {
  xplx::SynthConfig cfg;
  cfg.num_classes = 50;
  cfg.num_examples = 2000;
  cfg.tiers = xplx::parse_tiers("100:10:0.8:1.0");
  const auto synth = xplx::synthesize_population(cfg);
  const auto reports = xplx::analyze_examples(synth.population.store, synth.labels);
  std::size_t mislabels = 0;
  for (const auto& f : xplx::flag_examples(reports, synth.labels)) {
    if (f.kind == FindingKind::MislabelCandidate) ++mislabels;
  }
  CHECK(mislabels == 0);
}
