/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "xplx/error.hpp"
#include "xplx/perplexity.hpp"

using Rows = std::vector<std::vector<double>>;

TEST_CASE("shannon entropy") {
  CHECK(xplx::shannon_entropy(std::vector<double>{0.5, 0.5}) == 1.0);
  CHECK(xplx::shannon_entropy(std::vector<double>{1, 0, 0}) == 0.0);
  const double want = -0.25 * std::log2(0.25) - 0.75 * std::log2(0.75);
  CHECK(xplx::shannon_entropy(std::vector<double>{0.25, 0.75}) == doctest::Approx(want).epsilon(1e-15));
  CHECK(xplx::shannon_entropy(std::vector<double>{0.25, 0.75}) == doctest::Approx(0.811278).epsilon(1e-6));
}

TEST_CASE("distribution perplexity") {
  CHECK(xplx::distribution_perplexity(std::vector<double>{0.25, 0.25, 0.25, 0.25}) == 4.0);
  CHECK(xplx::distribution_perplexity(std::vector<double>{0, 1, 0}) == 1.0);
  CHECK(xplx::distribution_perplexity(std::vector<double>{0.25, 0.75}) ==
        doctest::Approx(1.754765).epsilon(1e-6));
}

TEST_CASE("c-perplexity") {
  CHECK(xplx::c_perplexity(Rows{{1, 0}, {0.5, 0.5}}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(xplx::c_perplexity(Rows{{1, 0}, {0.5, 0.5}}) == doctest::Approx(1.414214).epsilon(1e-6));
  const std::vector<double> u4(4, 0.25);
  CHECK(xplx::c_perplexity(Rows{u4, u4, u4}) == 4.0);
  CHECK(xplx::c_perplexity(Rows{{0, 0, 1}}) == 1.0);
  try {
    xplx::c_perplexity(Rows{});
    FAIL("no throw");
  } catch (const xplx::Error& e) {
    CHECK(e.kind() == xplx::ErrorKind::EmptyPopulation);
  }
}

TEST_CASE("c-perplexity stays finite where the product overflows") {
  // 500 classifiers, uniform over 1000 classes: the product form is 1000^500.
  const std::vector<double> u(1000, 1.0 / 1000.0);
  const Rows rows(500, u);
  CHECK(std::isinf(std::pow(1000.0, 500.0)));
  CHECK(xplx::c_perplexity(rows) == doctest::Approx(1000.0).epsilon(1e-9));
}

TEST_CASE("assign_class") {
  CHECK(xplx::assign_class(std::vector<double>{0.1, 0.7, 0.2}) == 1);
  CHECK(xplx::assign_class(std::vector<double>{0.5, 0.5}) == 0);
  CHECK(xplx::assign_class(std::vector<double>{0, 0, 1}) == 2);
}

TEST_CASE("x-perplexity") {
  const Rows r{{1, 0, 0}, {0.9, 0.1, 0}, {0.2, 0.8, 0}, {0, 0.1, 0.9}};
  CHECK(xplx::x_perplexity(r, 0) == 0.5);
  CHECK(xplx::x_perplexity(Rows{{1, 0}, {0.6, 0.4}}, 0) == 0.0);
  CHECK(xplx::x_perplexity(Rows{{1, 0}, {0.6, 0.4}}, 1) == 1.0);
  CHECK_THROWS_AS(xplx::x_perplexity(Rows{}, 0), xplx::Error);
  CHECK_THROWS_AS(xplx::x_perplexity(Rows{{1, 0}}, 2), xplx::Error);
}

TEST_CASE("analyze_examples worked examples") {
  {
    const auto store = fixture::make_store(fixture::single_example({{1, 0}}));
    const auto r = xplx::analyze_examples(store, xplx::LabelVector({0}, 2));
    CHECK(r[0].c_perplexity == 1.0);
    CHECK(r[0].x_perplexity == 0.0);
  }
  const auto store = fixture::make_store(fixture::single_example({{1, 0}, {0.5, 0.5}}));
  auto r = xplx::analyze_examples(store, xplx::LabelVector({0}, 2));
  CHECK(r[0].c_perplexity == doctest::Approx(1.414214).epsilon(1e-6));
  CHECK(r[0].x_perplexity == 0.0);
  CHECK(r[0].top_voted_labels.size() == 1);
  CHECK(r[0].top_voted_labels[0].label == 0);
  CHECK(r[0].top_voted_labels[0].value == 1.0);
  r = xplx::analyze_examples(store, xplx::LabelVector({1}, 2));
  CHECK(r[0].x_perplexity == 1.0);
  CHECK(r[0].label == 1);
}

TEST_CASE("analyze_examples fills fractions and top lists") {
  // argmaxes [2,2,1,2,0]
  const Rows rows{{0, 0, 1}, {0.1, 0.2, 0.7}, {0.2, 0.6, 0.2}, {0.3, 0.3, 0.4}, {0.8, 0.1, 0.1}};
  const auto store = fixture::make_store(fixture::single_example(rows));
  xplx::AnalysisOptions opts;
  opts.top_k = 2;
  const auto r = xplx::analyze_examples(store, xplx::LabelVector({2}, 3), opts)[0];
  REQUIRE(r.vote_fractions.size() == 3);
  CHECK(r.vote_fractions[0].value == doctest::Approx(0.2));
  CHECK(r.vote_fractions[2].value == doctest::Approx(0.6));
  REQUIRE(r.top_voted_labels.size() == 2);
  CHECK(r.top_voted_labels[0].label == 2);
  CHECK(r.top_voted_labels[1].label == 0);
  CHECK(r.top_vote_unique);
  CHECK(r.x_perplexity == doctest::Approx(0.4));
  double s = 0.0;
  for (const auto& f : r.expected_fractions) s += f.value;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("analyze_examples matches the oracle on random instances") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const auto in = fixture::random_instance(rng, 10, 50, 8);
    const auto store = fixture::make_store_raw(in.raw);
    const auto reports = xplx::analyze_examples(store, xplx::LabelVector(in.labels, in.m));
    for (std::size_t e = 0; e < in.e; ++e) {
      const auto rows = oracle::example_rows(in.pop, e);
      CHECK(oracle::relative_error(reports[e].c_perplexity, oracle::c_perplexity(rows)) <= 1e-9);
      CHECK(oracle::relative_error(reports[e].x_perplexity, oracle::x_perplexity(rows, in.labels[e])) <= 1e-9);
    }
  }
}

TEST_CASE("thread count does not change results") {
  std::mt19937_64 rng(99);
  const auto in = fixture::random_instance(rng, 10, 50, 8);
  const auto store = fixture::make_store_raw(in.raw);
  const xplx::LabelVector labels(in.labels, in.m);
  xplx::AnalysisOptions one;
  one.threads = 1;
  xplx::AnalysisOptions many;
  many.threads = 7;
  const auto a = xplx::analyze_examples(store, labels, one);
  const auto b = xplx::analyze_examples(store, labels, many);
  for (std::size_t e = 0; e < a.size(); ++e) {
    CHECK(a[e].c_perplexity == b[e].c_perplexity);
    CHECK(a[e].x_perplexity == b[e].x_perplexity);
    CHECK(a[e].expected_fractions == b[e].expected_fractions);
    CHECK(a[e].top_expected_labels == b[e].top_expected_labels);
  }
}

TEST_CASE("analyze_examples rejects mismatched labels") {
  const auto store = fixture::make_store(fixture::single_example({{1, 0}}));
  CHECK_THROWS_AS(xplx::analyze_examples(store, xplx::LabelVector({0, 1}, 2)), xplx::Error);
  CHECK_THROWS_AS(xplx::analyze_examples(store, xplx::LabelVector({0}, 3)), xplx::Error);
  xplx::AnalysisOptions opts;
  opts.top_k = 0;
  CHECK_THROWS_AS(xplx::analyze_examples(store, xplx::LabelVector({0}, 2), opts), xplx::Error);
}
