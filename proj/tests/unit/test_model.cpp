/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "xplx/error.hpp"
#include "xplx/model.hpp"

using xplx::ErrorKind;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const xplx::Error& e) {
    return e.kind();
  }
  FAIL("expected an xplx::Error");
  return ErrorKind::InvariantViolation;
}

}  // namespace

TEST_CASE("validate_row keeps a normalized row") {
  const std::vector<double> p{0.5, 0.5};
  const auto out = xplx::validate_row(p);
  CHECK(out == p);
}

TEST_CASE("validate_row renormalizes within tolerance") {
  const std::vector<double> p{0.5005, 0.5};
  const auto out = xplx::validate_row(p);
  CHECK(out[0] == doctest::Approx(0.5005 / 1.0005).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(0.5 / 1.0005).epsilon(1e-15));
  CHECK(out[0] == doctest::Approx(0.50025).epsilon(1e-4));
}

TEST_CASE("validate_row rejects bad rows") {
  CHECK(kind_of([] { xplx::validate_row(std::vector<double>{0.5, -0.1, 0.6}); }) ==
        ErrorKind::NegativeProbability);
  CHECK(kind_of([] {
          xplx::validate_row(std::vector<double>{std::numeric_limits<double>::infinity(), 0.0});
        }) == ErrorKind::NonFinite);
  CHECK(kind_of([] { xplx::validate_row(std::vector<double>{std::nan(""), 1.0}); }) ==
        ErrorKind::NonFinite);
  CHECK(kind_of([] { xplx::validate_row(std::vector<double>{0.6, 0.6}); }) ==
        ErrorKind::SumOutOfTolerance);
}

TEST_CASE("validate_row error names the row and sum") {
  try {
    xplx::validate_row(std::vector<double>{0.7, 0.7}, 17);
    FAIL("no throw");
  } catch (const xplx::Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("17") != std::string::npos);
    CHECK(msg.find("1.4") != std::string::npos);
  }
}

TEST_CASE("validate_row output sums to one for accepted rows") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t m = 2 + trial % 9;
    std::vector<double> p(m);
    double total = 0.0;
    for (auto& v : p) total += (v = u(rng));
    const double drift = (u(rng) - 0.5) * 1.9e-3;
    for (auto& v : p) v = v / total * (1.0 + drift);
    const auto out = xplx::validate_row(p);
    double s = 0.0;
    for (double v : out) s += v;
    CHECK(std::abs(s - 1.0) <= 1e-12);
  }
}

TEST_CASE("train fraction accepts the four sizes and synthetic") {
  CHECK(xplx::TrainFraction::parse("0.25")->value() == 0.25);
  CHECK(xplx::TrainFraction::parse("1.0")->to_string() == "1.0");
  CHECK(xplx::TrainFraction::parse("synthetic")->is_synthetic());
  CHECK_FALSE(xplx::TrainFraction::parse("0.3").has_value());
  CHECK(kind_of([] { xplx::TrainFraction::of(0.3); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("epoch stages round-trip") {
  for (auto stage : {xplx::EpochStage::Early1, xplx::EpochStage::Early2, xplx::EpochStage::Early3,
                     xplx::EpochStage::Early4, xplx::EpochStage::Converged}) {
    CHECK(xplx::parse_epoch_stage(xplx::to_string(stage)) == stage);
  }
  CHECK_FALSE(xplx::parse_epoch_stage("early-5").has_value());
}

TEST_CASE("manifest validation") {
  xplx::PopulationManifest m;
  m.num_classes = 2;
  m.num_examples = 3;
  CHECK(kind_of([&] { m.validate(); }) == ErrorKind::ManifestSchemaError);  // empty list
  xplx::ClassifierEntry a;
  a.id = "a";
  a.payload_path = "a.bin";
  m.classifiers = {a, a};
  CHECK(kind_of([&] { m.validate(); }) == ErrorKind::ManifestSchemaError);  // duplicate id
  m.classifiers[1].id = "b";
  m.validate();
  m.classifiers[1].strength = 0.0;
  CHECK(kind_of([&] { m.validate(); }) == ErrorKind::ManifestSchemaError);
  m.classifiers[1].strength = 1.0;
  m.validate();
  m.num_examples = 0;
  CHECK(kind_of([&] { m.validate(); }) == ErrorKind::ManifestSchemaError);
}

TEST_CASE("classifier block validates every row with its index") {
  std::vector<float> values{0.5f, 0.5f, 0.9f, 0.9f};
  try {
    xplx::ClassifierBlock block(values, 2, 2);
    FAIL("no throw");
  } catch (const xplx::Error& e) {
    CHECK(e.kind() == ErrorKind::SumOutOfTolerance);
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
  CHECK(kind_of([] { xplx::ClassifierBlock b(std::vector<float>{1.0f, 0.0f, 1.0f}, 2, 2); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("stored rows are renormalized on read") {
  xplx::ClassifierBlock block(std::vector<float>{0.5005f, 0.5f}, 1, 2);
  const auto row = block.row(0);
  CHECK(row[0] + row[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(row[0] == static_cast<double>(0.5005f) / (static_cast<double>(0.5005f) + 0.5));
}

TEST_CASE("prediction store checks block dimensions") {
  auto good = std::make_shared<const xplx::ClassifierBlock>(std::vector<float>{1, 0, 0, 1}, 2, 2);
  auto other = std::make_shared<const xplx::ClassifierBlock>(std::vector<float>{1, 0}, 1, 2);
  CHECK(kind_of([&] { xplx::PredictionStore s(2, 2, {}); }) == ErrorKind::EmptyPopulation);
  CHECK(kind_of([&] { xplx::PredictionStore s(2, 2, {good, other}); }) ==
        ErrorKind::DimensionMismatch);
  xplx::PredictionStore s(2, 2, {good, good});
  CHECK(s.num_classifiers() == 2);
  const std::vector<std::size_t> pick{1};
  const auto sub = s.select(pick);
  CHECK(sub.num_classifiers() == 1);
  CHECK(&sub.block(0) == &s.block(1));  // shared, not copied
}

TEST_CASE("label vector range check") {
  CHECK(kind_of([] { xplx::LabelVector v({0, 3}, 3); }) == ErrorKind::LabelOutOfRange);
  xplx::LabelVector v({0, 2, 1}, 3);
  CHECK(v.size() == 3);
  CHECK(v[1] == 2);
}
