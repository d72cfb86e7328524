/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

// Shared helpers: scratch directories, store builders and random instances.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "xplx/model.hpp"

namespace fixture {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("xplx-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_file(const fs::path& path, const std::string& body) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << body;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// pop[i][e] -> store; rows are quantized to float like payload files.
inline xplx::PredictionStore make_store(const oracle::Population& pop) {
  const std::size_t e_count = pop.front().size();
  const std::size_t m = pop.front().front().size();
  std::vector<std::shared_ptr<const xplx::ClassifierBlock>> blocks;
  for (const auto& classifier : pop) {
    std::vector<float> values;
    for (const auto& row : classifier) {
      for (double v : row) values.push_back(static_cast<float>(v));
    }
    blocks.push_back(std::make_shared<const xplx::ClassifierBlock>(std::move(values), e_count, m));
  }
  return xplx::PredictionStore(e_count, m, std::move(blocks));
}

inline xplx::Population make_population(const oracle::Population& pop) {
  xplx::PopulationManifest manifest;
  manifest.num_classes = pop.front().front().size();
  manifest.num_examples = pop.front().size();
  for (std::size_t i = 0; i < pop.size(); ++i) {
    xplx::ClassifierEntry entry;
    entry.id = "c" + std::to_string(i);
    entry.architecture = "fixture";
    entry.payload_path = "payloads/c" + std::to_string(i) + ".bin";
    manifest.classifiers.push_back(entry);
  }
  return xplx::Population{manifest, make_store(pop)};
}

/// One example, several classifiers: rows[i] is classifier i's row.
inline oracle::Population single_example(const oracle::Rows& rows) {
  oracle::Population pop;
  for (const auto& r : rows) pop.push_back({r});
  return pop;
}

using RawPopulation = std::vector<std::vector<std::vector<float>>>;

/// Store straight from float rows, no further quantization.
inline xplx::PredictionStore make_store_raw(const RawPopulation& raw) {
  const std::size_t e_count = raw.front().size();
  const std::size_t m = raw.front().front().size();
  std::vector<std::shared_ptr<const xplx::ClassifierBlock>> blocks;
  for (const auto& classifier : raw) {
    std::vector<float> values;
    for (const auto& row : classifier) values.insert(values.end(), row.begin(), row.end());
    blocks.push_back(std::make_shared<const xplx::ClassifierBlock>(std::move(values), e_count, m));
  }
  return xplx::PredictionStore(e_count, m, std::move(blocks));
}

/// The distribution a stored float row stands for: value / double row sum.
inline oracle::Row stored_view(const std::vector<float>& raw) {
  double sum = 0.0;
  for (float v : raw) sum += static_cast<double>(v);
  oracle::Row row(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) row[j] = static_cast<double>(raw[j]) / sum;
  return row;
}

struct Instance {
  RawPopulation raw;       // what goes into the store
  oracle::Population pop;  // the distributions the store represents
  std::vector<std::uint32_t> labels;
  std::size_t n = 0;
  std::size_t e = 0;
  std::size_t m = 0;
};

/// Random rows of four flavours: one-hot rows, dyadic rows k/64 (exact in
/// float, full of ties and zeros), and sparse or dense continuous rows.
inline std::vector<float> random_row(std::mt19937_64& rng, std::size_t m) {
  std::vector<float> row(m, 0.0f);
  const int flavour = std::uniform_int_distribution<int>(0, 3)(rng);
  if (flavour == 0) {
    row[std::uniform_int_distribution<std::size_t>(0, m - 1)(rng)] = 1.0f;
    return row;
  }
  if (flavour == 1) {
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    for (int k = 0; k < 64; ++k) row[pick(rng)] += 1.0f / 64.0f;
    return row;
  }
  std::gamma_distribution<double> g(flavour == 2 ? 0.3 : 2.0);
  std::vector<double> d(m);
  double total = 0.0;
  for (auto& v : d) {
    v = g(rng);
    total += v;
  }
  if (!(total > 0.0)) {
    row[0] = 1.0f;
    return row;
  }
  for (std::size_t j = 0; j < m; ++j) row[j] = static_cast<float>(d[j] / total);
  return row;
}

inline Instance random_instance(std::mt19937_64& rng, std::size_t max_n, std::size_t max_e,
                                std::size_t max_m) {
  Instance in;
  in.n = std::uniform_int_distribution<std::size_t>(1, max_n)(rng);
  in.e = std::uniform_int_distribution<std::size_t>(1, max_e)(rng);
  in.m = std::uniform_int_distribution<std::size_t>(2, max_m)(rng);
  in.raw.resize(in.n);
  in.pop.resize(in.n);
  for (std::size_t i = 0; i < in.n; ++i) {
    for (std::size_t e = 0; e < in.e; ++e) {
      in.raw[i].push_back(random_row(rng, in.m));
      in.pop[i].push_back(stored_view(in.raw[i].back()));
    }
  }
  std::uniform_int_distribution<std::uint32_t> lab(0, static_cast<std::uint32_t>(in.m - 1));
  for (std::size_t e = 0; e < in.e; ++e) in.labels.push_back(lab(rng));
  return in;
}

}  // namespace fixture
