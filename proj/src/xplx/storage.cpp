/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "xplx/storage.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "xplx/error.hpp"
#include "xplx/parallel.hpp"

namespace xplx {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorKind::IoError, "read failed for '" + path.string() + "'");
  return ss.str();
}

void ensure_parent(const fs::path& path) {
  const auto parent = path.parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) fail(ErrorKind::IoError, "cannot create directory '" + parent.string() + "'");
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  if (text.empty()) return false;
  if constexpr (std::is_floating_point_v<T>) {
    if (text.front() == '+') text.remove_prefix(1);
  }
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

void put_u64(char* dst, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) dst[b] = static_cast<char>((v >> (8 * b)) & 0xFF);
}

std::uint64_t get_u64(const char* src) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(src[b])) << (8 * b);
  }
  return v;
}

std::string sanitize_id(std::string_view id) {
  std::string out;
  for (char ch : id) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '-' || ch == '_' || ch == '.';
    out.push_back(ok ? ch : '_');
  }
  return out;
}

ClassifierEntry entry_from_json(const json& j, std::size_t index) {
  const std::string where = "classifiers[" + std::to_string(index) + "]";
  if (!j.is_object()) fail(ErrorKind::ManifestSchemaError, where + " is not an object");
  auto require_string = [&](const char* key) -> std::string {
    if (!j.contains(key) || !j[key].is_string()) {
      fail(ErrorKind::ManifestSchemaError, where + "." + key + " must be a string");
    }
    return j[key].get<std::string>();
  };

  ClassifierEntry e;
  e.id = require_string("id");
  e.architecture = require_string("architecture");
  e.payload_path = require_string("payload");

  if (!j.contains("train_fraction")) {
    fail(ErrorKind::ManifestSchemaError, where + ".train_fraction is missing");
  }
  const json& tf = j["train_fraction"];
  if (tf.is_string() && tf.get<std::string>() == "synthetic") {
    e.train_fraction = TrainFraction::synthetic();
  } else if (tf.is_number()) {
    const double v = tf.get<double>();
    if (v != 0.25 && v != 0.5 && v != 0.75 && v != 1.0) {
      fail(ErrorKind::ManifestSchemaError, where + ".train_fraction must be 0.25, 0.5, 0.75, 1.0");
    }
    e.train_fraction = TrainFraction::of(v);
  } else {
    fail(ErrorKind::ManifestSchemaError,
         where + ".train_fraction must be a number or \"synthetic\"");
  }

  const auto stage = parse_epoch_stage(require_string("epoch_stage"));
  if (!stage) {
    fail(ErrorKind::ManifestSchemaError,
         where + ".epoch_stage must be one of early-1..early-4, converged");
  }
  e.epoch_stage = *stage;

  if (j.contains("strength") && !j["strength"].is_null()) {
    if (!j["strength"].is_number()) {
      fail(ErrorKind::ManifestSchemaError, where + ".strength must be a number");
    }
    e.strength = j["strength"].get<double>();
  }
  if (j.contains("tier") && !j["tier"].is_null()) {
    if (!j["tier"].is_string()) fail(ErrorKind::ManifestSchemaError, where + ".tier must be a string");
    e.tier = j["tier"].get<std::string>();
  }
  return e;
}

std::shared_ptr<const ClassifierBlock> make_block(std::vector<float> values, std::size_t e_count,
                                                  std::size_t m, const std::string& context) {
  try {
    return std::make_shared<const ClassifierBlock>(std::move(values), e_count, m);
  } catch (const Error& err) {
    throw Error(err.kind(), context + ": " + err.what());
  }
}

}  // namespace

Payload read_payload(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open payload '" + path.string() + "'");
  std::error_code ec;
  const auto size = fs::file_size(path, ec);
  if (ec) fail(ErrorKind::IoError, "cannot stat payload '" + path.string() + "'");
  if (size < kPayloadHeaderBytes) {
    fail(ErrorKind::PayloadTruncated, "payload '" + path.string() + "' has " +
                                          std::to_string(size) + " bytes, shorter than its header");
  }
  char header[kPayloadHeaderBytes];
  in.read(header, kPayloadHeaderBytes);
  if (!in) fail(ErrorKind::IoError, "cannot read payload header of '" + path.string() + "'");
  if (std::memcmp(header, kPayloadMagic.data(), kPayloadMagic.size()) != 0) {
    fail(ErrorKind::ParseError, "payload '" + path.string() + "' has a bad magic tag");
  }
  Payload p;
  p.num_examples = get_u64(header + 8);
  p.num_classes = get_u64(header + 16);
  const std::uint64_t count = p.num_examples * p.num_classes;
  if (p.num_classes != 0 && count / p.num_classes != p.num_examples) {
    fail(ErrorKind::ParseError, "payload '" + path.string() + "' declares overflowing dimensions");
  }
  const std::uint64_t expected = kPayloadHeaderBytes + 4 * count;
  if (size != expected) {
    fail(ErrorKind::PayloadTruncated, "payload '" + path.string() + "' has " +
                                          std::to_string(size) + " bytes, expected " +
                                          std::to_string(expected));
  }
  p.values.resize(count);
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(p.values.data()), static_cast<std::streamsize>(4 * count));
    if (!in) fail(ErrorKind::PayloadTruncated, "short read on '" + path.string() + "'");
  } else {
    std::vector<unsigned char> raw(4 * count);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) fail(ErrorKind::PayloadTruncated, "short read on '" + path.string() + "'");
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::uint32_t bits = std::uint32_t{raw[4 * i]} | (std::uint32_t{raw[4 * i + 1]} << 8) |
                                 (std::uint32_t{raw[4 * i + 2]} << 16) |
                                 (std::uint32_t{raw[4 * i + 3]} << 24);
      p.values[i] = std::bit_cast<float>(bits);
    }
  }
  return p;
}

void write_payload(const fs::path& path, std::uint64_t num_examples, std::uint64_t num_classes,
                   std::span<const float> values) {
  if (values.size() != num_examples * num_classes) {
    fail(ErrorKind::DimensionMismatch, "payload value count does not match dimensions");
  }
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::IoError, "cannot write payload '" + path.string() + "'");
  char header[kPayloadHeaderBytes];
  std::memcpy(header, kPayloadMagic.data(), kPayloadMagic.size());
  put_u64(header + 8, num_examples);
  put_u64(header + 16, num_classes);
  out.write(header, kPayloadHeaderBytes);
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * 4));
  } else {
    for (float v : values) {
      const auto bits = std::bit_cast<std::uint32_t>(v);
      const char b[4] = {static_cast<char>(bits & 0xFF), static_cast<char>((bits >> 8) & 0xFF),
                         static_cast<char>((bits >> 16) & 0xFF), static_cast<char>(bits >> 24)};
      out.write(b, 4);
    }
  }
  if (!out) fail(ErrorKind::IoError, "write failed for '" + path.string() + "'");
}

PopulationManifest parse_manifest(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ManifestSchemaError, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::ManifestSchemaError, "manifest root must be an object");
  auto require_count = [&](const char* key) -> std::size_t {
    if (!doc.contains(key) || !doc[key].is_number_unsigned() || doc[key].get<std::uint64_t>() == 0) {
      fail(ErrorKind::ManifestSchemaError, std::string(key) + " must be a positive integer");
    }
    return static_cast<std::size_t>(doc[key].get<std::uint64_t>());
  };

  PopulationManifest m;
  m.num_classes = require_count("num_classes");
  m.num_examples = require_count("num_examples");
  if (!doc.contains("classifiers") || !doc["classifiers"].is_array()) {
    fail(ErrorKind::ManifestSchemaError, "classifiers must be an array");
  }
  const json& list = doc["classifiers"];
  for (std::size_t i = 0; i < list.size(); ++i) m.classifiers.push_back(entry_from_json(list[i], i));
  m.validate();
  return m;
}

std::string manifest_to_json(const PopulationManifest& manifest) {
  json doc;
  doc["num_classes"] = manifest.num_classes;
  doc["num_examples"] = manifest.num_examples;
  json list = json::array();
  for (const auto& e : manifest.classifiers) {
    json j;
    j["id"] = e.id;
    j["architecture"] = e.architecture;
    if (e.train_fraction.is_synthetic()) {
      j["train_fraction"] = "synthetic";
    } else {
      j["train_fraction"] = e.train_fraction.value();
    }
    j["epoch_stage"] = std::string(to_string(e.epoch_stage));
    j["payload"] = e.payload_path;
    if (e.strength) j["strength"] = *e.strength;
    if (!e.tier.empty()) j["tier"] = e.tier;
    list.push_back(std::move(j));
  }
  doc["classifiers"] = std::move(list);
  return doc.dump(2) + "\n";
}

Population load_population(const fs::path& manifest_path, std::size_t threads) {
  if (manifest_path.extension() == ".csv") return load_csv_population(manifest_path);

  PopulationManifest manifest = parse_manifest(read_text(manifest_path));
  const fs::path base = manifest_path.parent_path();
  const std::size_t n = manifest.classifiers.size();
  std::vector<std::shared_ptr<const ClassifierBlock>> blocks(n);

  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const ClassifierEntry& entry = manifest.classifiers[i];
      const std::string context = "classifier '" + entry.id + "'";
      Payload payload;
      try {
        payload = read_payload(base / entry.payload_path);
      } catch (const Error& err) {
        throw Error(err.kind(), context + ": " + err.what());
      }
      if (payload.num_examples != manifest.num_examples ||
          payload.num_classes != manifest.num_classes) {
        fail(ErrorKind::DimensionMismatch,
             context + ": payload header declares " + std::to_string(payload.num_examples) + "x" +
                 std::to_string(payload.num_classes) + ", manifest declares " +
                 std::to_string(manifest.num_examples) + "x" +
                 std::to_string(manifest.num_classes));
      }
      blocks[i] = make_block(std::move(payload.values), manifest.num_examples,
                             manifest.num_classes, context);
    }
  });

  PredictionStore store(manifest.num_examples, manifest.num_classes, std::move(blocks));
  return Population{std::move(manifest), std::move(store)};
}

Population load_csv_population(const fs::path& path) {
  const std::string text = read_text(path);
  const auto lines = split_lines(text);
  if (lines.empty()) fail(ErrorKind::HeaderMismatch, "'" + path.string() + "' is empty");

  const auto header = split_fields(lines[0]);
  if (header.size() < 3 || header[0] != "classifier" || header[1] != "example") {
    fail(ErrorKind::HeaderMismatch, "expected header 'classifier,example,p0,...'");
  }
  const std::size_t m = header.size() - 2;
  for (std::size_t k = 0; k < m; ++k) {
    if (header[k + 2] != "p" + std::to_string(k)) {
      fail(ErrorKind::HeaderMismatch, "header column " + std::to_string(k + 3) + " should be 'p" +
                                          std::to_string(k) + "'");
    }
  }

  std::vector<std::string> ids;
  std::unordered_map<std::string, std::size_t> index_of;
  std::vector<std::map<std::size_t, std::vector<float>>> rows;
  std::size_t max_example = 0;

  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty()) continue;
    const std::string where = path.filename().string() + ":" + std::to_string(ln + 1);
    const auto fields = split_fields(lines[ln]);
    if (fields.size() != m + 2) {
      fail(ErrorKind::ParseError, where + ": expected " + std::to_string(m + 2) + " fields, got " +
                                      std::to_string(fields.size()));
    }
    if (fields[0].empty()) fail(ErrorKind::ParseError, where + ": empty classifier id");
    std::size_t example = 0;
    if (!parse_number(fields[1], example)) {
      fail(ErrorKind::ParseError, where + ": bad example index '" + std::string(fields[1]) + "'");
    }
    std::vector<float> probs(m);
    for (std::size_t k = 0; k < m; ++k) {
      double v = 0.0;
      if (!parse_number(fields[k + 2], v)) {
        fail(ErrorKind::ParseError, where + ": bad probability '" + std::string(fields[k + 2]) + "'");
      }
      probs[k] = static_cast<float>(v);
    }
    const std::string id(fields[0]);
    auto [it, inserted] = index_of.try_emplace(id, ids.size());
    if (inserted) {
      ids.push_back(id);
      rows.emplace_back();
    }
    if (!rows[it->second].emplace(example, std::move(probs)).second) {
      fail(ErrorKind::ParseError, where + ": duplicate row for classifier '" + id + "' example " +
                                      std::to_string(example));
    }
    max_example = std::max(max_example, example);
  }
  if (ids.empty()) fail(ErrorKind::EmptyPopulation, "'" + path.string() + "' has no data rows");

  const std::size_t e_count = max_example + 1;
  PopulationManifest manifest;
  manifest.num_classes = m;
  manifest.num_examples = e_count;
  std::vector<std::shared_ptr<const ClassifierBlock>> blocks;
  std::set<std::string> used_paths;
  for (std::size_t c = 0; c < ids.size(); ++c) {
    std::vector<float> values;
    values.reserve(e_count * m);
    for (std::size_t e = 0; e < e_count; ++e) {
      auto found = rows[c].find(e);
      if (found == rows[c].end()) {
        fail(ErrorKind::IncompleteGrid, "missing row for classifier '" + ids[c] + "' example " +
                                            std::to_string(e));
      }
      values.insert(values.end(), found->second.begin(), found->second.end());
    }
    blocks.push_back(make_block(std::move(values), e_count, m, "classifier '" + ids[c] + "'"));

    ClassifierEntry entry;
    entry.id = ids[c];
    entry.architecture = "csv";
    std::string payload = "payloads/" + sanitize_id(ids[c]) + ".bin";
    if (!used_paths.insert(payload).second) {
      payload = "payloads/" + sanitize_id(ids[c]) + "-" + std::to_string(c) + ".bin";
      used_paths.insert(payload);
    }
    entry.payload_path = std::move(payload);
    manifest.classifiers.push_back(std::move(entry));
  }
  manifest.validate();
  PredictionStore store(e_count, m, std::move(blocks));
  return Population{std::move(manifest), std::move(store)};
}

void save_population(const Population& population, const fs::path& manifest_path) {
  const auto& manifest = population.manifest;
  const auto& store = population.store;
  if (manifest.classifiers.size() != store.num_classifiers()) {
    fail(ErrorKind::InvariantViolation, "manifest and store disagree on classifier count");
  }
  manifest.validate();
  const fs::path base = manifest_path.parent_path();
  for (std::size_t i = 0; i < store.num_classifiers(); ++i) {
    const auto& entry = manifest.classifiers[i];
    if (entry.payload_path.empty()) {
      fail(ErrorKind::ManifestSchemaError, "classifier '" + entry.id + "' has no payload path");
    }
    write_payload(base / entry.payload_path, store.num_examples(), store.num_classes(),
                  store.block(i).values());
  }
  ensure_parent(manifest_path);
  std::ofstream out(manifest_path, std::ios::trunc);
  if (!out) fail(ErrorKind::IoError, "cannot write manifest '" + manifest_path.string() + "'");
  out << manifest_to_json(manifest);
  if (!out) fail(ErrorKind::IoError, "write failed for '" + manifest_path.string() + "'");
}

LabelVector load_labels(const fs::path& path, std::size_t num_examples, std::size_t num_classes) {
  const std::string text = read_text(path);
  const auto lines = split_lines(text);
  std::vector<ClassIndex> labels;
  labels.reserve(num_examples);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string where = path.filename().string() + ":" + std::to_string(ln + 1);
    const std::string_view field = trim(lines[ln]);
    long long value = 0;
    if (!parse_number(field, value)) {
      fail(ErrorKind::ParseError, where + ": '" + std::string(field) + "' is not an integer label");
    }
    if (value < 0 || static_cast<unsigned long long>(value) >= num_classes) {
      fail(ErrorKind::LabelOutOfRange, where + ": label " + std::to_string(value) +
                                           " outside [0, " + std::to_string(num_classes) + ")");
    }
    labels.push_back(static_cast<ClassIndex>(value));
  }
  if (labels.size() != num_examples) {
    fail(ErrorKind::LineCountMismatch, "'" + path.string() + "' has " +
                                           std::to_string(labels.size()) + " labels, expected " +
                                           std::to_string(num_examples));
  }
  return LabelVector(std::move(labels), num_classes);
}

void write_labels(const fs::path& path, const LabelVector& labels) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::IoError, "cannot write labels '" + path.string() + "'");
  for (ClassIndex label : labels.values()) out << label << '\n';
  if (!out) fail(ErrorKind::IoError, "write failed for '" + path.string() + "'");
}

std::vector<std::string> load_class_names(const fs::path& path, std::size_t num_classes) {
  const std::string text = read_text(path);
  std::vector<std::string> names;
  for (std::string_view line : split_lines(text)) names.emplace_back(trim(line));
  if (names.size() != num_classes) {
    fail(ErrorKind::LineCountMismatch, "'" + path.string() + "' has " +
                                           std::to_string(names.size()) + " names, expected " +
                                           std::to_string(num_classes));
  }
  return names;
}

}  // namespace xplx
