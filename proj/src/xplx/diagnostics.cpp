/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "xplx/diagnostics.hpp"

#include <cstdio>
#include <mutex>
#include <utility>

namespace xplx {

namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

DiagnosticSink& sink() {
  static DiagnosticSink s;
  return s;
}

}  // namespace

void set_diagnostic_sink(DiagnosticSink s) {
  std::lock_guard lock(sink_mutex());
  sink() = std::move(s);
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex());
  if (sink()) {
    sink()(message);
    return;
  }
  std::fprintf(stderr, "xplx: warning: %.*s\n", static_cast<int>(message.size()), message.data());
}

}  // namespace xplx
