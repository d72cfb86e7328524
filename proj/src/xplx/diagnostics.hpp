/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <functional>
#include <string_view>

namespace xplx {

/// Receives warnings (empty classes, skipped KDE, ...). Data never goes here.
using DiagnosticSink = std::function<void(std::string_view message)>;

/// Replaces the process-wide sink; an empty function restores the default
/// (one line per message on stderr).
void set_diagnostic_sink(DiagnosticSink sink);
void warn(std::string_view message);

}  // namespace xplx
