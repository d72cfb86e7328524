/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace xplx::stats {

/// Bins are [lo + i*w, lo + (i+1)*w) with w = (hi - lo) / bin_count; the
/// last bin also takes values equal to hi.
struct HistogramSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t bin_count = 10;

  void validate() const;
  double width() const noexcept { return (hi - lo) / static_cast<double>(bin_count); }
  double edge(std::size_t i) const noexcept;
};

struct Histogram {
  HistogramSpec spec;
  std::vector<std::size_t> counts;
  std::size_t underflow = 0;
  std::size_t overflow = 0;  // also receives NaN, so the totals always add up to n

  std::size_t total() const noexcept;
};

/// Bin holding `value`, or nothing for underflow, overflow and NaN.
std::optional<std::size_t> bin_of(double value, const HistogramSpec& spec);

Histogram histogram(std::span<const double> values, const HistogramSpec& spec);

/// Five-number summary with type-7 (linear interpolation) quartiles.
struct BoxStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;

  double iqr() const noexcept { return q3 - q1; }
};

/// `sorted` must be ascending and non-empty; p in [0, 1].
double quantile_type7(std::span<const double> sorted, double p);
BoxStats box_stats(std::span<const double> values);

double mean(std::span<const double> values);
/// Population standard deviation (divides by n).
double stddev(std::span<const double> values);

struct KdeCurve {
  double bandwidth = 0.0;
  std::vector<double> grid;
  std::vector<double> density;
};

inline constexpr std::size_t kDefaultKdePoints = 256;

/// Gaussian kernel with Silverman's bandwidth 1.06 * sd * n^(-1/5) on a
/// uniform grid over [min - 3h, max + 3h].
KdeCurve gaussian_kde(std::span<const double> values, std::size_t grid_points = kDefaultKdePoints);

/// Ranks starting at 1; tied values share their mean rank.
std::vector<double> average_ranks(std::span<const double> values);

double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

struct KendallTau {
  double tau_a = 0.0;
  double tau_b = 0.0;
  std::int64_t concordant_minus_discordant = 0;
};

/// O(n log n): sort by (x, y), then count discordant pairs as merge-sort
/// inversions of y.
KendallTau kendall(std::span<const double> x, std::span<const double> y);

struct CorrelationReport {
  double pearson = 0.0;
  double spearman = 0.0;
  double kendall_tau_a = 0.0;
  double kendall_tau_b = 0.0;
  std::size_t n = 0;
};

CorrelationReport correlate(std::span<const double> x, std::span<const double> y);

}  // namespace xplx::stats
