/**
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "xplx/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "xplx/error.hpp"

namespace xplx::stats {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    fail(ErrorKind::InvalidArgument, "correlation inputs differ in length (" +
                                         std::to_string(x.size()) + " vs " +
                                         std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) fail(ErrorKind::DegenerateSample, "correlation needs at least two points");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      fail(ErrorKind::NonFinite, "correlation input " + std::to_string(i) + " is not finite");
    }
  }
}

std::int64_t tied_pairs(std::span<const double> sorted) {
  std::int64_t total = 0;
  std::int64_t run = 1;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

// Sorts values[lo, hi) ascending, returns the number of strict inversions.
std::int64_t count_inversions(std::vector<double>& values, std::vector<double>& buffer,
                              std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = count_inversions(values, buffer, lo, mid) +
                       count_inversions(values, buffer, mid, hi);
  std::size_t i = lo;
  std::size_t j = mid;
  std::size_t out = lo;
  while (i < mid && j < hi) {
    if (values[j] < values[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buffer[out++] = values[j++];
    } else {
      buffer[out++] = values[i++];
    }
  }
  while (i < mid) buffer[out++] = values[i++];
  while (j < hi) buffer[out++] = values[j++];
  std::copy(buffer.begin() + static_cast<std::ptrdiff_t>(lo),
            buffer.begin() + static_cast<std::ptrdiff_t>(hi),
            values.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

void HistogramSpec::validate() const {
  if (bin_count == 0) fail(ErrorKind::InvalidArgument, "histogram needs at least one bin");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
    fail(ErrorKind::InvalidArgument, "histogram range requires finite lo < hi");
  }
}

double HistogramSpec::edge(std::size_t i) const noexcept {
  if (i >= bin_count) return hi;
  return lo + static_cast<double>(i) * width();
}

std::size_t Histogram::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), underflow + overflow);
}

std::optional<std::size_t> bin_of(double v, const HistogramSpec& spec) {
  if (std::isnan(v) || v < spec.lo || v > spec.hi) return std::nullopt;
  auto idx = static_cast<std::size_t>(std::floor((v - spec.lo) / spec.width()));
  idx = std::min(idx, spec.bin_count - 1);
  // Keep assignment consistent with the edges reported by edge().
  if (idx > 0 && v < spec.edge(idx)) --idx;
  if (idx + 1 < spec.bin_count && v >= spec.edge(idx + 1)) ++idx;
  return idx;
}

Histogram histogram(std::span<const double> values, const HistogramSpec& spec) {
  spec.validate();
  Histogram h;
  h.spec = spec;
  h.counts.assign(spec.bin_count, 0);
  for (double v : values) {
    if (const auto idx = bin_of(v, spec)) {
      ++h.counts[*idx];
    } else if (v < spec.lo) {
      ++h.underflow;
    } else {
      ++h.overflow;
    }
  }
  return h;
}

double quantile_type7(std::span<const double> sorted, double p) {
  if (sorted.empty()) fail(ErrorKind::EmptyInput, "quantile of an empty sample");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

BoxStats box_stats(std::span<const double> values) {
  if (values.empty()) fail(ErrorKind::EmptyInput, "box statistics of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return {sorted.front(), quantile_type7(sorted, 0.25), quantile_type7(sorted, 0.5),
          quantile_type7(sorted, 0.75), sorted.back()};
}

double mean(std::span<const double> values) {
  if (values.empty()) fail(ErrorKind::EmptyInput, "mean of an empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
  const double mu = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

KdeCurve gaussian_kde(std::span<const double> values, std::size_t grid_points) {
  const std::size_t n = values.size();
  if (n < 2) fail(ErrorKind::DegenerateSample, "kernel density needs at least two points");
  if (grid_points < 2) fail(ErrorKind::InvalidArgument, "kernel density grid needs two points");
  const double mu = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) fail(ErrorKind::DegenerateSample, "kernel density of a constant sample");

  KdeCurve curve;
  curve.bandwidth = 1.06 * sd * std::pow(static_cast<double>(n), -0.2);
  const double h = curve.bandwidth;
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *min_it - 3.0 * h;
  const double hi = *max_it + 3.0 * h;
  const double norm = 1.0 / (static_cast<double>(n) * h * std::sqrt(2.0 * std::numbers::pi));

  curve.grid.resize(grid_points);
  curve.density.resize(grid_points);
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double g =
        lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid_points - 1);
    double acc = 0.0;
    for (double v : values) {
      const double u = (g - v) / h;
      acc += std::exp(-0.5 * u * u);
    }
    curve.grid[k] = g;
    curve.density[k] = acc * norm;
  }
  return curve;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = shared;
    i = j;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    fail(ErrorKind::DegenerateSample, "correlation of a constant sample");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

KendallTau kendall(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x[order[i]];
    ys[i] = y[order[i]];
  }

  const auto total = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const std::int64_t ties_x = tied_pairs(xs);

  // Pairs tied in both coordinates are adjacent after the lexicographic sort.
  std::int64_t ties_xy = 0;
  std::int64_t run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && xs[i] == xs[i - 1] && ys[i] == ys[i - 1]) {
      ++run;
    } else {
      ties_xy += run * (run - 1) / 2;
      run = 1;
    }
  }

  std::vector<double> buffer(n);
  const std::int64_t discordant = count_inversions(ys, buffer, 0, n);
  const std::int64_t ties_y = tied_pairs(ys);  // ys is sorted now

  if (ties_x == total || ties_y == total) {
    fail(ErrorKind::DegenerateSample, "kendall tau of a constant sample");
  }

  KendallTau tau;
  tau.concordant_minus_discordant = total - ties_x - ties_y + ties_xy - 2 * discordant;
  const auto s = static_cast<double>(tau.concordant_minus_discordant);
  tau.tau_a = s / static_cast<double>(total);
  tau.tau_b = s / std::sqrt(static_cast<double>(total - ties_x) * static_cast<double>(total - ties_y));
  return tau;
}

CorrelationReport correlate(std::span<const double> x, std::span<const double> y) {
  CorrelationReport r;
  r.pearson = pearson(x, y);
  r.spearman = spearman(x, y);
  const KendallTau k = kendall(x, y);
  r.kendall_tau_a = k.tau_a;
  r.kendall_tau_b = k.tau_b;
  r.n = x.size();
  return r;
}

}  // namespace xplx::stats
