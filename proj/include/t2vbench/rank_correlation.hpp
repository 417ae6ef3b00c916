#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "t2vbench/error.hpp"

namespace t2vbench {

namespace detail {

inline void check_pair_input(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw precondition_error("correlation inputs differ in length");
  if (xs.size() < 2) throw precondition_error("correlation needs at least two observations");
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw precondition_error("non-finite correlation input");
}

// Sum of t(t-1)/2 over runs of equal values in an already-sorted sequence.
template <typename Eq>
std::int64_t tied_pairs(std::size_t n, Eq&& same_as_prev) {
  std::int64_t total = 0, run = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (same_as_prev(i)) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total + run * (run - 1) / 2;
}

// Bottom-up merge sort of `v`, returning the number of inversions.
inline std::int64_t count_inversions(std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> buf(n);
  std::int64_t swaps = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          swaps += static_cast<std::int64_t>(mid - i);
          buf[k++] = v[j++];
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
    }
    std::swap(v, buf);
  }
  return swaps;
}

}  // namespace detail

/// Kendall's tau-b in O(n log n) (Knight's algorithm):
///   (n0 - n1 - n2 + n3 - 2*swaps) / sqrt((n0 - n1)(n0 - n2))
/// with n1/n2 pairs tied in x/y and n3 pairs tied in both.
inline double kendall_tau_b(std::span<const double> xs, std::span<const double> ys) {
  detail::check_pair_input(xs, ys);
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return xs[a] != xs[b] ? xs[a] < xs[b] : ys[a] < ys[b];
  });

  const auto n0 = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const auto n1 = detail::tied_pairs(n, [&](std::size_t i) { return xs[order[i]] == xs[order[i - 1]]; });
  const auto n3 = detail::tied_pairs(n, [&](std::size_t i) {
    return xs[order[i]] == xs[order[i - 1]] && ys[order[i]] == ys[order[i - 1]];
  });

  std::vector<double> y_sorted(n);
  for (std::size_t i = 0; i < n; ++i) y_sorted[i] = ys[order[i]];
  const auto swaps = detail::count_inversions(y_sorted);
  const auto n2 = detail::tied_pairs(n, [&](std::size_t i) { return y_sorted[i] == y_sorted[i - 1]; });

  if (n0 == n1 || n0 == n2) throw degenerate_input_error("all values tied in one input");
  const auto numer = static_cast<double>(n0 - n1 - n2 + n3 - 2 * swaps);
  const double denom = std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2));
  return std::clamp(numer / denom, -1.0, 1.0);
}

/// 1-based ranks; tied values share the mean of the ranks they span.
inline std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && v[order[j]] == v[order[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

/// Spearman's rho: Pearson correlation of tie-averaged ranks.
inline double spearman_rho(std::span<const double> xs, std::span<const double> ys) {
  detail::check_pair_input(xs, ys);
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const auto n = static_cast<double>(xs.size());
  // Both rank vectors have mean (n+1)/2 regardless of ties.
  const double mean = (n + 1) / 2.0;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double a = rx[i] - mean, b = ry[i] - mean;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  if (sxx == 0 || syy == 0) throw degenerate_input_error("all values tied in one input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace t2vbench
