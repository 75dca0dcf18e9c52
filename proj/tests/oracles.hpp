#pragma once

// Independent reference computations used only by tests.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace msel::oracle {

// sup_{x in [0, x_max]} (x y - f(x)) for concave objective: grid scan followed
// by golden-section refinement around the best grid cell.
inline double conjugate_by_search(const std::function<double(double)>& f, double y, double x_max = 10.0,
                                  std::size_t grid_points = 1001) {
  auto obj = [&](double x) { return x * y - f(x); };
  const double h = x_max / static_cast<double>(grid_points - 1);
  std::size_t best = 0;
  double best_val = obj(0.0);
  for (std::size_t k = 1; k < grid_points; ++k) {
    const double v = obj(h * static_cast<double>(k));
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  double a = best == 0 ? 0.0 : h * static_cast<double>(best - 1);
  double b = std::min(x_max, h * static_cast<double>(best + 1));
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  for (int it = 0; it < 200; ++it) {
    if (obj(c) > obj(d))
      b = d;
    else
      a = c;
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  return std::max(best_val, obj(0.5 * (a + b)));
}

// Root of f on [lo, hi] with a sign change, by bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iterations = 200) {
  double flo = f(lo);
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Minimal RSS over every segmentation of y into exactly `segments` pieces.
inline double brute_force_rss(std::span<const double> y, std::size_t segments) {
  const std::size_t n = y.size();
  double best = std::numeric_limits<double>::infinity();
  // Each mask bit i (0..n-2) marks a change after position i.
  for (std::size_t mask = 0; mask < (std::size_t{1} << (n - 1)); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) + 1 != segments) continue;
    double rss = 0.0;
    std::size_t begin = 0;
    for (std::size_t end = 1; end <= n; ++end) {
      const bool cut = end == n || ((mask >> (end - 1)) & 1U);
      if (!cut) continue;
      double mean = 0.0;
      for (std::size_t i = begin; i < end; ++i) mean += y[i];
      mean /= static_cast<double>(end - begin);
      for (std::size_t i = begin; i < end; ++i) rss += (y[i] - mean) * (y[i] - mean);
      begin = end;
    }
    best = std::min(best, rss);
  }
  return best;
}

}  // namespace msel::oracle
