#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace msel {

struct Segmentation {
  std::vector<std::size_t> segment_ends;  // exclusive ends; back() == signal length
  std::vector<double> levels;
  double rss = 0.0;

  std::size_t segments() const noexcept { return segment_ends.size(); }
};

// O(1) least-squares cost of a segment from prefix sums of y and y^2.
class SegmentCost {
 public:
  explicit SegmentCost(std::span<const double> y) : sum_(y.size() + 1, 0.0), sum_sq_(y.size() + 1, 0.0) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      sum_[i + 1] = sum_[i] + y[i];
      sum_sq_[i + 1] = sum_sq_[i] + y[i] * y[i];
    }
  }

  // Residual sum of squares of y[begin, end) around its mean.
  double operator()(std::size_t begin, std::size_t end) const {
    const double len = static_cast<double>(end - begin);
    const double s = sum_[end] - sum_[begin];
    return std::max(0.0, sum_sq_[end] - sum_sq_[begin] - s * s / len);
  }

  double mean(std::size_t begin, std::size_t end) const {
    return (sum_[end] - sum_[begin]) / static_cast<double>(end - begin);
  }

 private:
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
};

// Exact least-squares segmentation into D = 1..d_max contiguous segments by
// dynamic programming, O(n^2 d_max). Costs within 1e-9 count as ties; the
// earliest last boundary wins.
inline std::vector<Segmentation> dp_segment(std::span<const double> y, std::size_t d_max) {
  const std::size_t n = y.size();
  if (d_max == 0) throw std::invalid_argument("dp_segment: d_max must be >= 1");
  if (d_max > n) throw std::invalid_argument("dp_segment: d_max exceeds the signal length");

  constexpr double tie_tolerance = 1e-9;
  constexpr double inf = std::numeric_limits<double>::infinity();
  const SegmentCost cost(y);

  // best[d][j]: minimal cost of y[0, j) in d + 1 segments; start[d][j]: where
  // the last of those segments begins.
  std::vector<std::vector<double>> best(d_max, std::vector<double>(n + 1, inf));
  std::vector<std::vector<std::size_t>> start(d_max, std::vector<std::size_t>(n + 1, 0));
  for (std::size_t j = 1; j <= n; ++j) best[0][j] = cost(0, j);
  for (std::size_t d = 1; d < d_max; ++d) {
    for (std::size_t j = d + 1; j <= n; ++j) {
      double b = inf;
      std::size_t arg = d;
      for (std::size_t i = d; i < j; ++i) {
        const double c = best[d - 1][i] + cost(i, j);
        if (c < b - tie_tolerance) {
          b = c;
          arg = i;
        }
      }
      best[d][j] = b;
      start[d][j] = arg;
    }
  }

  std::vector<Segmentation> out(d_max);
  for (std::size_t d = 0; d < d_max; ++d) {
    Segmentation& seg = out[d];
    seg.segment_ends.resize(d + 1);
    std::size_t end = n;
    for (std::size_t k = d + 1; k-- > 0;) {
      seg.segment_ends[k] = end;
      end = k == 0 ? 0 : start[k][end];
    }
    std::size_t begin = 0;
    seg.rss = 0.0;
    for (std::size_t e : seg.segment_ends) {
      seg.levels.push_back(cost.mean(begin, e));
      seg.rss += cost(begin, e);
      begin = e;
    }
  }
  return out;
}

}  // namespace msel
