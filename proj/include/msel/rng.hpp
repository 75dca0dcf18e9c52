#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace msel {

// Purpose tags for independent random streams within a replicate.
enum class StreamRole : std::uint64_t {
  training = 1,
  validation = 2,
  noise = 3,
  shuffle = 4,
  design = 5,
};

namespace detail {

constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Counter-based stream: the i-th output is mix64(key + (i + 1) * gamma), so a
// stream is fully determined by its key and position. Keys are derived from
// (seed, replicate, role), which makes parallel and sequential runs agree.
//
// Uniform and normal variates are produced here rather than through <random>
// distributions, whose algorithms are implementation-defined.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  CounterRng(std::uint64_t seed, std::uint64_t replicate, StreamRole role) noexcept
      : key_(derive_key(seed, replicate, role)) {}

  static constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t replicate,
                                            StreamRole role) noexcept {
    std::uint64_t k = detail::mix64(seed + detail::golden_gamma);
    k = detail::mix64(k ^ (replicate + 0x632be59bd9b4e019ULL));
    return detail::mix64(k ^ (static_cast<std::uint64_t>(role) * 0xd1b54a32d192ed03ULL));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    ++counter_;
    return detail::mix64(key_ + counter_ * detail::golden_gamma);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  // Box-Muller; the second variate of each pair is kept for the next call.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Index drawn from a cumulative distribution (last entry ~ 1).
  std::size_t categorical(std::span<const double> cumulative) noexcept {
    const double u = uniform() * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                 cumulative.size() - 1);
  }

  // Uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("CounterRng::below: bound must be positive");
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t r = 0;
    do {
      r = (*this)();
    } while (r >= limit);
    return r % bound;
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Fisher-Yates permutation of 0..n-1.
inline std::vector<std::size_t> seeded_permutation(std::size_t n, CounterRng& rng) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

}  // namespace msel
