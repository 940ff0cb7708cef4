// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace relrec {

// Deterministic random layer on top of std::mt19937_64. All distribution
// transforms are implemented here rather than via std::*_distribution,
// whose algorithms vary between standard libraries; this keeps generated
// corpora and training runs byte-identical across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
  uint64_t uniform_int(uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_int: n must be > 0");
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      const uint64_t x = gen_();
      if (x < limit) return x % n;
    }
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double two_pi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(two_pi * u2);
    has_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    if (v.size() < 2) return;
    for (size_t i = v.size() - 1; i > 0; --i) {
      const size_t j = uniform_int(i + 1);
      std::swap(v[i], v[j]);
    }
  }

  std::vector<size_t> permutation(size_t n) {
    std::vector<size_t> p(n);
    std::iota(p.begin(), p.end(), size_t{0});
    shuffle(p);
    return p;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Sampling from a fixed non-negative weight vector, proportional to weight.
// Cumulative sums are precomputed once so repeated draws are O(log n).
class DiscreteDist {
 public:
  explicit DiscreteDist(const std::vector<double>& weights) : cum_(weights) {
    double total = 0.0;
    for (size_t i = 0; i < cum_.size(); ++i) {
      if (cum_[i] < 0.0) throw std::invalid_argument("DiscreteDist: negative weight");
      total += cum_[i];
      cum_[i] = total;
    }
    if (!(total > 0.0)) throw std::invalid_argument("DiscreteDist: zero total weight");
    total_ = total;
  }

  size_t sample(Rng& rng) const {
    const double u = rng.uniform() * total_;
    // First index whose cumulative weight strictly exceeds u; zero-weight
    // entries can never be returned.
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    const size_t i = static_cast<size_t>(it - cum_.begin());
    return std::min(i, cum_.size() - 1);
  }

  double total() const { return total_; }

 private:
  std::vector<double> cum_;
  double total_ = 0.0;
};

}  // namespace relrec
