// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "relrec/rng.h"

using relrec::DiscreteDist;
using relrec::Rng;

TEST_CASE("engine matches the reference mt19937_64 stream") {
  // The standard pins the 10000th draw of a default-seeded mt19937_64.
  Rng rng(5489u);
  uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = rng.next_u64();
  CHECK(x == 9981545732273789042ull);

  Rng a(123);
  std::mt19937_64 b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b());
}

TEST_CASE("uniform stays in [0, 1) and is deterministic per seed") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 10000; ++i) {
    const double x = a.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    CHECK(b.uniform() == x);
    if (c.uniform() != x) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("ranged uniform respects bounds") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(-2.5, 4.0);
    CHECK(x >= -2.5);
    CHECK(x < 4.0);
  }
}

TEST_CASE("uniform_int covers [0, n) about evenly") {
  Rng rng(11);
  CHECK(rng.uniform_int(1) == 0);
  std::vector<int> counts(6, 0);
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) {
    const uint64_t x = rng.uniform_int(6);
    REQUIRE(x < 6);
    counts[static_cast<size_t>(x)]++;
  }
  for (int c : counts) {
    CHECK(c > draws / 6 - 500);
    CHECK(c < draws / 6 + 500);
  }
  CHECK_THROWS_AS(rng.uniform_int(0), std::invalid_argument);
}

TEST_CASE("normal has unit mean and variance at sampling accuracy") {
  Rng rng(99);
  const int n = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("shuffle permutes and repeats per seed") {
  Rng a(5), b(5);
  std::vector<int> va(50), vb(50);
  std::iota(va.begin(), va.end(), 0);
  std::iota(vb.begin(), vb.end(), 0);
  a.shuffle(va);
  b.shuffle(vb);
  CHECK(va == vb);
  std::vector<int> sorted = va;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) CHECK(sorted[static_cast<size_t>(i)] == i);
}

TEST_CASE("permutation returns each index once") {
  Rng rng(3);
  auto p = rng.permutation(31);
  std::sort(p.begin(), p.end());
  for (size_t i = 0; i < p.size(); ++i) CHECK(p[i] == i);
}

TEST_CASE("discrete distribution skips zero weights and tracks ratios") {
  DiscreteDist dist({0.0, 1.0, 0.0, 3.0});
  CHECK(dist.total() == doctest::Approx(4.0));
  Rng rng(17);
  int n1 = 0, n3 = 0;
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) {
    const size_t x = dist.sample(rng);
    REQUIRE((x == 1 || x == 3));
    (x == 1 ? n1 : n3)++;
  }
  CHECK(n1 > draws / 4 - 600);
  CHECK(n1 < draws / 4 + 600);
  CHECK(n3 == draws - n1);

  CHECK_THROWS_AS(DiscreteDist({1.0, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDist({0.0, 0.0}), std::invalid_argument);
}
