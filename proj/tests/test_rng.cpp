#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dge/rng.hpp"

using namespace dge;

TEST_CASE("mt19937_64 sequence is the standard one") {
  // C++ standard, [rand.predef]: the 10000th consecutive invocation of
  // mt19937_64 seeded with 5489 produces 9981545732273789042.
  std::mt19937_64 reference(5489);
  for (int i = 0; i < 9999; ++i) reference();
  CHECK(reference() == 9981545732273789042ull);
}

TEST_CASE("derived seeds separate purposes, indices, and order") {
  const RngSpec base{42, "", {}};
  const RngSpec bank = base.with_purpose("projection-bank");
  const RngSpec noise = base.with_purpose("synth-noise");
  CHECK(bank.derived_seed() != noise.derived_seed());
  CHECK(bank.child(0).derived_seed() != bank.child(1).derived_seed());
  CHECK(bank.child(0).child(1).derived_seed() !=
        bank.child(1).child(0).derived_seed());
  CHECK(bank.child(3).derived_seed() == bank.child(3).derived_seed());
}

TEST_CASE("identical specs give identical streams") {
  const RngSpec spec = RngSpec{7, "x", {}}.child(5);
  RngStream a(spec);
  RngStream b(spec);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform stays in [0, 1)") {
  RngStream s(123);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("gaussian has roughly standard moments") {
  RngStream s(99);
  const int n = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = s.gaussian();
    CHECK(std::isfinite(g));
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("below covers its range uniformly and stays in bounds") {
  RngStream s(7);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 50000; ++i) {
    const std::uint64_t v = s.below(5);
    REQUIRE(v < 5);
    ++counts[static_cast<std::size_t>(v)];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  CHECK(s.below(1) == 0);
}
