#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <set>

#include "dge/feature_set.hpp"

using namespace dge;

namespace {

FeatureSet make_set(int level, std::initializer_list<std::initializer_list<float>> rows) {
  FeatureSet fs;
  fs.level = level;
  const Index r = static_cast<Index>(rows.size());
  const Index c = static_cast<Index>(rows.begin()->size());
  fs.data.resize(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (float v : row) fs.data(i, j++) = v;
    ++i;
  }
  return fs;
}

DomainSnapshot one_level(const std::string& id, FeatureSet fs) {
  DomainSnapshot s;
  s.domain_id = id;
  s.levels.emplace(fs.level, std::move(fs));
  return s;
}

}  // namespace

TEST_CASE("well-formed snapshot validates") {
  const auto s = one_level("a", make_set(3, {{1, 2, 3}, {4, 5, 6}}));
  CHECK(!validate_snapshot(s).has_value());
  CHECK_NOTHROW(require_valid(s));
}

TEST_CASE("empty snapshot is rejected") {
  DomainSnapshot s;
  s.domain_id = "a";
  const auto issue = validate_snapshot(s);
  REQUIRE(issue.has_value());
  CHECK(issue->code == errc::empty_snapshot);
}

TEST_CASE("NaN and Inf are rejected at the right level") {
  auto s = one_level("a", make_set(3, {{1, 2}, {3, 4}}));
  s.levels.emplace(4, make_set(4, {{1, 2}, {3, 4}}));
  s.levels.at(4).data(1, 0) = std::numeric_limits<float>::quiet_NaN();
  auto issue = validate_snapshot(s);
  REQUIRE(issue.has_value());
  CHECK(issue->code == errc::non_finite);
  CHECK(issue->level == 4);

  s.levels.at(4).data(1, 0) = std::numeric_limits<float>::infinity();
  issue = validate_snapshot(s);
  REQUIRE(issue.has_value());
  CHECK(issue->code == errc::non_finite);
}

TEST_CASE("zero-row level is rejected") {
  DomainSnapshot s;
  s.domain_id = "a";
  FeatureSet fs;
  fs.level = 3;
  fs.data.resize(0, 4);
  s.levels.emplace(3, std::move(fs));
  const auto issue = validate_snapshot(s);
  REQUIRE(issue.has_value());
  CHECK(issue->code == errc::empty_level);
  CHECK(issue->level == 3);
}

TEST_CASE("level key must match the set's level field") {
  DomainSnapshot s;
  s.domain_id = "a";
  s.levels.emplace(5, make_set(3, {{1, 2}}));
  const auto issue = validate_snapshot(s);
  REQUIRE(issue.has_value());
  CHECK(issue->code == errc::level_mismatch);
}

TEST_CASE("merge concatenates with a's rows first") {
  const auto a = one_level("a", make_set(3, {{1, 1, 1, 1}, {2, 2, 2, 2}}));
  const auto b =
      one_level("b", make_set(3, {{3, 3, 3, 3}, {4, 4, 4, 4}, {5, 5, 5, 5}}));
  const DomainSnapshot m = merge_snapshots(a, b);
  CHECK(m.domain_id == "a+b");
  REQUIRE(m.levels.count(3) == 1);
  const FeatureSet& fs = m.levels.at(3);
  CHECK(fs.count() == 5);
  CHECK(fs.dim() == 4);
  CHECK(fs.data(0, 0) == 1.0f);
  CHECK(fs.data(1, 0) == 2.0f);
  CHECK(fs.data(2, 0) == 3.0f);
  CHECK(fs.data(4, 0) == 5.0f);
}

TEST_CASE("merge passes disjoint levels through") {
  const auto a = one_level("a", make_set(3, {{1, 2}}));
  const auto b = one_level("b", make_set(4, {{3, 4}}));
  const DomainSnapshot m = merge_snapshots(a, b);
  CHECK(m.levels.size() == 2);
  CHECK(m.levels.at(3).count() == 1);
  CHECK(m.levels.at(4).count() == 1);
}

TEST_CASE("merge rejects dim conflicts on shared levels") {
  const auto a = one_level("a", make_set(3, {{1, 2, 3, 4}}));
  const auto b = one_level("b", make_set(3, {{1, 2, 3, 4, 5}}));
  CHECK_THROWS_AS(merge_snapshots(a, b), ValidationError);
}

TEST_CASE("merge preserves per-level row counts") {
  const auto a = one_level("a", make_set(3, {{1, 2}, {3, 4}}));
  const auto b = one_level("b", make_set(3, {{5, 6}}));
  const DomainSnapshot m = merge_snapshots(a, b);
  CHECK(m.levels.at(3).count() ==
        a.levels.at(3).count() + b.levels.at(3).count());
}

TEST_CASE("subsample below cap is a bit-identical no-op") {
  const FeatureSet fs = make_set(3, {{1, 2}, {3, 4}, {5, 6}});
  const FeatureSet out = reservoir_subsample(fs, 10, RngSpec{1});
  CHECK(out.data == fs.data);
  CHECK(out.level == fs.level);
}

TEST_CASE("subsample is deterministic and draws real rows") {
  FeatureSet fs;
  fs.level = 3;
  fs.data.resize(100, 2);
  for (Index i = 0; i < 100; ++i) {
    fs.data(i, 0) = static_cast<float>(i);
    fs.data(i, 1) = static_cast<float>(i * 2);
  }
  const RngSpec rng{77, "subsample-test", {}};
  const FeatureSet a = reservoir_subsample(fs, 10, rng);
  const FeatureSet b = reservoir_subsample(fs, 10, rng);
  REQUIRE(a.count() == 10);
  CHECK(a.data == b.data);

  std::set<float> seen;
  for (Index i = 0; i < a.count(); ++i) {
    const float key = a.data(i, 0);
    CHECK(a.data(i, 1) == key * 2);  // row integrity
    CHECK(key >= 0.0f);
    CHECK(key < 100.0f);
    CHECK(key == std::floor(key));
    seen.insert(key);
  }
  CHECK(seen.size() == 10);  // without replacement

  // kept rows preserve input order
  for (Index i = 1; i < a.count(); ++i) {
    CHECK(a.data(i - 1, 0) < a.data(i, 0));
  }
}

TEST_CASE("subsample with a larger cap after a smaller one is a no-op") {
  FeatureSet fs;
  fs.level = 3;
  fs.data.resize(50, 1);
  for (Index i = 0; i < 50; ++i) fs.data(i, 0) = static_cast<float>(i);
  const RngSpec rng{5};
  const FeatureSet small = reservoir_subsample(fs, 8, rng);
  const FeatureSet again = reservoir_subsample(small, 20, rng);
  CHECK(again.data == small.data);
}

TEST_CASE("subsample rejects a nonpositive cap") {
  const FeatureSet fs = make_set(3, {{1, 2}});
  CHECK_THROWS_AS(reservoir_subsample(fs, 0, RngSpec{1}), ValidationError);
}
