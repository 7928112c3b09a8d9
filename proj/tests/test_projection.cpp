#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dge/projection.hpp"

using namespace dge;

TEST_CASE("bank rows are unit length") {
  const ProjectionBank bank = sample_projection_bank(3, 16, 32, RngSpec{11});
  CHECK(bank.count() == 32);
  CHECK(bank.dim() == 16);
  for (Index m = 0; m < bank.count(); ++m) {
    CHECK(std::abs(bank.directions.row(m).norm() - 1.0) < 1e-6);
  }
}

TEST_CASE("dim 1 directions are exactly +1 or -1") {
  const ProjectionBank bank = sample_projection_bank(3, 1, 4, RngSpec{2});
  for (Index m = 0; m < 4; ++m) {
    CHECK(std::abs(bank.directions(m, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("same RngSpec reproduces the bank bit-identically") {
  const RngSpec rng{123, "", {}};
  const ProjectionBank a = sample_projection_bank(4, 8, 10, rng);
  const ProjectionBank b = sample_projection_bank(4, 8, 10, rng);
  CHECK(a.directions == b.directions);
}

TEST_CASE("banks differ across levels and seeds") {
  const RngSpec rng{123};
  const ProjectionBank a = sample_projection_bank(3, 8, 4, rng);
  const ProjectionBank b = sample_projection_bank(4, 8, 4, rng);
  const ProjectionBank c = sample_projection_bank(3, 8, 4, RngSpec{124});
  CHECK(a.directions != b.directions);
  CHECK(a.directions != c.directions);
}

TEST_CASE("each direction has its own stream: prefix banks agree") {
  // Growing m must not reshuffle earlier directions.
  const RngSpec rng{9};
  const ProjectionBank small = sample_projection_bank(3, 8, 4, rng);
  const ProjectionBank big = sample_projection_bank(3, 8, 10, rng);
  CHECK(small.directions == big.directions.topRows(4));
}

TEST_CASE("invalid arguments are rejected") {
  CHECK_THROWS_AS(sample_projection_bank(3, 0, 4, RngSpec{1}),
                  ValidationError);
  CHECK_THROWS_AS(sample_projection_bank(3, 4, 0, RngSpec{1}),
                  ValidationError);
}

TEST_CASE("axis projection picks the matching coordinate") {
  FeatureSet fs;
  fs.level = 3;
  fs.data.resize(2, 2);
  fs.data << 3, 9, -2, 5;

  ProjectionBank bank;
  bank.level = 3;
  bank.directions.resize(1, 2);
  bank.directions << 1, 0;

  const ProjectedSet p = project_features(fs, bank);
  CHECK(p.values(0, 0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(p.values(0, 1) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("hand inner product 0.6*5 + 0.8*5 = 7") {
  FeatureSet fs;
  fs.level = 3;
  fs.data.resize(1, 2);
  fs.data << 5, 5;

  ProjectionBank bank;
  bank.level = 3;
  bank.directions.resize(1, 2);
  bank.directions << 0.6, 0.8;

  const ProjectedSet p = project_features(fs, bank);
  CHECK(p.values(0, 0) == 7.0);
}

TEST_CASE("projected values match per-entry inner products") {
  const ProjectionBank bank = sample_projection_bank(5, 6, 8, RngSpec{31});
  FeatureSet fs;
  fs.level = 5;
  fs.data.resize(4, 6);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 6; ++j) {
      fs.data(i, j) = static_cast<float>(0.25 * static_cast<double>(i + 1) *
                                         static_cast<double>(j - 2));
    }
  }
  const ProjectedSet p = project_features(fs, bank);
  REQUIRE(p.values.rows() == 8);
  REQUIRE(p.values.cols() == 4);
  for (Index m = 0; m < 8; ++m) {
    for (Index i = 0; i < 4; ++i) {
      double expect = 0.0;
      for (Index j = 0; j < 6; ++j) {
        expect += bank.directions(m, j) * static_cast<double>(fs.data(i, j));
      }
      CHECK(p.values(m, i) == doctest::Approx(expect).epsilon(1e-5));
    }
  }
}

TEST_CASE("level and dim mismatches are rejected") {
  const ProjectionBank bank = sample_projection_bank(3, 4, 2, RngSpec{1});
  FeatureSet fs;
  fs.level = 4;
  fs.data.resize(1, 4);
  fs.data.setZero();
  CHECK_THROWS_AS(project_features(fs, bank), ValidationError);
  fs.level = 3;
  fs.data.resize(1, 5);
  fs.data.setZero();
  CHECK_THROWS_AS(project_features(fs, bank), ValidationError);
}
