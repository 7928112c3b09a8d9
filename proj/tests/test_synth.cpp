#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dge/metrics.hpp"
#include "dge/synth.hpp"

using namespace dge;

namespace {

DriftScenario base_scenario(std::uint64_t seed) {
  DriftScenario scenario;
  scenario.levels = {{3, 4}};
  scenario.samples_per_domain = 400;
  scenario.cycle_length = 8;
  scenario.amplitude = 3.0;
  scenario.base_cov_scale = 1.0;
  scenario.noise_seed = RngSpec{seed};
  return scenario;
}

}  // namespace

TEST_CASE("scenario validation") {
  DriftScenario s = base_scenario(1);
  CHECK_NOTHROW(require_valid(s));
  s.cycle_length = 1;
  CHECK_THROWS_AS(require_valid(s), ValidationError);
  s = base_scenario(1);
  s.samples_per_domain = 1;
  CHECK_THROWS_AS(require_valid(s), ValidationError);
  s = base_scenario(1);
  s.levels = {{3, 1}};  // mean-on-circle needs two coordinates
  CHECK_THROWS_AS(require_valid(s), ValidationError);
  s.mode = DriftMode::variance_scale;
  CHECK_NOTHROW(require_valid(s));
  s = base_scenario(1);
  s.base_cov_scale = 0.0;
  CHECK_THROWS_AS(require_valid(s), ValidationError);
  s = base_scenario(1);
  s.base_mean.emplace(3, Eigen::VectorXd::Zero(5));
  CHECK_THROWS_AS(require_valid(s), ValidationError);
}

TEST_CASE("snapshots have the declared shape and phase id") {
  DriftScenario s = base_scenario(2);
  s.levels = {{3, 4}, {5, 6}};
  const DomainSnapshot snap = gen_domain(s, 3);
  CHECK(snap.domain_id == "phase-3");
  CHECK(snap.levels.at(3).count() == 400);
  CHECK(snap.levels.at(3).dim() == 4);
  CHECK(snap.levels.at(5).dim() == 6);
  CHECK(!validate_snapshot(snap).has_value());
}

TEST_CASE("phase t and t+P are bit-identical") {
  const DriftScenario s = base_scenario(3);
  const DomainSnapshot a = gen_domain(s, 2);
  const DomainSnapshot b = gen_domain(s, 2 + s.cycle_length);
  CHECK(a.domain_id == b.domain_id);
  CHECK(a.levels.at(3).data == b.levels.at(3).data);
  const DomainSnapshot c = gen_domain(s, 2 + 3 * s.cycle_length);
  CHECK(a.levels.at(3).data == c.levels.at(3).data);
}

TEST_CASE("different phases and seeds differ") {
  const DriftScenario s = base_scenario(4);
  const DomainSnapshot a = gen_domain(s, 0);
  const DomainSnapshot b = gen_domain(s, 1);
  CHECK(a.levels.at(3).data != b.levels.at(3).data);
  DriftScenario s2 = base_scenario(5);
  const DomainSnapshot c = gen_domain(s2, 0);
  CHECK(a.levels.at(3).data != c.levels.at(3).data);
}

TEST_CASE("negative phase is rejected") {
  CHECK_THROWS_AS(gen_domain(base_scenario(6), -1), ValidationError);
}

TEST_CASE("true mean follows the circle and true sigma the sine bump") {
  DriftScenario s = base_scenario(7);
  const Eigen::VectorXd m0 = true_mean(s, 3, 0);
  CHECK(m0(0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(m0(1) == doctest::Approx(0.0).epsilon(1e-12));
  const Eigen::VectorXd mhalf = true_mean(s, 3, s.cycle_length / 2);
  CHECK(mhalf(0) == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK((m0 - mhalf).norm() == doctest::Approx(2.0 * s.amplitude).epsilon(1e-12));
  CHECK(true_sigma(s, 2) == 1.0);  // mean mode leaves sigma alone

  s.mode = DriftMode::variance_scale;
  CHECK(true_sigma(s, 0) == 1.0);
  CHECK(true_sigma(s, s.cycle_length / 2) ==
        doctest::Approx(1.0 + s.amplitude).epsilon(1e-12));
  const Eigen::VectorXd frozen = true_mean(s, 3, 5);
  CHECK(frozen.isZero(0.0));
}

TEST_CASE("sample moments track the configured distribution") {
  DriftScenario s = base_scenario(8);
  s.samples_per_domain = 4000;
  s.base_mean.emplace(3, (Eigen::VectorXd(4) << 5, -1, 2, 0).finished());
  const DomainSnapshot snap = gen_domain(s, 0);
  const Eigen::VectorXd mean =
      snap.levels.at(3).data.cast<double>().colwise().mean().transpose();
  const Eigen::VectorXd expect = true_mean(s, 3, 0);
  for (Index j = 0; j < 4; ++j) {
    CHECK(mean(j) == doctest::Approx(expect(j)).epsilon(0.1));
  }
  Eigen::MatrixXd centered = snap.levels.at(3).data.cast<double>();
  centered.rowwise() -= mean.transpose();
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / (centered.rows() - 1.0);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) {
      CHECK(cov(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0).epsilon(0.08));
    }
  }
}

TEST_CASE("A=0 keeps all phases in distribution") {
  DriftScenario s = base_scenario(9);
  s.amplitude = 0.0;
  const DomainSnapshot a = gen_domain(s, 0);
  const DomainSnapshot b = gen_domain(s, 4);
  // distinct noise with identical distribution: gap near 0
  const GapReport report = compute_gap(a, b, Metric::mmd);
  CHECK(report.aggregate < 0.05);
  CHECK(report.aggregate > 0.0);
}

TEST_CASE("opposite phase has the largest gap in the cycle") {
  const DriftScenario s = base_scenario(10);
  const DomainSnapshot origin = gen_domain(s, 0);
  double opposite = 0.0;
  double best_other = 0.0;
  for (int t = 1; t < s.cycle_length; ++t) {
    const double gap =
        compute_gap(origin, gen_domain(s, t), Metric::mmd).aggregate;
    if (t == s.cycle_length / 2) {
      opposite = gap;
    } else {
      best_other = std::max(best_other, gap);
    }
  }
  CHECK(opposite > best_other);
  // true squared displacement is (2A)^2 = 36
  CHECK(opposite == doctest::Approx(36.0).epsilon(0.15));
}

TEST_CASE("gen_schedule maps phases in order and repeats exactly") {
  const DriftScenario s = base_scenario(11);
  const std::vector<DomainSnapshot> snaps = gen_schedule(s, {0, 1, 2, 1});
  REQUIRE(snaps.size() == 4);
  CHECK(snaps[0].domain_id == "phase-0");
  CHECK(snaps[1].domain_id == "phase-1");
  CHECK(snaps[2].domain_id == "phase-2");
  CHECK(snaps[3].domain_id == "phase-1");
  CHECK(snaps[1].levels.at(3).data == snaps[3].levels.at(3).data);
  CHECK_THROWS_AS(gen_schedule(s, {}), ValidationError);
}
