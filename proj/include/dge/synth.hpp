#pragma once

#include <map>
#include <utility>
#include <vector>

#include "dge/feature_set.hpp"

namespace dge {

enum class DriftMode { mean_circle, variance_scale };

// Cyclical drift over backbone levels. mean_circle rotates the true mean
// on a radius-A circle in the first two coordinates; variance_scale keeps
// the mean fixed and scales sigma by 1 + A*|sin(pi*t/P)| instead, giving
// covariance-sensitive metrics something to detect.
struct DriftScenario {
  std::vector<std::pair<int, Index>> levels;  // (level, dim)
  Index samples_per_domain = 2;
  int cycle_length = 2;  // P
  double amplitude = 0.0;
  std::map<int, Eigen::VectorXd> base_mean;  // zero vector when absent
  double base_cov_scale = 1.0;
  DriftMode mode = DriftMode::mean_circle;
  RngSpec noise_seed;
};

void require_valid(const DriftScenario& scenario);

// True mean of one level at phase t (mean_circle drift applied).
Eigen::VectorXd true_mean(const DriftScenario& scenario, int level, int t);

// Sigma at phase t (variance_scale drift applied).
double true_sigma(const DriftScenario& scenario, int t);

// Draws the snapshot for phase t. Noise streams are keyed on t mod P, so
// phases one full cycle apart are bit-identical.
DomainSnapshot gen_domain(const DriftScenario& scenario, int t);

std::vector<DomainSnapshot> gen_schedule(const DriftScenario& scenario,
                                         const std::vector<int>& phases);

}  // namespace dge
