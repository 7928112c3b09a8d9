#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "dge/feature_set.hpp"
#include "dge/projection.hpp"

namespace dge {

enum class Metric { mmd, swd, dss_full, dss_proj };

const char* metric_name(Metric m) noexcept;
std::optional<Metric> parse_metric(std::string_view name) noexcept;

// Per-level gap values and their mean for one (source, target, metric)
// evaluation. m_used is set only for projection-based metrics.
struct GapReport {
  Metric metric = Metric::mmd;
  std::string source_id;
  std::string target_id;
  std::map<int, double> per_level;
  double aggregate = 0.0;
  std::optional<Index> m_used;
};

// Squared Euclidean distance between the two sets' mean feature vectors
// (mean-embedding MMD with the identity feature map).
double mmd_level(const FeatureSet& src, const FeatureSet& tgt);

// Exact optimal-transport cost between uniform empirical measures on the
// line under squared-difference cost: sort both sides, couple monotonely.
// The monotone coupling is optimal because the cost is convex on the
// line; for equal counts this is (1/N) * sum (sorted_src_i-sorted_tgt_i)^2.
double ot1d_cost(Eigen::VectorXd src_vals, Eigen::VectorXd tgt_vals);

// Factorial reference for ot1d_cost: expands both lists to
// L = lcm(N_s, N_t) equal-mass atoms and takes the best of all L!
// matchings. Refuses L > 8. Shares no code with ot1d_cost.
double wd1d_bruteforce(const Eigen::VectorXd& src_vals,
                       const Eigen::VectorXd& tgt_vals);

// Mean over the bank's directions of the exact 1-D transport cost
// between the projected sets.
double swd_level(const FeatureSet& src, const FeatureSet& tgt,
                 const ProjectionBank& bank);

// Squared Frobenius distance of the two sample covariance matrices
// (unbiased, mean-centered), scaled by 1/(4 d^2). Meant for small d;
// refuses d > dim_cap.
double dss_level_full(const FeatureSet& src, const FeatureSet& tgt,
                      Index dim_cap = 4096);

// Per direction, squared difference of the projected sample variances,
// averaged and scaled by 1/(4M). Note: no 1/d^2 factor, matching the
// projected formulation rather than the full one.
double dss_level_projected(const FeatureSet& src, const FeatureSet& tgt,
                           const ProjectionBank& bank);

using BankMap = std::map<int, ProjectionBank>;

// One bank per level of the snapshot, m directions each, all derived
// from the same spec.
BankMap sample_banks(const DomainSnapshot& snapshot, Index m,
                     const RngSpec& rng);

// Validates both snapshots, evaluates the metric on every level present
// in both, and aggregates with the unweighted mean over those levels.
// Banks are required (and must cover the shared levels) for swd and
// dss_proj.
GapReport compute_gap(const DomainSnapshot& src, const DomainSnapshot& tgt,
                      Metric metric, const BankMap* banks = nullptr);

}  // namespace dge
