#pragma once

#include <string>
#include <vector>

#include "dge/error.hpp"

#include <Eigen/Core>

namespace dge {

// Externally supplied detector quality for one domain.
struct APRecord {
  std::string domain_id;
  double ap = 0.0;  // in [0, 1]
};

void require_valid(const APRecord& record);

// Index-aligned per-domain series of gap values and AP discrepancies.
struct ProfilePair {
  std::vector<std::string> domain_ids;
  std::vector<double> gap_values;
  std::vector<double> ap_discrepancies;
};

void require_valid(const ProfilePair& pair);

double ap_discrepancy(const APRecord& source, const APRecord& target);

// Epsilon-smoothed normalization to a probability vector. Throws AllZero
// when every entry is zero and epsilon is zero.
Eigen::VectorXd normalize_profile(const Eigen::VectorXd& values,
                                  double epsilon = 1e-10);

// KL(p || q) in nats, with 0 * ln(0/q) treated as 0. Both inputs must sum
// to 1 within 1e-9 and q must be strictly positive wherever p is.
double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

// Pearson correlation of average-tie rank vectors. Needs n >= 3 and
// nonconstant inputs.
double spearman_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace dge
