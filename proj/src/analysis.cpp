#include "dge/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dge {

namespace {

// Average-tie ranks, 1-based.
Eigen::VectorXd average_ranks(const Eigen::VectorXd& values) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return values(i) < values(j);
  });

  Eigen::VectorXd ranks(n);
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j + 1 < n && values(order[static_cast<std::size_t>(j + 1)]) ==
                            values(order[static_cast<std::size_t>(i)])) {
      ++j;
    }
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Eigen::Index k = i; k <= j; ++k) {
      ranks(order[static_cast<std::size_t>(k)]) = shared;
    }
    i = j + 1;
  }
  return ranks;
}

}  // namespace

void require_valid(const APRecord& record) {
  if (!(record.ap >= 0.0 && record.ap <= 1.0)) {
    throw ValidationError(errc::bad_argument,
                          "ap for '" + record.domain_id + "' is " +
                              std::to_string(record.ap) +
                              ", outside [0, 1]");
  }
}

void require_valid(const ProfilePair& pair) {
  const std::size_t n = pair.domain_ids.size();
  if (pair.gap_values.size() != n || pair.ap_discrepancies.size() != n) {
    throw ValidationError(errc::length_mismatch,
                          "profile series differ in length");
  }
  if (n < 2) {
    throw ValidationError(errc::bad_argument,
                          "profile needs at least 2 domains");
  }
  for (double v : pair.gap_values) {
    if (!(v >= 0.0)) {
      throw ValidationError(errc::bad_argument, "negative gap value");
    }
  }
  for (double v : pair.ap_discrepancies) {
    if (!(v >= 0.0)) {
      throw ValidationError(errc::bad_argument, "negative AP discrepancy");
    }
  }
}

double ap_discrepancy(const APRecord& source, const APRecord& target) {
  require_valid(source);
  require_valid(target);
  return std::abs(source.ap - target.ap);
}

Eigen::VectorXd normalize_profile(const Eigen::VectorXd& values,
                                  double epsilon) {
  if (values.size() == 0) {
    throw ValidationError(errc::empty_input, "nothing to normalize");
  }
  if (epsilon < 0.0) {
    throw ValidationError(errc::bad_argument, "epsilon must be >= 0");
  }
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!(values(i) >= 0.0)) {
      throw ValidationError(errc::bad_argument,
                            "profile entries must be >= 0");
    }
  }
  Eigen::VectorXd smoothed = values.array() + epsilon;
  const double sum = smoothed.sum();
  if (sum <= 0.0) {
    throw ValidationError(errc::all_zero,
                          "all entries zero and no smoothing applied");
  }
  return smoothed / sum;
}

double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) {
    throw ValidationError(errc::length_mismatch,
                          "p has " + std::to_string(p.size()) +
                              " entries, q has " + std::to_string(q.size()));
  }
  if (p.size() == 0) {
    throw ValidationError(errc::empty_input, "empty distributions");
  }
  constexpr double tol = 1e-9;
  if (std::abs(p.sum() - 1.0) > tol || std::abs(q.sum() - 1.0) > tol) {
    throw ValidationError(errc::not_normalized,
                          "inputs must sum to 1 within 1e-9");
  }
  double kl = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p(i) >= 0.0) || !(q(i) >= 0.0)) {
      throw ValidationError(errc::bad_argument, "negative probability");
    }
    if (p(i) == 0.0) continue;
    if (q(i) == 0.0) {
      throw ValidationError(errc::bad_argument,
                            "q vanishes where p does not; smooth q first");
    }
    kl += p(i) * std::log(p(i) / q(i));
  }
  // Rounding can drag a near-identical pair a hair below zero; the true
  // value never is (Gibbs), so clamp.
  return kl < 0.0 ? 0.0 : kl;
}

double spearman_correlation(const Eigen::VectorXd& a,
                            const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw ValidationError(errc::length_mismatch,
                          "series differ in length");
  }
  const Eigen::Index n = a.size();
  if (n < 3) {
    throw ValidationError(errc::bad_argument,
                          "need at least 3 observations");
  }
  const Eigen::VectorXd ra = average_ranks(a);
  const Eigen::VectorXd rb = average_ranks(b);
  const Eigen::VectorXd ca = ra.array() - ra.mean();
  const Eigen::VectorXd cb = rb.array() - rb.mean();
  const double var_a = ca.squaredNorm();
  const double var_b = cb.squaredNorm();
  if (var_a == 0.0 || var_b == 0.0) {
    throw ValidationError(errc::degenerate_ranks,
                          "constant input has no rank ordering");
  }
  return ca.dot(cb) / std::sqrt(var_a * var_b);
}

}  // namespace dge
