#include "dge/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace dge {

namespace {

void check_pair(const FeatureSet& src, const FeatureSet& tgt) {
  if (src.level != tgt.level) {
    throw ValidationError(errc::level_mismatch,
                          "source level " + std::to_string(src.level) +
                              " vs target level " + std::to_string(tgt.level));
  }
  if (src.dim() != tgt.dim()) {
    throw ValidationError(errc::dim_mismatch,
                          "source dim " + std::to_string(src.dim()) +
                              " vs target dim " + std::to_string(tgt.dim()));
  }
  if (src.count() == 0 || tgt.count() == 0) {
    throw ValidationError(errc::empty_level,
                          "level " + std::to_string(src.level) +
                              ": empty feature set");
  }
}

void check_bank(const FeatureSet& src, const ProjectionBank& bank) {
  if (src.level != bank.level) {
    throw ValidationError(errc::level_mismatch,
                          "feature level " + std::to_string(src.level) +
                              " vs bank level " + std::to_string(bank.level));
  }
  if (src.dim() != bank.dim()) {
    throw ValidationError(errc::dim_mismatch,
                          "feature dim " + std::to_string(src.dim()) +
                              " vs bank dim " + std::to_string(bank.dim()));
  }
}

// Unbiased sample covariance, accumulated in 64-bit.
Eigen::MatrixXd sample_covariance(const FeatureMatrix& x) {
  Eigen::MatrixXd xd = x.cast<double>();
  const Eigen::RowVectorXd mean = xd.colwise().mean();
  xd.rowwise() -= mean;
  return xd.transpose() * xd / static_cast<double>(x.rows() - 1);
}

double sample_variance(const Eigen::Ref<const Eigen::RowVectorXd>& values) {
  const double mean = values.mean();
  return (values.array() - mean).square().sum() /
         static_cast<double>(values.size() - 1);
}

}  // namespace

const char* metric_name(Metric m) noexcept {
  switch (m) {
    case Metric::mmd:
      return "mmd";
    case Metric::swd:
      return "swd";
    case Metric::dss_full:
      return "dss_full";
    case Metric::dss_proj:
      return "dss_proj";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view name) noexcept {
  if (name == "mmd") return Metric::mmd;
  if (name == "swd") return Metric::swd;
  if (name == "dss" || name == "dss_proj" || name == "dss-proj") {
    return Metric::dss_proj;
  }
  if (name == "dss_full" || name == "dss-full") return Metric::dss_full;
  return std::nullopt;
}

double mmd_level(const FeatureSet& src, const FeatureSet& tgt) {
  check_pair(src, tgt);
  const Eigen::VectorXd mean_src =
      src.data.cast<double>().colwise().mean().transpose();
  const Eigen::VectorXd mean_tgt =
      tgt.data.cast<double>().colwise().mean().transpose();
  return (mean_src - mean_tgt).squaredNorm();
}

double ot1d_cost(Eigen::VectorXd src_vals, Eigen::VectorXd tgt_vals) {
  const Index ns = src_vals.size();
  const Index nt = tgt_vals.size();
  if (ns == 0 || nt == 0) {
    throw ValidationError(errc::empty_input, "ot1d_cost needs nonempty lists");
  }
  std::sort(src_vals.data(), src_vals.data() + ns);
  std::sort(tgt_vals.data(), tgt_vals.data() + nt);

  // North-west-corner walk with integer masses: each source atom carries
  // weight nt, each target atom weight ns, total ns*nt.
  const std::uint64_t ws = static_cast<std::uint64_t>(nt);
  const std::uint64_t wt = static_cast<std::uint64_t>(ns);
  std::uint64_t remaining_s = ws;
  std::uint64_t remaining_t = wt;
  Index i = 0;
  Index j = 0;
  double total = 0.0;
  while (i < ns && j < nt) {
    const std::uint64_t moved = std::min(remaining_s, remaining_t);
    const double diff = src_vals(i) - tgt_vals(j);
    total += static_cast<double>(moved) * diff * diff;
    remaining_s -= moved;
    remaining_t -= moved;
    if (remaining_s == 0) {
      ++i;
      remaining_s = ws;
    }
    if (remaining_t == 0) {
      ++j;
      remaining_t = wt;
    }
  }
  return total / (static_cast<double>(ns) * static_cast<double>(nt));
}

double wd1d_bruteforce(const Eigen::VectorXd& src_vals,
                       const Eigen::VectorXd& tgt_vals) {
  const Index ns = src_vals.size();
  const Index nt = tgt_vals.size();
  if (ns == 0 || nt == 0) {
    throw ValidationError(errc::empty_input,
                          "wd1d_bruteforce needs nonempty lists");
  }
  const Index atoms = std::lcm(ns, nt);
  if (atoms > 8) {
    throw ValidationError(errc::too_large,
                          "lcm(" + std::to_string(ns) + ", " +
                              std::to_string(nt) + ") exceeds 8 atoms");
  }
  std::vector<double> su;
  std::vector<double> tv;
  su.reserve(static_cast<std::size_t>(atoms));
  tv.reserve(static_cast<std::size_t>(atoms));
  for (Index i = 0; i < ns; ++i) {
    for (Index r = 0; r < atoms / ns; ++r) su.push_back(src_vals(i));
  }
  for (Index j = 0; j < nt; ++j) {
    for (Index r = 0; r < atoms / nt; ++r) tv.push_back(tgt_vals(j));
  }

  std::vector<Index> perm(static_cast<std::size_t>(atoms));
  std::iota(perm.begin(), perm.end(), Index{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (Index i = 0; i < atoms; ++i) {
      const double diff =
          su[static_cast<std::size_t>(i)] -
          tv[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
      cost += diff * diff;
    }
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(atoms);
}

double swd_level(const FeatureSet& src, const FeatureSet& tgt,
                 const ProjectionBank& bank) {
  check_pair(src, tgt);
  check_bank(src, bank);
  const ProjectedSet proj_src = project_features(src, bank);
  const ProjectedSet proj_tgt = project_features(tgt, bank);
  const Index m = bank.count();
  double total = 0.0;
  for (Index row = 0; row < m; ++row) {
    total += ot1d_cost(proj_src.values.row(row).transpose(),
                       proj_tgt.values.row(row).transpose());
  }
  return total / static_cast<double>(m);
}

double dss_level_full(const FeatureSet& src, const FeatureSet& tgt,
                      Index dim_cap) {
  check_pair(src, tgt);
  if (src.count() < 2 || tgt.count() < 2) {
    throw ValidationError(errc::insufficient_samples,
                          "covariance needs at least 2 samples per set");
  }
  if (src.dim() > dim_cap) {
    throw ValidationError(errc::dim_too_large,
                          "dim " + std::to_string(src.dim()) +
                              " exceeds the full-covariance cap " +
                              std::to_string(dim_cap));
  }
  const Eigen::MatrixXd cov_src = sample_covariance(src.data);
  const Eigen::MatrixXd cov_tgt = sample_covariance(tgt.data);
  const double d = static_cast<double>(src.dim());
  return (cov_src - cov_tgt).squaredNorm() / (4.0 * d * d);
}

double dss_level_projected(const FeatureSet& src, const FeatureSet& tgt,
                           const ProjectionBank& bank) {
  check_pair(src, tgt);
  check_bank(src, bank);
  if (src.count() < 2 || tgt.count() < 2) {
    throw ValidationError(errc::insufficient_samples,
                          "variance needs at least 2 samples per set");
  }
  const ProjectedSet proj_src = project_features(src, bank);
  const ProjectedSet proj_tgt = project_features(tgt, bank);
  const Index m = bank.count();
  double total = 0.0;
  for (Index row = 0; row < m; ++row) {
    const double var_src = sample_variance(proj_src.values.row(row));
    const double var_tgt = sample_variance(proj_tgt.values.row(row));
    const double diff = var_src - var_tgt;
    total += diff * diff;
  }
  return total / (4.0 * static_cast<double>(m));
}

BankMap sample_banks(const DomainSnapshot& snapshot, Index m,
                     const RngSpec& rng) {
  BankMap banks;
  for (const auto& [level, fs] : snapshot.levels) {
    banks.emplace(level, sample_projection_bank(level, fs.dim(), m, rng));
  }
  return banks;
}

GapReport compute_gap(const DomainSnapshot& src, const DomainSnapshot& tgt,
                      Metric metric, const BankMap* banks) {
  require_valid(src);
  require_valid(tgt);

  const bool needs_bank =
      metric == Metric::swd || metric == Metric::dss_proj;
  if (needs_bank && banks == nullptr) {
    throw ValidationError(errc::missing_bank,
                          std::string(metric_name(metric)) +
                              " requires a projection bank per level");
  }

  GapReport report;
  report.metric = metric;
  report.source_id = src.domain_id;
  report.target_id = tgt.domain_id;

  for (const auto& [level, fs_src] : src.levels) {
    const auto it = tgt.levels.find(level);
    if (it == tgt.levels.end()) continue;
    const FeatureSet& fs_tgt = it->second;

    double value = 0.0;
    switch (metric) {
      case Metric::mmd:
        value = mmd_level(fs_src, fs_tgt);
        break;
      case Metric::dss_full:
        value = dss_level_full(fs_src, fs_tgt);
        break;
      case Metric::swd:
      case Metric::dss_proj: {
        const auto bank_it = banks->find(level);
        if (bank_it == banks->end()) {
          throw ValidationError(errc::missing_bank,
                                "no bank for level " + std::to_string(level));
        }
        const ProjectionBank& bank = bank_it->second;
        value = metric == Metric::swd
                    ? swd_level(fs_src, fs_tgt, bank)
                    : dss_level_projected(fs_src, fs_tgt, bank);
        if (!report.m_used) report.m_used = bank.count();
        break;
      }
    }
    report.per_level.emplace(level, value);
  }

  if (report.per_level.empty()) {
    throw ValidationError(errc::no_common_level,
                          "'" + src.domain_id + "' and '" + tgt.domain_id +
                              "' share no level");
  }
  double sum = 0.0;
  for (const auto& [level, value] : report.per_level) sum += value;
  report.aggregate = sum / static_cast<double>(report.per_level.size());
  return report;
}

}  // namespace dge
