#include "dge/gating.hpp"

namespace dge {

namespace {

DomainSnapshot cap_levels(DomainSnapshot snapshot, Index cap,
                          const RngSpec& rng) {
  for (auto& [level, fs] : snapshot.levels) {
    fs = reservoir_subsample(
        fs, cap, rng.child(static_cast<std::uint64_t>(static_cast<std::int64_t>(level))));
  }
  return snapshot;
}

std::map<int, Index> level_counts(const DomainSnapshot& snapshot) {
  std::map<int, Index> counts;
  for (const auto& [level, fs] : snapshot.levels) counts.emplace(level, fs.count());
  return counts;
}

}  // namespace

const char* action_name(GateAction a) noexcept {
  return a == GateAction::Adapt ? "Adapt" : "Skip";
}

void require_valid(const GatingPolicy& policy) {
  if (policy.threshold < 0.0) {
    throw ValidationError(errc::bad_argument, "threshold must be >= 0");
  }
  if (policy.m < 1) {
    throw ValidationError(errc::bad_argument, "m must be >= 1");
  }
  if (!(policy.adapt_cost_units > 0.0)) {
    throw ValidationError(errc::bad_argument, "adapt_cost_units must be > 0");
  }
  if (policy.eval_cost_units < 0.0) {
    throw ValidationError(errc::bad_argument, "eval_cost_units must be >= 0");
  }
  if (policy.pool_cap && *policy.pool_cap < 1) {
    throw ValidationError(errc::bad_argument, "pool_cap must be >= 1");
  }
}

GateAction decide(const GapReport& gap, const GatingPolicy& policy) {
  if (gap.metric != policy.metric) {
    throw ValidationError(errc::metric_mismatch,
                          std::string("gap is ") + metric_name(gap.metric) +
                              " but policy gates on " +
                              metric_name(policy.metric));
  }
  return gap.aggregate < policy.threshold ? GateAction::Skip
                                          : GateAction::Adapt;
}

StepOutcome step(const DomainSnapshot& pool, const DomainSnapshot& incoming,
                 const GatingPolicy& policy, const BankMap& banks,
                 const RngSpec& rng, std::uint64_t step_index) {
  StepOutcome out;
  out.decision.domain_id = incoming.domain_id;
  out.decision.gap_report = compute_gap(pool, incoming, policy.metric, &banks);
  out.decision.action = decide(out.decision.gap_report, policy);
  out.decision.pool_rows_before = level_counts(pool);
  out.decision.step_cost = policy.eval_cost_units;

  if (out.decision.action == GateAction::Adapt) {
    out.decision.step_cost += policy.adapt_cost_units;
    if (policy.frozen_pool) {
      out.pool = pool;
    } else {
      out.pool = merge_snapshots(pool, incoming);
      out.pool.domain_id = pool.domain_id;  // pool keeps a stable identity
      if (policy.pool_cap) {
        out.pool = cap_levels(std::move(out.pool), *policy.pool_cap,
                              rng.with_purpose("pool-subsample").child(step_index));
      }
    }
  } else {
    out.pool = pool;
  }
  out.decision.pool_rows_after = level_counts(out.pool);
  return out;
}

AdaptationLog run_schedule(const DomainSnapshot& source,
                           const std::vector<DomainSnapshot>& targets,
                           const GatingPolicy& policy, const RngSpec& rng) {
  require_valid(policy);
  require_valid(source);
  if (targets.empty()) {
    throw ValidationError(errc::empty_input, "target sequence is empty");
  }

  DomainSnapshot pool = source;
  if (policy.pool_cap) {
    pool = cap_levels(std::move(pool), *policy.pool_cap,
                      rng.with_purpose("pool-subsample").child(0));
  }

  BankMap banks;
  if (policy.metric == Metric::swd || policy.metric == Metric::dss_proj) {
    banks = sample_banks(pool, policy.m, rng);
  }

  AdaptationLog log;
  log.policy = policy;
  log.decisions.reserve(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    StepOutcome outcome =
        step(pool, targets[i], policy, banks, rng, static_cast<std::uint64_t>(i + 1));
    pool = std::move(outcome.pool);
    log.total_cost += outcome.decision.step_cost;
    if (outcome.decision.action == GateAction::Adapt) {
      ++log.adapt_count;
    } else {
      ++log.skip_count;
    }
    log.decisions.push_back(std::move(outcome.decision));
  }
  return log;
}

std::vector<SweepRow> threshold_sweep(
    const DomainSnapshot& source, const std::vector<DomainSnapshot>& targets,
    const std::vector<double>& thresholds, const GatingPolicy& policy_template,
    const RngSpec& rng) {
  if (thresholds.empty()) {
    throw ValidationError(errc::empty_input, "threshold list is empty");
  }
  std::vector<SweepRow> rows;
  rows.reserve(thresholds.size());
  for (double threshold : thresholds) {
    GatingPolicy policy = policy_template;
    policy.threshold = threshold;
    const AdaptationLog log = run_schedule(source, targets, policy, rng);
    SweepRow row;
    row.threshold = threshold;
    row.adapt_count = log.adapt_count;
    row.total_cost = log.total_cost;
    row.step_gaps.reserve(log.decisions.size());
    for (const GateDecision& d : log.decisions) {
      row.step_gaps.push_back(d.gap_report.aggregate);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dge
