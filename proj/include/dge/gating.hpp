#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dge/metrics.hpp"

namespace dge {

// Knobs of the adaptation gate. Cost is charged in abstract units: one
// adaptation costs adapt_cost_units, every gap evaluation eval_cost_units.
struct GatingPolicy {
  Metric metric = Metric::mmd;
  double threshold = 0.02;
  Index m = 10;                        // projections per level
  std::optional<Index> pool_cap;       // per-level row cap, unlimited if unset
  double adapt_cost_units = 1.0;
  double eval_cost_units = 0.0;
  bool frozen_pool = false;  // measure every gap against the original source
};

void require_valid(const GatingPolicy& policy);

enum class GateAction { Adapt, Skip };

const char* action_name(GateAction a) noexcept;

// Outcome of one scheduler step.
struct GateDecision {
  std::string domain_id;  // the incoming domain
  GapReport gap_report;
  GateAction action = GateAction::Skip;
  std::map<int, Index> pool_rows_before;
  std::map<int, Index> pool_rows_after;
  double step_cost = 0.0;
};

// Full trace of a gated run over a target sequence.
struct AdaptationLog {
  GatingPolicy policy;
  std::vector<GateDecision> decisions;
  double total_cost = 0.0;
  int adapt_count = 0;
  int skip_count = 0;
};

// Threshold rule: Skip iff the aggregate gap is strictly below the
// threshold; a tie adapts.
GateAction decide(const GapReport& gap, const GatingPolicy& policy);

struct StepOutcome {
  GateDecision decision;
  DomainSnapshot pool;
};

// One scheduler step: gap against the pool, gate, and on Adapt merge the
// incoming domain into the pool (then subsample each level back down to
// pool_cap). step_index seeds the subsample draw so runs are replayable.
StepOutcome step(const DomainSnapshot& pool, const DomainSnapshot& incoming,
                 const GatingPolicy& policy, const BankMap& banks,
                 const RngSpec& rng, std::uint64_t step_index);

// Folds step over the target sequence starting from pool = source (capped
// to pool_cap). Projection banks are sampled once and reused across steps
// so gap values stay comparable.
AdaptationLog run_schedule(const DomainSnapshot& source,
                           const std::vector<DomainSnapshot>& targets,
                           const GatingPolicy& policy, const RngSpec& rng);

struct SweepRow {
  double threshold = 0.0;
  int adapt_count = 0;
  double total_cost = 0.0;
  std::vector<double> step_gaps;
};

// run_schedule once per threshold, identical rng throughout, so all rows
// share the same banks and differ only in the gate.
std::vector<SweepRow> threshold_sweep(const DomainSnapshot& source,
                                      const std::vector<DomainSnapshot>& targets,
                                      const std::vector<double>& thresholds,
                                      const GatingPolicy& policy_template,
                                      const RngSpec& rng);

}  // namespace dge
