#include <CLI11.hpp>

#include <iostream>
#include <set>

#include "dge/io.hpp"
#include "dge/synth.hpp"

namespace {

using dge::errc;
using dge::ValidationError;

// Shared knobs; any of them may come from a `key=value` config file, with
// command-line flags taking precedence.
struct RunOpts {
  std::string metric = "mmd";
  double threshold = 0.02;
  long long m = 10;
  unsigned long long seed = 0;
  long long pool_cap = 0;
  bool pool_cap_set = false;
  double adapt_cost = 1.0;
  double eval_cost = 0.0;
  bool frozen_pool = false;
  double epsilon = 1e-10;
  std::string kl_direction = "ap_gap";
  std::string config_path;
};

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used == value.size()) return parsed;
  } catch (const std::exception&) {
  }
  throw ValidationError(errc::bad_config,
                        "config key '" + key + "': '" + value +
                            "' is not a number");
}

long long to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long parsed = std::stoll(value, &used);
    if (used == value.size()) return parsed;
  } catch (const std::exception&) {
  }
  throw ValidationError(errc::bad_config,
                        "config key '" + key + "': '" + value +
                            "' is not an integer");
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ValidationError(errc::bad_config,
                        "config key '" + key + "': '" + value +
                            "' is not a boolean");
}

void apply_config(CLI::App* sub, RunOpts& o) {
  if (o.config_path.empty()) return;
  static const std::set<std::string> known = {
      "metric",     "threshold",        "m",
      "seed",       "pool_cap",         "adapt_cost_units",
      "eval_cost_units", "frozen_pool", "epsilon",
      "kl_direction"};
  const auto cfg = dge::read_config(o.config_path);
  for (const auto& [key, value] : cfg) {
    if (known.count(key) == 0) {
      throw ValidationError(errc::bad_config,
                            "unknown config key '" + key + "'");
    }
  }
  const auto flag_unset = [&](const std::string& name) {
    return sub->count(name) == 0;
  };
  const auto get = [&](const char* key) -> const std::string* {
    const auto it = cfg.find(key);
    return it == cfg.end() ? nullptr : &it->second;
  };
  if (const auto* v = get("metric"); v && flag_unset("--metric")) o.metric = *v;
  if (const auto* v = get("threshold"); v && flag_unset("--threshold")) {
    o.threshold = to_double("threshold", *v);
  }
  if (const auto* v = get("m"); v && flag_unset("--m")) o.m = to_int("m", *v);
  if (const auto* v = get("seed"); v && flag_unset("--seed")) {
    o.seed = static_cast<unsigned long long>(to_int("seed", *v));
  }
  if (const auto* v = get("pool_cap"); v && flag_unset("--pool-cap")) {
    o.pool_cap = to_int("pool_cap", *v);
    o.pool_cap_set = true;
  }
  if (const auto* v = get("adapt_cost_units"); v && flag_unset("--adapt-cost")) {
    o.adapt_cost = to_double("adapt_cost_units", *v);
  }
  if (const auto* v = get("eval_cost_units"); v && flag_unset("--eval-cost")) {
    o.eval_cost = to_double("eval_cost_units", *v);
  }
  if (const auto* v = get("frozen_pool"); v && flag_unset("--frozen-pool")) {
    o.frozen_pool = to_bool("frozen_pool", *v);
  }
  if (const auto* v = get("epsilon"); v && flag_unset("--epsilon")) {
    o.epsilon = to_double("epsilon", *v);
  }
  if (const auto* v = get("kl_direction"); v && flag_unset("--kl-direction")) {
    o.kl_direction = *v;
  }
}

dge::Metric resolve_metric(const std::string& name) {
  const auto metric = dge::parse_metric(name);
  if (!metric) {
    throw ValidationError(errc::bad_argument,
                          "unknown metric '" + name +
                              "' (use mmd, swd, dss, or dss_full)");
  }
  return *metric;
}

dge::GatingPolicy make_policy(const RunOpts& o) {
  dge::GatingPolicy policy;
  policy.metric = resolve_metric(o.metric);
  policy.threshold = o.threshold;
  policy.m = o.m;
  if (o.pool_cap_set) policy.pool_cap = o.pool_cap;
  policy.adapt_cost_units = o.adapt_cost;
  policy.eval_cost_units = o.eval_cost;
  policy.frozen_pool = o.frozen_pool;
  require_valid(policy);
  return policy;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    dge::write_text_file(text, out_path);
  }
}

std::vector<double> parse_threshold_list(const std::string& csv) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = csv.find(',', start);
    const std::string field =
        csv.substr(start, comma == std::string::npos ? csv.size() - start
                                                     : comma - start);
    values.push_back(to_double("thresholds", field));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

int run_gap(CLI::App* sub, RunOpts& o, const std::string& source_dir,
            const std::string& target_dir, const std::string& out_path) {
  apply_config(sub, o);
  const dge::Metric metric = resolve_metric(o.metric);
  if (o.m < 1) {
    throw ValidationError(errc::bad_argument, "m must be >= 1");
  }
  const dge::DomainSnapshot source = dge::read_snapshot(source_dir);
  const dge::DomainSnapshot target = dge::read_snapshot(target_dir);
  dge::BankMap banks;
  const dge::BankMap* banks_ptr = nullptr;
  if (metric == dge::Metric::swd || metric == dge::Metric::dss_proj) {
    require_valid(source);
    banks = dge::sample_banks(source, o.m, dge::RngSpec{o.seed});
    banks_ptr = &banks;
  }
  const dge::GapReport report =
      dge::compute_gap(source, target, metric, banks_ptr);
  emit(dge::to_json(report), out_path);
  return 0;
}

int run_simulate(CLI::App* sub, RunOpts& o, const std::string& source_dir,
                 const std::vector<std::string>& target_dirs,
                 const std::string& out_path) {
  apply_config(sub, o);
  const dge::GatingPolicy policy = make_policy(o);
  const dge::DomainSnapshot source = dge::read_snapshot(source_dir);
  std::vector<dge::DomainSnapshot> targets;
  targets.reserve(target_dirs.size());
  for (const std::string& dir : target_dirs) {
    targets.push_back(dge::read_snapshot(dir));
  }
  const dge::AdaptationLog log =
      dge::run_schedule(source, targets, policy, dge::RngSpec{o.seed});
  for (std::size_t i = 0; i < log.decisions.size(); ++i) {
    const dge::GateDecision& d = log.decisions[i];
    std::cout << "step=" << i + 1 << " domain=" << d.domain_id
              << " gap=" << dge::json_real(d.gap_report.aggregate)
              << " action=" << dge::action_name(d.action)
              << " cost=" << dge::json_real(d.step_cost) << "\n";
  }
  if (!out_path.empty()) dge::write_report(log, out_path);
  return 0;
}

int run_sweep(CLI::App* sub, RunOpts& o, const std::string& source_dir,
              const std::vector<std::string>& target_dirs,
              const std::string& thresholds_csv, const std::string& out_path,
              std::string csv_path) {
  apply_config(sub, o);
  const dge::GatingPolicy policy = make_policy(o);
  const std::vector<double> thresholds = parse_threshold_list(thresholds_csv);
  const dge::DomainSnapshot source = dge::read_snapshot(source_dir);
  std::vector<dge::DomainSnapshot> targets;
  targets.reserve(target_dirs.size());
  for (const std::string& dir : target_dirs) {
    targets.push_back(dge::read_snapshot(dir));
  }
  const std::vector<dge::SweepRow> rows = dge::threshold_sweep(
      source, targets, thresholds, policy, dge::RngSpec{o.seed});
  emit(dge::sweep_to_json(policy.metric, rows), out_path);
  if (csv_path.empty() && !out_path.empty()) {
    csv_path =
        std::filesystem::path(out_path).replace_extension(".csv").string();
  }
  if (!csv_path.empty()) {
    dge::write_text_file(dge::sweep_to_csv(rows), csv_path);
  }
  return 0;
}

dge::DriftScenario scenario_from_config(
    const std::map<std::string, std::string>& cfg, std::vector<int>& phases) {
  static const std::set<std::string> known = {
      "levels", "samples_per_domain", "cycle_length", "amplitude",
      "base_cov_scale", "mode", "seed", "phases"};
  dge::DriftScenario scenario;
  for (const auto& [key, value] : cfg) {
    if (known.count(key) == 0 && key.rfind("base_mean.", 0) != 0) {
      throw ValidationError(errc::bad_config,
                            "unknown config key '" + key + "'");
    }
  }
  const auto it_levels = cfg.find("levels");
  if (it_levels == cfg.end()) {
    throw ValidationError(errc::bad_config,
                          "config needs levels=<level>:<dim>[,...]");
  }
  std::size_t start = 0;
  const std::string& spec = it_levels->second;
  while (start <= spec.size()) {
    const std::size_t comma = spec.find(',', start);
    const std::string pair =
        spec.substr(start, comma == std::string::npos ? spec.size() - start
                                                      : comma - start);
    const std::size_t colon = pair.find(':');
    if (colon == std::string::npos) {
      throw ValidationError(errc::bad_config,
                            "levels entry '" + pair + "' is not level:dim");
    }
    scenario.levels.emplace_back(
        static_cast<int>(to_int("levels", pair.substr(0, colon))),
        static_cast<dge::Index>(to_int("levels", pair.substr(colon + 1))));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (const auto it = cfg.find("samples_per_domain"); it != cfg.end()) {
    scenario.samples_per_domain =
        static_cast<dge::Index>(to_int("samples_per_domain", it->second));
  }
  if (const auto it = cfg.find("cycle_length"); it != cfg.end()) {
    scenario.cycle_length =
        static_cast<int>(to_int("cycle_length", it->second));
  }
  if (const auto it = cfg.find("amplitude"); it != cfg.end()) {
    scenario.amplitude = to_double("amplitude", it->second);
  }
  if (const auto it = cfg.find("base_cov_scale"); it != cfg.end()) {
    scenario.base_cov_scale = to_double("base_cov_scale", it->second);
  }
  if (const auto it = cfg.find("mode"); it != cfg.end()) {
    if (it->second == "mean_circle") {
      scenario.mode = dge::DriftMode::mean_circle;
    } else if (it->second == "variance_scale") {
      scenario.mode = dge::DriftMode::variance_scale;
    } else {
      throw ValidationError(errc::bad_config,
                            "mode must be mean_circle or variance_scale");
    }
  }
  if (const auto it = cfg.find("seed"); it != cfg.end()) {
    scenario.noise_seed.master_seed =
        static_cast<std::uint64_t>(to_int("seed", it->second));
  }
  for (const auto& [key, value] : cfg) {
    if (key.rfind("base_mean.", 0) != 0) continue;
    const int level = static_cast<int>(to_int(key, key.substr(10)));
    std::vector<double> entries;
    std::size_t pos = 0;
    while (pos <= value.size()) {
      const std::size_t comma = value.find(',', pos);
      entries.push_back(to_double(
          key, value.substr(pos, comma == std::string::npos ? value.size() - pos
                                                            : comma - pos)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    Eigen::VectorXd mean(static_cast<dge::Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) {
      mean(static_cast<dge::Index>(i)) = entries[i];
    }
    scenario.base_mean.emplace(level, std::move(mean));
  }
  phases.clear();
  if (const auto it = cfg.find("phases"); it != cfg.end()) {
    std::size_t pos = 0;
    const std::string& list = it->second;
    while (pos <= list.size()) {
      const std::size_t comma = list.find(',', pos);
      phases.push_back(static_cast<int>(to_int(
          "phases", list.substr(pos, comma == std::string::npos
                                         ? list.size() - pos
                                         : comma - pos))));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  } else {
    for (int t = 0; t < scenario.cycle_length; ++t) phases.push_back(t);
  }
  return scenario;
}

int run_synth(const std::string& config_path, const std::string& out_dir) {
  const auto cfg = dge::read_config(config_path);
  std::vector<int> phases;
  const dge::DriftScenario scenario = scenario_from_config(cfg, phases);
  const std::vector<dge::DomainSnapshot> snapshots =
      dge::gen_schedule(scenario, phases);
  for (const dge::DomainSnapshot& snapshot : snapshots) {
    const std::filesystem::path dir =
        std::filesystem::path(out_dir) / snapshot.domain_id;
    dge::write_snapshot(snapshot, dir);
    std::cout << dir.string() << "\n";
  }
  return 0;
}

int run_correlate(CLI::App* sub, RunOpts& o, const std::string& gaps_path,
                  const std::string& aps_path, const std::string& source_id,
                  const std::string& out_path) {
  apply_config(sub, o);
  if (o.kl_direction != "ap_gap" && o.kl_direction != "gap_ap") {
    throw ValidationError(errc::bad_argument,
                          "kl direction must be ap_gap or gap_ap");
  }
  const auto gaps = dge::read_gap_csv(gaps_path);
  const auto aps = dge::read_ap_csv(aps_path);

  const dge::APRecord* source = nullptr;
  for (const dge::APRecord& r : aps) {
    if (r.domain_id == source_id) source = &r;
  }
  if (source == nullptr) {
    throw ValidationError(errc::bad_argument,
                          "AP file lacks the source id '" + source_id + "'");
  }
  if (aps.size() != gaps.size() + 1) {
    throw ValidationError(
        errc::bad_argument,
        "AP file must list the source plus exactly the gap file's domains");
  }

  dge::ProfilePair profile;
  for (const auto& [id, gap] : gaps) {
    if (id == source_id) {
      throw ValidationError(errc::bad_argument,
                            "gap file contains the source id '" + id + "'");
    }
    const dge::APRecord* target = nullptr;
    for (const dge::APRecord& r : aps) {
      if (r.domain_id == id) target = &r;
    }
    if (target == nullptr) {
      throw ValidationError(errc::bad_argument,
                            "AP file lacks domain '" + id + "'");
    }
    profile.domain_ids.push_back(id);
    profile.gap_values.push_back(gap);
    profile.ap_discrepancies.push_back(dge::ap_discrepancy(*source, *target));
  }
  require_valid(profile);
  const auto n = static_cast<Eigen::Index>(profile.domain_ids.size());
  if (n < 3) {
    throw ValidationError(errc::bad_argument,
                          "need at least 3 target domains");
  }

  Eigen::VectorXd gap_values(n);
  Eigen::VectorXd ap_values(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gap_values(i) = profile.gap_values[static_cast<std::size_t>(i)];
    ap_values(i) = profile.ap_discrepancies[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd gap_profile =
      dge::normalize_profile(gap_values, o.epsilon);
  const Eigen::VectorXd ap_profile =
      dge::normalize_profile(ap_values, o.epsilon);
  const double kl = o.kl_direction == "ap_gap"
                        ? dge::kl_divergence(ap_profile, gap_profile)
                        : dge::kl_divergence(gap_profile, ap_profile);
  const double rho = dge::spearman_correlation(gap_values, ap_values);

  std::string out = "{\n";
  out += "  \"kl\": " + dge::json_real(kl) + ",\n";
  out += "  \"kl_direction\": \"" + o.kl_direction + "\",\n";
  out += "  \"spearman\": " + dge::json_real(rho) + ",\n";
  out += "  \"domain_ids\": [";
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i != 0) out += ", ";
    out += "\"" +
           dge::json_escape(profile.domain_ids[static_cast<std::size_t>(i)]) +
           "\"";
  }
  out += "],\n";
  out += "  \"gap_profile\": [";
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i != 0) out += ", ";
    out += dge::json_real(gap_profile(i));
  }
  out += "],\n";
  out += "  \"ap_profile\": [";
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i != 0) out += ", ";
    out += dge::json_real(ap_profile(i));
  }
  out += "]\n";
  out += "}\n";
  emit(out, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"domain-gap evaluation and adaptation gating toolkit"};
  app.require_subcommand(1);

  RunOpts opts;
  std::string source_dir;
  std::string target_dir;
  std::vector<std::string> target_dirs;
  std::string out_path;
  std::string csv_path;
  std::string thresholds_csv;
  std::string gaps_path;
  std::string aps_path;
  std::string source_id = "source";
  std::string synth_out;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--metric", opts.metric, "mmd, swd, dss, or dss_full");
    sub->add_option("--m", opts.m, "projections per level");
    sub->add_option("--seed", opts.seed, "master seed");
    sub->add_option("--config", opts.config_path, "key=value config file");
  };
  const auto add_policy = [&](CLI::App* sub) {
    sub->add_option("--threshold", opts.threshold, "adaptation threshold");
    sub->add_option("--pool-cap", opts.pool_cap, "per-level pool row cap");
    sub->add_option("--adapt-cost", opts.adapt_cost, "cost of one adaptation");
    sub->add_option("--eval-cost", opts.eval_cost, "cost of one evaluation");
    sub->add_flag("--frozen-pool", opts.frozen_pool,
                  "always measure against the original source");
  };

  CLI::App* gap_cmd = app.add_subcommand("gap", "gap between two snapshots");
  gap_cmd->add_option("--source", source_dir, "source snapshot dir")
      ->required();
  gap_cmd->add_option("--target", target_dir, "target snapshot dir")
      ->required();
  gap_cmd->add_option("--out", out_path, "report path (stdout if omitted)");
  add_common(gap_cmd);

  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "gated adaptation over a schedule");
  sim_cmd->add_option("--source", source_dir, "source snapshot dir")
      ->required();
  sim_cmd->add_option("--targets", target_dirs, "ordered target dirs")
      ->required();
  sim_cmd->add_option("--out", out_path, "adaptation log path");
  add_common(sim_cmd);
  add_policy(sim_cmd);

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "rerun the schedule per threshold");
  sweep_cmd->add_option("--source", source_dir, "source snapshot dir")
      ->required();
  sweep_cmd->add_option("--targets", target_dirs, "ordered target dirs")
      ->required();
  sweep_cmd->add_option("--thresholds", thresholds_csv, "comma-separated list")
      ->required();
  sweep_cmd->add_option("--out", out_path, "JSON table path");
  sweep_cmd->add_option("--csv", csv_path,
                        "delimited table path (defaults to --out with .csv)");
  add_common(sweep_cmd);
  add_policy(sweep_cmd);

  CLI::App* synth_cmd =
      app.add_subcommand("synth", "generate drifting snapshots");
  synth_cmd->add_option("--config", opts.config_path, "scenario config file")
      ->required();
  synth_cmd->add_option("--out", synth_out, "output directory")->required();

  CLI::App* corr_cmd = app.add_subcommand(
      "correlate", "gap series vs AP discrepancy profile");
  corr_cmd->add_option("--gaps", gaps_path, "CSV: domain_id,gap")->required();
  corr_cmd->add_option("--aps", aps_path, "CSV: domain_id,ap")->required();
  corr_cmd->add_option("--source-id", source_id, "source row in the AP file");
  corr_cmd->add_option("--out", out_path, "result path (stdout if omitted)");
  corr_cmd->add_option("--epsilon", opts.epsilon, "profile smoothing");
  corr_cmd->add_option("--kl-direction", opts.kl_direction,
                       "ap_gap or gap_ap");
  corr_cmd->add_option("--config", opts.config_path, "key=value config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    opts.pool_cap_set =
        (sim_cmd->parsed() && sim_cmd->count("--pool-cap") > 0) ||
        (sweep_cmd->parsed() && sweep_cmd->count("--pool-cap") > 0);
    if (gap_cmd->parsed()) {
      return run_gap(gap_cmd, opts, source_dir, target_dir, out_path);
    }
    if (sim_cmd->parsed()) {
      return run_simulate(sim_cmd, opts, source_dir, target_dirs, out_path);
    }
    if (sweep_cmd->parsed()) {
      return run_sweep(sweep_cmd, opts, source_dir, target_dirs,
                       thresholds_csv, out_path, csv_path);
    }
    if (synth_cmd->parsed()) {
      return run_synth(opts.config_path, synth_out);
    }
    if (corr_cmd->parsed()) {
      return run_correlate(corr_cmd, opts, gaps_path, aps_path, source_id,
                           out_path);
    }
  } catch (const dge::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
