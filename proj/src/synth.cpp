#include "dge/synth.hpp"

#include <cmath>
#include <numbers>

namespace dge {

void require_valid(const DriftScenario& scenario) {
  if (scenario.levels.empty()) {
    throw ValidationError(errc::bad_argument, "scenario has no levels");
  }
  if (scenario.cycle_length < 2) {
    throw ValidationError(errc::bad_argument, "cycle_length must be >= 2");
  }
  if (scenario.samples_per_domain < 2) {
    throw ValidationError(errc::bad_argument,
                          "samples_per_domain must be >= 2");
  }
  if (scenario.amplitude < 0.0) {
    throw ValidationError(errc::bad_argument, "amplitude must be >= 0");
  }
  if (!(scenario.base_cov_scale > 0.0)) {
    throw ValidationError(errc::bad_argument, "base_cov_scale must be > 0");
  }
  for (const auto& [level, dim] : scenario.levels) {
    const Index min_dim = scenario.mode == DriftMode::mean_circle ? 2 : 1;
    if (dim < min_dim) {
      throw ValidationError(errc::bad_argument,
                            "level " + std::to_string(level) + " dim " +
                                std::to_string(dim) + " is below " +
                                std::to_string(min_dim));
    }
    const auto it = scenario.base_mean.find(level);
    if (it != scenario.base_mean.end() && it->second.size() != dim) {
      throw ValidationError(errc::dim_mismatch,
                            "base_mean for level " + std::to_string(level) +
                                " has wrong size");
    }
  }
}

Eigen::VectorXd true_mean(const DriftScenario& scenario, int level, int t) {
  Index dim = 0;
  for (const auto& [lv, d] : scenario.levels) {
    if (lv == level) dim = d;
  }
  if (dim == 0) {
    throw ValidationError(errc::bad_argument,
                          "level " + std::to_string(level) +
                              " not in scenario");
  }
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  const auto it = scenario.base_mean.find(level);
  if (it != scenario.base_mean.end()) mean = it->second;
  if (scenario.mode == DriftMode::mean_circle) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(t) /
                         static_cast<double>(scenario.cycle_length);
    mean(0) += scenario.amplitude * std::cos(angle);
    mean(1) += scenario.amplitude * std::sin(angle);
  }
  return mean;
}

double true_sigma(const DriftScenario& scenario, int t) {
  if (scenario.mode != DriftMode::variance_scale) {
    return scenario.base_cov_scale;
  }
  const double phase = std::numbers::pi * static_cast<double>(t) /
                       static_cast<double>(scenario.cycle_length);
  return scenario.base_cov_scale *
         (1.0 + scenario.amplitude * std::abs(std::sin(phase)));
}

DomainSnapshot gen_domain(const DriftScenario& scenario, int t) {
  require_valid(scenario);
  if (t < 0) {
    throw ValidationError(errc::bad_argument, "phase must be >= 0");
  }
  const int wrapped = t % scenario.cycle_length;

  DomainSnapshot snapshot;
  snapshot.domain_id = "phase-" + std::to_string(wrapped);
  snapshot.meta.emplace("phase", std::to_string(wrapped));

  for (const auto& [level, dim] : scenario.levels) {
    const Eigen::VectorXd mean = true_mean(scenario, level, wrapped);
    const double sigma = true_sigma(scenario, wrapped);

    RngStream stream(scenario.noise_seed.with_purpose("synth-noise")
                         .child(static_cast<std::uint64_t>(
                             static_cast<std::int64_t>(level)))
                         .child(static_cast<std::uint64_t>(wrapped)));
    FeatureSet fs;
    fs.level = level;
    fs.data.resize(scenario.samples_per_domain, dim);
    for (Index row = 0; row < scenario.samples_per_domain; ++row) {
      for (Index col = 0; col < dim; ++col) {
        fs.data(row, col) =
            static_cast<float>(mean(col) + sigma * stream.gaussian());
      }
    }
    snapshot.levels.emplace(level, std::move(fs));
  }
  return snapshot;
}

std::vector<DomainSnapshot> gen_schedule(const DriftScenario& scenario,
                                         const std::vector<int>& phases) {
  if (phases.empty()) {
    throw ValidationError(errc::empty_input, "phase list is empty");
  }
  std::vector<DomainSnapshot> out;
  out.reserve(phases.size());
  for (int t : phases) out.push_back(gen_domain(scenario, t));
  return out;
}

}  // namespace dge
