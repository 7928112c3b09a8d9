#include "dge/feature_set.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace dge {

std::optional<ValidationIssue> validate_snapshot(const DomainSnapshot& s) {
  if (s.levels.empty()) {
    return ValidationIssue{errc::empty_snapshot, 0,
                           "snapshot '" + s.domain_id + "' has no levels"};
  }
  for (const auto& [key, fs] : s.levels) {
    const std::string where =
        "snapshot '" + s.domain_id + "' level " + std::to_string(key);
    if (fs.count() == 0) {
      return ValidationIssue{errc::empty_level, key, where + " has 0 rows"};
    }
    if (fs.dim() == 0) {
      return ValidationIssue{errc::dim_mismatch, key,
                             where + " has 0 columns"};
    }
    if (fs.level != key) {
      return ValidationIssue{
          errc::level_mismatch, key,
          where + " holds a set labeled " + std::to_string(fs.level)};
    }
    if (!fs.data.allFinite()) {
      return ValidationIssue{errc::non_finite, key,
                             where + " contains a NaN or Inf entry"};
    }
  }
  return std::nullopt;
}

void require_valid(const DomainSnapshot& s) {
  if (auto issue = validate_snapshot(s)) {
    throw ValidationError(issue->code, issue->message);
  }
}

DomainSnapshot merge_snapshots(const DomainSnapshot& a,
                               const DomainSnapshot& b) {
  DomainSnapshot out;
  out.domain_id = a.domain_id + "+" + b.domain_id;
  out.levels = a.levels;
  for (const auto& [key, fs_b] : b.levels) {
    auto it = out.levels.find(key);
    if (it == out.levels.end()) {
      out.levels.emplace(key, fs_b);
      continue;
    }
    FeatureSet& fs_a = it->second;
    if (fs_a.dim() != fs_b.dim()) {
      throw ValidationError(
          errc::dim_mismatch,
          "level " + std::to_string(key) + ": cannot merge dim " +
              std::to_string(fs_a.dim()) + " with dim " +
              std::to_string(fs_b.dim()));
    }
    FeatureMatrix merged(fs_a.count() + fs_b.count(), fs_a.dim());
    merged.topRows(fs_a.count()) = fs_a.data;
    merged.bottomRows(fs_b.count()) = fs_b.data;
    fs_a.data = std::move(merged);
  }
  return out;
}

FeatureSet reservoir_subsample(const FeatureSet& s, Index cap,
                               const RngSpec& rng) {
  if (cap < 1) {
    throw ValidationError(errc::bad_argument, "subsample cap must be >= 1");
  }
  if (s.count() <= cap) return s;

  // Partial Fisher-Yates over row indices, then restore input order so
  // the result does not encode the draw sequence.
  std::vector<Index> idx(static_cast<std::size_t>(s.count()));
  std::iota(idx.begin(), idx.end(), Index{0});
  RngStream stream(rng);
  for (Index i = 0; i < cap; ++i) {
    const Index j =
        i + static_cast<Index>(stream.below(
                static_cast<std::uint64_t>(s.count() - i)));
    std::swap(idx[static_cast<std::size_t>(i)],
              idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(cap));
  std::sort(idx.begin(), idx.end());

  FeatureSet out;
  out.level = s.level;
  out.data.resize(cap, s.dim());
  for (Index i = 0; i < cap; ++i) {
    out.data.row(i) = s.data.row(idx[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace dge
