#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>

#include "dge/error.hpp"
#include "dge/rng.hpp"

namespace dge {

using Index = Eigen::Index;

// Features are stored at 32-bit precision (the precision activations are
// typically exported at); every reduction downstream accumulates in
// 64-bit. Row-major so a row is one sample's vector, contiguous on disk.
using FeatureMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// All vectorised activations of one backbone level for one domain.
struct FeatureSet {
  int level = 0;
  FeatureMatrix data;  // count x dim

  Index count() const { return data.rows(); }
  Index dim() const { return data.cols(); }
};

// A domain's feature sets across backbone levels. Level labels are
// arbitrary integers; counts may differ between levels.
struct DomainSnapshot {
  std::string domain_id;
  std::map<int, FeatureSet> levels;
  std::map<std::string, std::string> meta;
};

struct ValidationIssue {
  errc code;
  int level;  // offending level label; 0 when no level applies
  std::string message;
};

// Checks every FeatureSet invariant (nonempty, rectangular, finite) plus
// the level-key consistency of the snapshot. Returns the first violation
// found, scanning levels in ascending label order.
std::optional<ValidationIssue> validate_snapshot(const DomainSnapshot& s);

// Throws ValidationError on the first violated invariant.
void require_valid(const DomainSnapshot& s);

// Per-level row concatenation, a's rows first. Levels present in only one
// input pass through unchanged. The result's id is "<a>+<b>".
DomainSnapshot merge_snapshots(const DomainSnapshot& a,
                               const DomainSnapshot& b);

// Seeded uniform sampling without replacement down to `cap` rows; a set
// already within the cap is returned bit-identically. Kept rows preserve
// their input order.
FeatureSet reservoir_subsample(const FeatureSet& s, Index cap,
                               const RngSpec& rng);

}  // namespace dge
