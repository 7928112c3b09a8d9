#pragma once

#include <Eigen/Core>

#include "dge/feature_set.hpp"
#include "dge/rng.hpp"

namespace dge {

// M unit-norm directions for one level. Each row's stream derives from
// (seed, level, m), so regenerating the bank, in any order and on any
// thread, reproduces it bit-identically.
struct ProjectionBank {
  int level = 0;
  Eigen::MatrixXd directions;  // M x dim, rows unit norm
  RngSpec seed_provenance;

  Index count() const { return directions.rows(); }
  Index dim() const { return directions.cols(); }
};

// 1-D images of a feature set under a bank: row m holds the projections
// of all samples under direction m.
struct ProjectedSet {
  int level = 0;
  Eigen::MatrixXd values;  // M x count

  Index count() const { return values.cols(); }
};

// Draws M directions uniformly on the unit sphere (normalized standard
// gaussians). A raw draw with norm below 1e-12 is redrawn; 100
// consecutive failures raise degenerate_draw.
ProjectionBank sample_projection_bank(int level, Index dim, Index m,
                                      const RngSpec& rng);

// values(m, i) = <directions.row(m), f.data.row(i)>, accumulated in
// 64-bit.
ProjectedSet project_features(const FeatureSet& f, const ProjectionBank& bank);

}  // namespace dge
