#include "dge/projection.hpp"

#include <cmath>
#include <string>

namespace dge {

namespace {

constexpr int kMaxRedraws = 100;
constexpr double kMinRawNorm = 1e-12;

Eigen::VectorXd draw_unit_direction(RngStream& stream, Index dim) {
  Eigen::VectorXd v(dim);
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    for (Index j = 0; j < dim; ++j) v(j) = stream.gaussian();
    const double norm = v.norm();
    if (norm >= kMinRawNorm) return v / norm;
  }
  throw ValidationError(errc::degenerate_draw,
                        "100 consecutive near-zero gaussian draws");
}

}  // namespace

ProjectionBank sample_projection_bank(int level, Index dim, Index m,
                                      const RngSpec& rng) {
  if (dim < 1) {
    throw ValidationError(errc::bad_argument, "projection dim must be >= 1");
  }
  if (m < 1) {
    throw ValidationError(errc::bad_argument,
                          "projection count must be >= 1");
  }
  ProjectionBank bank;
  bank.level = level;
  bank.seed_provenance = rng;
  bank.directions.resize(m, dim);
  const RngSpec base = rng.with_purpose("projection-bank")
                           .child(static_cast<std::uint64_t>(
                               static_cast<std::int64_t>(level)));
  for (Index row = 0; row < m; ++row) {
    RngStream stream(base.child(static_cast<std::uint64_t>(row)));
    bank.directions.row(row) = draw_unit_direction(stream, dim).transpose();
  }
  return bank;
}

ProjectedSet project_features(const FeatureSet& f,
                              const ProjectionBank& bank) {
  if (f.level != bank.level) {
    throw ValidationError(errc::level_mismatch,
                          "feature level " + std::to_string(f.level) +
                              " vs bank level " + std::to_string(bank.level));
  }
  if (f.dim() != bank.dim()) {
    throw ValidationError(errc::dim_mismatch,
                          "feature dim " + std::to_string(f.dim()) +
                              " vs bank dim " + std::to_string(bank.dim()));
  }
  ProjectedSet out;
  out.level = f.level;
  out.values.noalias() = bank.directions * f.data.cast<double>().transpose();
  return out;
}

}  // namespace dge
