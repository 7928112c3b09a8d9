#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "dge/analysis.hpp"
#include "dge/gating.hpp"

namespace dge {

// FSET: "FSET" magic, u16 version, i32 level, u64 count, u64 dim, then
// count*dim little-endian 32-bit floats, row-major. No padding anywhere.
inline constexpr std::uint16_t kFsetVersion = 1;

void write_fset(const FeatureSet& f, const std::filesystem::path& path);
FeatureSet read_fset(const std::filesystem::path& path);

// Comma-delimited numeric rows; a header line is detected by a non-numeric
// first field and skipped.
FeatureSet read_csv_features(const std::filesystem::path& path, int level);

// A snapshot on disk is a directory holding one FSET file per level plus
// manifest.txt with `domain_id=<s>` and `level.<k>=<relative path>` lines.
void write_snapshot(const DomainSnapshot& s,
                    const std::filesystem::path& dir);
DomainSnapshot read_snapshot(const std::filesystem::path& dir);

// Delimited records keyed by domain id. Headers are mandatory.
std::vector<APRecord> read_ap_csv(const std::filesystem::path& path);
std::vector<std::pair<std::string, double>> read_gap_csv(
    const std::filesystem::path& path);

// Plain `key=value` lines, `#` starts a comment, duplicate keys rejected.
std::map<std::string, std::string> read_config(
    const std::filesystem::path& path);

// JSON primitives shared by every report writer. Reals carry 17
// significant digits and always keep a decimal point or exponent, so
// serialization round-trips and diffs are byte-stable.
std::string json_real(double v);
std::string json_escape(const std::string& s);

std::string to_json(const GapReport& report);
std::string to_json(const AdaptationLog& log);
std::string sweep_to_json(Metric metric, const std::vector<SweepRow>& rows);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

void write_text_file(const std::string& text,
                     const std::filesystem::path& path);

void write_report(const GapReport& report, const std::filesystem::path& path);
void write_report(const AdaptationLog& log, const std::filesystem::path& path);

}  // namespace dge
