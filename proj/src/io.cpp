#include "dge/io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dge {

namespace {

void append_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void append_u32(std::string& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<char>((v >> shift) & 0xff));
  }
}

void append_u64(std::string& out, std::uint64_t v) {
  for (int shift = 0; shift < 64; shift += 8) {
    out.push_back(static_cast<char>((v >> shift) & 0xff));
  }
}

std::uint16_t load_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t load_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint64_t load_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::string read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(errc::io_failure, "cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw IoError(errc::io_failure, "read failed on '" + path.string() + "'");
  }
  return std::move(buf).str();
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

bool parse_double(const std::string& field, double& out) {
  const std::string t = trim(field);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError(errc::io_failure, "cannot open '" + path.string() + "'");
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(strip_cr(line));
  if (in.bad()) {
    throw IoError(errc::io_failure, "read failed on '" + path.string() + "'");
  }
  return lines;
}

// Two-column CSV with a fixed header, e.g. "domain_id,ap".
std::vector<std::pair<std::string, double>> read_keyed_csv(
    const std::filesystem::path& path, const std::string& value_name) {
  const std::vector<std::string> lines = read_lines(path);
  const std::string expected_header = "domain_id," + value_name;
  std::size_t i = 0;
  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i == lines.size() || trim(lines[i]) != expected_header) {
    throw ValidationError(errc::bad_config,
                          "'" + path.string() + "' must start with header '" +
                              expected_header + "'");
  }
  std::vector<std::pair<std::string, double>> records;
  for (++i; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const std::vector<std::string> fields = split_csv(lines[i]);
    if (fields.size() != 2) {
      throw ValidationError(errc::ragged_rows,
                            "'" + path.string() + "' line " +
                                std::to_string(i + 1) + ": expected 2 fields");
    }
    double value = 0.0;
    if (!parse_double(fields[1], value)) {
      throw ValidationError(errc::non_numeric,
                            "'" + path.string() + "' line " +
                                std::to_string(i + 1) + ": bad " + value_name +
                                " value '" + trim(fields[1]) + "'");
    }
    const std::string id = trim(fields[0]);
    for (const auto& [seen, unused] : records) {
      if (seen == id) {
        throw ValidationError(errc::bad_config,
                              "'" + path.string() + "': duplicate domain id '" +
                                  id + "'");
      }
    }
    records.emplace_back(id, value);
  }
  return records;
}

}  // namespace

void write_fset(const FeatureSet& f, const std::filesystem::path& path) {
  std::string out;
  out.reserve(26 + static_cast<std::size_t>(f.data.size()) * 4);
  out += "FSET";
  append_u16(out, kFsetVersion);
  append_u32(out, static_cast<std::uint32_t>(f.level));
  append_u64(out, static_cast<std::uint64_t>(f.count()));
  append_u64(out, static_cast<std::uint64_t>(f.dim()));
  for (Index row = 0; row < f.count(); ++row) {
    for (Index col = 0; col < f.dim(); ++col) {
      append_u32(out, std::bit_cast<std::uint32_t>(f.data(row, col)));
    }
  }
  std::ofstream sink(path, std::ios::binary | std::ios::trunc);
  if (!sink) {
    throw IoError(errc::io_failure, "cannot open '" + path.string() + "'");
  }
  sink.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!sink) {
    throw IoError(errc::io_failure, "write failed on '" + path.string() + "'");
  }
}

FeatureSet read_fset(const std::filesystem::path& path) {
  const std::string raw = read_binary_file(path);
  const auto* bytes = reinterpret_cast<const unsigned char*>(raw.data());
  constexpr std::size_t header_size = 4 + 2 + 4 + 8 + 8;
  if (raw.size() < 4) {
    throw ValidationError(errc::truncated,
                          "'" + path.string() + "' is shorter than the magic");
  }
  if (raw.compare(0, 4, "FSET") != 0) {
    throw ValidationError(errc::bad_magic,
                          "'" + path.string() + "' starts with '" +
                              raw.substr(0, 4) + "'");
  }
  if (raw.size() < header_size) {
    throw ValidationError(errc::truncated,
                          "'" + path.string() + "' ends inside the header");
  }
  const std::uint16_t version = load_u16(bytes + 4);
  if (version != kFsetVersion) {
    throw ValidationError(errc::unsupported_version,
                          "'" + path.string() + "' has version " +
                              std::to_string(version));
  }
  const auto level = static_cast<std::int32_t>(load_u32(bytes + 6));
  const std::uint64_t count = load_u64(bytes + 10);
  const std::uint64_t dim = load_u64(bytes + 18);
  constexpr std::uint64_t cell_limit = std::uint64_t{1} << 31;
  if (count > cell_limit || dim > cell_limit ||
      (dim != 0 && count > cell_limit / dim)) {
    throw ValidationError(errc::too_large,
                          "'" + path.string() + "' header promises " +
                              std::to_string(count) + "x" +
                              std::to_string(dim));
  }
  const std::uint64_t payload = count * dim * 4;
  const std::uint64_t have = raw.size() - header_size;
  if (have < payload) {
    throw ValidationError(errc::truncated,
                          "'" + path.string() + "' payload has " +
                              std::to_string(have) + " bytes, header promises " +
                              std::to_string(payload));
  }
  if (have > payload) {
    throw ValidationError(errc::trailing_bytes,
                          "'" + path.string() + "' has " +
                              std::to_string(have - payload) +
                              " bytes past the payload");
  }
  FeatureSet f;
  f.level = level;
  f.data.resize(static_cast<Index>(count), static_cast<Index>(dim));
  const unsigned char* p = bytes + header_size;
  for (Index row = 0; row < f.count(); ++row) {
    for (Index col = 0; col < f.dim(); ++col, p += 4) {
      f.data(row, col) = std::bit_cast<float>(load_u32(p));
    }
  }
  return f;
}

FeatureSet read_csv_features(const std::filesystem::path& path, int level) {
  const std::vector<std::string> lines = read_lines(path);
  std::vector<std::vector<double>> rows;
  Index dim = 0;
  bool saw_content = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const std::vector<std::string> fields = split_csv(lines[i]);
    double probe = 0.0;
    if (!saw_content && !parse_double(fields[0], probe)) {
      saw_content = true;  // header line
      continue;
    }
    saw_content = true;
    std::vector<double> row;
    row.reserve(fields.size());
    for (const std::string& field : fields) {
      double value = 0.0;
      if (!parse_double(field, value)) {
        throw ValidationError(errc::non_numeric,
                              "'" + path.string() + "' line " +
                                  std::to_string(i + 1) + ": '" + trim(field) +
                                  "' is not a number");
      }
      row.push_back(value);
    }
    if (rows.empty()) {
      dim = static_cast<Index>(row.size());
    } else if (static_cast<Index>(row.size()) != dim) {
      throw ValidationError(errc::ragged_rows,
                            "'" + path.string() + "' line " +
                                std::to_string(i + 1) + " has " +
                                std::to_string(row.size()) +
                                " fields, expected " + std::to_string(dim));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ValidationError(errc::empty_input,
                          "'" + path.string() + "' has no data rows");
  }
  FeatureSet f;
  f.level = level;
  f.data.resize(static_cast<Index>(rows.size()), dim);
  for (Index r = 0; r < f.count(); ++r) {
    for (Index c = 0; c < dim; ++c) {
      f.data(r, c) = static_cast<float>(
          rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    }
  }
  return f;
}

void write_snapshot(const DomainSnapshot& s,
                    const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError(errc::io_failure,
                  "cannot create '" + dir.string() + "': " + ec.message());
  }
  std::string manifest = "domain_id=" + s.domain_id + "\n";
  for (const auto& [level, fs] : s.levels) {
    const std::string rel = "level_" + std::to_string(level) + ".fset";
    write_fset(fs, dir / rel);
    manifest += "level." + std::to_string(level) + "=" + rel + "\n";
  }
  write_text_file(manifest, dir / "manifest.txt");
}

DomainSnapshot read_snapshot(const std::filesystem::path& dir) {
  const std::filesystem::path manifest = dir / "manifest.txt";
  const std::vector<std::string> lines = read_lines(manifest);
  DomainSnapshot snapshot;
  bool saw_id = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(errc::bad_config,
                            "'" + manifest.string() + "' line " +
                                std::to_string(i + 1) + ": missing '='");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "domain_id") {
      if (saw_id) {
        throw ValidationError(errc::bad_config,
                              "'" + manifest.string() +
                                  "': duplicate domain_id line");
      }
      snapshot.domain_id = value;
      saw_id = true;
    } else if (key.rfind("level.", 0) == 0) {
      int level = 0;
      const std::string label = key.substr(6);
      const auto [ptr, perr] =
          std::from_chars(label.data(), label.data() + label.size(), level);
      if (perr != std::errc() || ptr != label.data() + label.size()) {
        throw ValidationError(errc::bad_config,
                              "'" + manifest.string() + "': bad level key '" +
                                  key + "'");
      }
      if (snapshot.levels.count(level) != 0) {
        throw ValidationError(errc::bad_config,
                              "'" + manifest.string() + "': duplicate level " +
                                  std::to_string(level));
      }
      FeatureSet fs = read_fset(dir / value);
      if (fs.level != level) {
        throw ValidationError(errc::level_mismatch,
                              "'" + (dir / value).string() + "' is level " +
                                  std::to_string(fs.level) +
                                  " but the manifest lists it as " +
                                  std::to_string(level));
      }
      snapshot.levels.emplace(level, std::move(fs));
    } else {
      throw ValidationError(errc::bad_config,
                            "'" + manifest.string() + "': unknown key '" +
                                key + "'");
    }
  }
  if (!saw_id) {
    throw ValidationError(errc::bad_config,
                          "'" + manifest.string() + "' lacks a domain_id line");
  }
  return snapshot;
}

std::vector<APRecord> read_ap_csv(const std::filesystem::path& path) {
  std::vector<APRecord> records;
  for (auto& [id, value] : read_keyed_csv(path, "ap")) {
    APRecord record{id, value};
    require_valid(record);
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<std::pair<std::string, double>> read_gap_csv(
    const std::filesystem::path& path) {
  return read_keyed_csv(path, "gap");
}

std::map<std::string, std::string> read_config(
    const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  std::map<std::string, std::string> config;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(errc::bad_config,
                            "'" + path.string() + "' line " +
                                std::to_string(i + 1) + ": missing '='");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ValidationError(errc::bad_config,
                            "'" + path.string() + "' line " +
                                std::to_string(i + 1) + ": empty key");
    }
    if (!config.emplace(key, value).second) {
      throw ValidationError(errc::bad_config,
                            "'" + path.string() + "': duplicate key '" + key +
                                "'");
    }
  }
  return config;
}

std::string json_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eninf") == std::string::npos) s += ".0";
  return s;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

namespace {

std::string rows_json(const std::map<int, Index>& rows, const char* indent) {
  std::string out = "{";
  bool first = true;
  for (const auto& [level, count] : rows) {
    if (!first) out += ",";
    first = false;
    out += std::string("\n") + indent + "  \"" + std::to_string(level) +
           "\": " + std::to_string(count);
  }
  if (!first) out += std::string("\n") + indent;
  out += "}";
  return out;
}

}  // namespace

std::string to_json(const GapReport& report) {
  std::string out = "{\n";
  out += "  \"metric\": \"" + std::string(metric_name(report.metric)) + "\",\n";
  out += "  \"source_id\": \"" + json_escape(report.source_id) + "\",\n";
  out += "  \"target_id\": \"" + json_escape(report.target_id) + "\",\n";
  out += "  \"m_used\": ";
  out += report.m_used ? std::to_string(*report.m_used) : "null";
  out += ",\n  \"per_level\": {";
  bool first = true;
  for (const auto& [level, value] : report.per_level) {
    if (!first) out += ",";
    first = false;
    out += "\n    \"" + std::to_string(level) + "\": " + json_real(value);
  }
  if (!first) out += "\n  ";
  out += "},\n";
  out += "  \"aggregate\": " + json_real(report.aggregate) + "\n";
  out += "}\n";
  return out;
}

std::string to_json(const AdaptationLog& log) {
  const GatingPolicy& p = log.policy;
  std::string out = "{\n";
  out += "  \"metric\": \"" + std::string(metric_name(p.metric)) + "\",\n";
  out += "  \"threshold\": " + json_real(p.threshold) + ",\n";
  out += "  \"m\": " + std::to_string(p.m) + ",\n";
  out += "  \"pool_cap\": ";
  out += p.pool_cap ? std::to_string(*p.pool_cap) : "null";
  out += ",\n";
  out += "  \"adapt_cost_units\": " + json_real(p.adapt_cost_units) + ",\n";
  out += "  \"eval_cost_units\": " + json_real(p.eval_cost_units) + ",\n";
  out += std::string("  \"frozen_pool\": ") +
         (p.frozen_pool ? "true" : "false") + ",\n";
  out += "  \"decisions\": [";
  for (std::size_t i = 0; i < log.decisions.size(); ++i) {
    const GateDecision& d = log.decisions[i];
    if (i != 0) out += ",";
    out += "\n    {\n";
    out += "      \"step\": " + std::to_string(i + 1) + ",\n";
    out += "      \"domain_id\": \"" + json_escape(d.domain_id) + "\",\n";
    out += "      \"gap\": " + json_real(d.gap_report.aggregate) + ",\n";
    out += std::string("      \"action\": \"") + action_name(d.action) +
           "\",\n";
    out += "      \"step_cost\": " + json_real(d.step_cost) + ",\n";
    out += "      \"pool_rows_before\": " +
           rows_json(d.pool_rows_before, "      ") + ",\n";
    out += "      \"pool_rows_after\": " +
           rows_json(d.pool_rows_after, "      ") + "\n";
    out += "    }";
  }
  if (!log.decisions.empty()) out += "\n  ";
  out += "],\n";
  out += "  \"adapt_count\": " + std::to_string(log.adapt_count) + ",\n";
  out += "  \"skip_count\": " + std::to_string(log.skip_count) + ",\n";
  out += "  \"total_cost\": " + json_real(log.total_cost) + "\n";
  out += "}\n";
  return out;
}

std::string sweep_to_json(Metric metric, const std::vector<SweepRow>& rows) {
  std::string out = "{\n";
  out += "  \"metric\": \"" + std::string(metric_name(metric)) + "\",\n";
  out += "  \"rows\": [";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& row = rows[i];
    if (i != 0) out += ",";
    double mean_gap = 0.0;
    for (double g : row.step_gaps) mean_gap += g;
    if (!row.step_gaps.empty()) {
      mean_gap /= static_cast<double>(row.step_gaps.size());
    }
    out += "\n    {\n";
    out += "      \"threshold\": " + json_real(row.threshold) + ",\n";
    out += "      \"adapt_count\": " + std::to_string(row.adapt_count) + ",\n";
    out += "      \"total_cost\": " + json_real(row.total_cost) + ",\n";
    out += "      \"mean_gap\": " + json_real(mean_gap) + "\n";
    out += "    }";
  }
  if (!rows.empty()) out += "\n  ";
  out += "]\n";
  out += "}\n";
  return out;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "threshold,total_cost,adapt_count\n";
  for (const SweepRow& row : rows) {
    out += json_real(row.threshold) + "," + json_real(row.total_cost) + "," +
           std::to_string(row.adapt_count) + "\n";
  }
  return out;
}

void write_text_file(const std::string& text,
                     const std::filesystem::path& path) {
  std::ofstream sink(path, std::ios::binary | std::ios::trunc);
  if (!sink) {
    throw IoError(errc::io_failure, "cannot open '" + path.string() + "'");
  }
  sink.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!sink) {
    throw IoError(errc::io_failure, "write failed on '" + path.string() + "'");
  }
}

void write_report(const GapReport& report,
                  const std::filesystem::path& path) {
  write_text_file(to_json(report), path);
}

void write_report(const AdaptationLog& log,
                  const std::filesystem::path& path) {
  write_text_file(to_json(log), path);
}

}  // namespace dge
