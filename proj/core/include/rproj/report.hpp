#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rproj {

using ReportValue = std::variant<std::int64_t, double, std::string>;

enum class ReportFormat { csv, json };

/// Tabular experiment output with ordered metadata. Serialization is
/// deterministic: the same report object always yields the same bytes.
struct ExperimentReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<ReportValue>> rows;

  void meta(const std::string& key, const std::string& value);
  void meta(const std::string& key, double value);
  void meta(const std::string& key, std::int64_t value);
};

/// Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double v);

std::string to_csv(const ExperimentReport& report);
std::string to_json(const ExperimentReport& report);
std::string serialize(const ExperimentReport& report, ReportFormat format);
void write_report(const ExperimentReport& report, const std::filesystem::path& path,
                  ReportFormat format);

/// 64-bit FNV-1a of a string, hex-encoded; used to fingerprint configs.
std::string config_hash(const std::string& config);

}  // namespace rproj
