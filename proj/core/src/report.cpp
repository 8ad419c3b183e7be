#include "rproj/report.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rproj {

void ExperimentReport::meta(const std::string& key, const std::string& value) {
  metadata.emplace_back(key, value);
}
void ExperimentReport::meta(const std::string& key, double value) {
  metadata.emplace_back(key, format_double(value));
}
void ExperimentReport::meta(const std::string& key, std::int64_t value) {
  metadata.emplace_back(key, std::to_string(value));
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

std::string value_string(const ReportValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  return std::get<std::string>(v);
}

}  // namespace

std::string to_csv(const ExperimentReport& report) {
  std::string out;
  out += "# name=" + report.name + "\n";
  for (const auto& [key, value] : report.metadata) out += "# " + key + "=" + value + "\n";
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    if (i) out += ',';
    out += report.columns[i];
  }
  out += '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += value_string(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["name"] = report.name;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.metadata) meta[key] = value;
  j["metadata"] = std::move(meta);
  j["columns"] = report.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& v : row) {
      if (const auto* i = std::get_if<std::int64_t>(&v))
        r.push_back(*i);
      else if (const auto* d = std::get_if<double>(&v))
        r.push_back(*d);
      else
        r.push_back(std::get<std::string>(v));
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string serialize(const ExperimentReport& report, ReportFormat format) {
  return format == ReportFormat::csv ? to_csv(report) : to_json(report);
}

void write_report(const ExperimentReport& report, const std::filesystem::path& path,
                  ReportFormat format) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const std::string s = serialize(report, format);
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string config_hash(const std::string& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hex[h & 0xF];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf, 16);
}

}  // namespace rproj
