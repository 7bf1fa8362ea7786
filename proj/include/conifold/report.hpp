#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "conifold/errors.hpp"

namespace conifold {

using json = nlohmann::ordered_json;

// One verification check: what was measured, against which tolerance, and
// where in the source text the claim lives.
struct CheckRecord {
  std::string check_id;
  std::string paper_ref;
  json inputs = json::object();
  json measured = json::object();
  double tolerance = 0.0;
  bool pass = false;
  double wall_ms = 0.0;
};

struct ReportDocument {
  static constexpr int schema_version = 1;
  std::string command;
  json config_echo = json::object();
  std::vector<CheckRecord> checks;

  bool overall() const;
  void add(CheckRecord rec);  // rejects duplicate check ids
  // with_timings = false drops the volatile wall_ms fields so that two runs
  // with the same config and seed serialize byte-identically
  json to_json(bool with_timings) const;
  static ReportDocument from_json(const json& j);
};

void write_text_file(const std::string& path, const std::string& content);
std::string format_sci(double v);  // 17 significant digits, C locale

// CSV with a header row; every numeric cell uses format_sci
struct CsvWriter {
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);
  std::string str() const { return out_; }

 private:
  std::string out_;
  std::size_t columns_;
};

ReportDocument merge_reports(const std::vector<ReportDocument>& parts);

}  // namespace conifold
