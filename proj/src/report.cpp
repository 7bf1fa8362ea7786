#include "conifold/report.hpp"

#include <cstdio>
#include <fstream>

namespace conifold {

bool ReportDocument::overall() const {
  for (const CheckRecord& c : checks)
    if (!c.pass) return false;
  return true;
}

void ReportDocument::add(CheckRecord rec) {
  for (const CheckRecord& c : checks)
    if (c.check_id == rec.check_id)
      throw config_error("duplicate check id: " + rec.check_id);
  if (rec.paper_ref.empty())
    throw config_error("check without a paper reference: " + rec.check_id);
  checks.push_back(std::move(rec));
}

json ReportDocument::to_json(bool with_timings) const {
  json j;
  j["schema_version"] = schema_version;
  j["command"] = command;
  j["config"] = config_echo;
  json arr = json::array();
  int n_pass = 0;
  for (const CheckRecord& c : checks) {
    json rec;
    rec["check_id"] = c.check_id;
    rec["paper_ref"] = c.paper_ref;
    rec["inputs"] = c.inputs;
    rec["measured"] = c.measured;
    rec["tolerance"] = c.tolerance;
    rec["pass"] = c.pass;
    if (with_timings) rec["wall_ms"] = c.wall_ms;
    arr.push_back(rec);
    if (c.pass) ++n_pass;
  }
  j["checks"] = arr;
  j["summary"] = {{"checks", checks.size()},
                  {"passed", n_pass},
                  {"failed", checks.size() - n_pass},
                  {"overall", overall() ? "pass" : "fail"}};
  return j;
}

ReportDocument ReportDocument::from_json(const json& j) {
  if (!j.contains("schema_version") || j["schema_version"] != schema_version)
    throw config_error("report: unsupported schema version");
  ReportDocument doc;
  doc.command = j.value("command", "");
  doc.config_echo = j.value("config", json::object());
  for (const json& rec : j.at("checks")) {
    CheckRecord c;
    c.check_id = rec.at("check_id");
    c.paper_ref = rec.at("paper_ref");
    c.inputs = rec.value("inputs", json::object());
    c.measured = rec.value("measured", json::object());
    c.tolerance = rec.value("tolerance", 0.0);
    c.pass = rec.at("pass");
    c.wall_ms = rec.value("wall_ms", 0.0);
    doc.checks.push_back(c);
  }
  return doc;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw config_error("cannot write " + path);
  f << content;
}

std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header)
    : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ += ',';
    out_ += header[i];
  }
  out_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw config_error("csv row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ += ',';
    out_ += format_sci(values[i]);
  }
  out_ += '\n';
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
  if (values.size() != columns_)
    throw config_error("csv row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ += ',';
    out_ += values[i];
  }
  out_ += '\n';
}

ReportDocument merge_reports(const std::vector<ReportDocument>& parts) {
  if (parts.empty()) throw config_error("merge: no input reports");
  ReportDocument merged;
  merged.command = "report";
  json echo = json::array();
  for (const ReportDocument& p : parts) {
    json entry;
    entry["command"] = p.command;
    entry["overall"] = p.overall() ? "pass" : "fail";
    echo.push_back(entry);
    for (const CheckRecord& c : p.checks) {
      CheckRecord copy = c;
      copy.check_id = p.command + "/" + c.check_id;
      merged.add(copy);
    }
  }
  merged.config_echo = {{"merged", echo}};
  return merged;
}

}  // namespace conifold
