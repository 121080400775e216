#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace isingops {

// One verification result. `status` is "pass", "fail" or "info" (informational entries
// never fail a suite).
struct Check {
  std::string name;
  std::string paper_ref;  // short name of the property exercised
  std::string status = "pass";
  double residual = 0.0;
  double tolerance = 0.0;
  nlohmann::json detail = nlohmann::json::object();

  bool failed() const { return status == "fail"; }
  nlohmann::json to_json() const;
};

// Residual against tolerance; non-finite residuals fail.
Check make_check(std::string name, std::string paper_ref, double residual, double tolerance,
                 nlohmann::json detail = nlohmann::json::object());
Check make_flag(std::string name, std::string paper_ref, bool ok, nlohmann::json detail = nlohmann::json::object());
Check make_info(std::string name, std::string paper_ref, double value, nlohmann::json detail = nlohmann::json::object());

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
  void add(std::vector<nlohmann::json> row) { rows.push_back(std::move(row)); }
};

struct Report {
  std::string suite;
  std::vector<Check> checks;
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<Table> tables;

  void add(Check c) { checks.push_back(std::move(c)); }
  void add(const std::vector<Check>& cs) { checks.insert(checks.end(), cs.begin(), cs.end()); }
  bool passed() const;
  int failures() const;
  nlohmann::json to_json() const;
  // <dir>/<suite>.json and <dir>/<suite>_<table>.csv; returns the written paths.
  std::vector<std::string> write(const std::string& dir) const;
};

// Cell formatting shared by the CSV writer: numbers with 17 significant digits.
std::string csv_cell(const nlohmann::json& v);

}  // namespace isingops
