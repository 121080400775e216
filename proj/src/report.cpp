#include "isingops/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "isingops/errors.hpp"

namespace isingops {

namespace {

nlohmann::json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

nlohmann::json Check::to_json() const {
  nlohmann::json j = {{"name", name},
                      {"paper_ref", paper_ref},
                      {"status", status},
                      {"residual", finite_or_string(residual)},
                      {"tolerance", finite_or_string(tolerance)}};
  if (!detail.empty()) j["detail"] = detail;
  return j;
}

Check make_check(std::string name, std::string paper_ref, double residual, double tolerance, nlohmann::json detail) {
  Check c{std::move(name), std::move(paper_ref), "pass", residual, tolerance, std::move(detail)};
  c.status = (std::isfinite(residual) && residual <= tolerance) ? "pass" : "fail";
  return c;
}

Check make_flag(std::string name, std::string paper_ref, bool ok, nlohmann::json detail) {
  return {std::move(name), std::move(paper_ref), ok ? "pass" : "fail", ok ? 0.0 : 1.0, 0.0, std::move(detail)};
}

Check make_info(std::string name, std::string paper_ref, double value, nlohmann::json detail) {
  return {std::move(name), std::move(paper_ref), "info", value, 0.0, std::move(detail)};
}

bool Report::passed() const { return failures() == 0; }

int Report::failures() const {
  int f = 0;
  for (const auto& c : checks) f += c.failed() ? 1 : 0;
  return f;
}

nlohmann::json Report::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : checks) cs.push_back(c.to_json());
  return {{"suite", suite}, {"checks", cs}, {"metadata", metadata}};
}

std::string csv_cell(const nlohmann::json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) return std::isnan(d) ? "nan" : (d > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
  }
  if (v.is_null()) return "";
  return v.dump();
}

std::vector<std::string> Report::write(const std::string& dir) const {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidArgument("cannot create output directory " + dir + ": " + ec.message());
  std::vector<std::string> written;
  const fs::path jp = fs::path(dir) / (suite + ".json");
  {
    std::ofstream os(jp);
    if (!os) throw InvalidArgument("cannot write " + jp.string());
    os << to_json().dump(2) << "\n";
  }
  written.push_back(jp.string());
  for (const auto& t : tables) {
    const fs::path cp = fs::path(dir) / (suite + "_" + t.name + ".csv");
    std::ofstream os(cp);
    if (!os) throw InvalidArgument("cannot write " + cp.string());
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
      os << "\n";
    }
    written.push_back(cp.string());
  }
  return written;
}

}  // namespace isingops
