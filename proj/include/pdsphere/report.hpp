#ifndef PDSPHERE_REPORT_HPP
#define PDSPHERE_REPORT_HPP

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <string>
#include <vector>

#include "json.hpp"

namespace pdsphere {

enum class CheckStatus { pass, fail, skip };

inline const char* to_string(CheckStatus s) {
  switch (s) {
  case CheckStatus::pass: return "pass";
  case CheckStatus::fail: return "fail";
  case CheckStatus::skip: return "skip";
  }
  return "unknown";
}

struct Check {
  std::string name;
  CheckStatus status = CheckStatus::skip;
  double metric = 0.0;
  double tolerance = 0.0;
};

/// Machine-readable outcome of one command run.
struct RunReport {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<Check> checks;
  std::uint64_t seed = 0;
  nlohmann::json extra = nlohmann::json::object();

  void add(std::string name, bool passed, double metric, double tolerance) {
    checks.push_back({std::move(name), passed ? CheckStatus::pass : CheckStatus::fail, metric, tolerance});
  }
  void skip(std::string name) { checks.push_back({std::move(name), CheckStatus::skip, 0.0, 0.0}); }

  bool passed() const {
    for (const auto& c : checks)
      if (c.status == CheckStatus::fail) return false;
    return true;
  }

  std::size_t count(CheckStatus s) const {
    std::size_t n = 0;
    for (const auto& c : checks) n += c.status == s;
    return n;
  }
};

/// UTC time in ISO-8601; SOURCE_DATE_EPOCH, when set, replaces the clock so
/// reports can be reproduced byte for byte.
inline std::string report_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0') t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Non-finite metrics are written as strings so the output stays valid JSON.
inline nlohmann::json metric_json(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

inline nlohmann::json to_json(const RunReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"metric", metric_json(c.metric)},
                      {"tolerance", metric_json(c.tolerance)}});
  }
  nlohmann::json out = {{"command", r.command},
                        {"parameters", r.parameters},
                        {"checks", checks},
                        {"timestamp", report_timestamp()},
                        {"seed", r.seed},
                        {"summary", {{"pass", r.count(CheckStatus::pass)},
                                     {"fail", r.count(CheckStatus::fail)},
                                     {"skip", r.count(CheckStatus::skip)}}}};
  if (!r.extra.empty()) out["results"] = r.extra;
  return out;
}

inline std::string to_csv(const RunReport& r) {
  std::string out = "name,status,metric,tolerance\n";
  for (const auto& c : r.checks) {
    out += c.name + "," + to_string(c.status) + "," + metric_json(c.metric).dump() + "," +
           metric_json(c.tolerance).dump() + "\n";
  }
  return out;
}

} // namespace pdsphere

#endif // PDSPHERE_REPORT_HPP
