#pragma once

// Check reports: one line per sub-check, rendered as text or JSON.

#include <algorithm>
#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"

namespace rackworks {

enum class Status { Pass, Fail, Error };

inline const char *to_string(Status s) {
  switch (s) {
  case Status::Pass:
    return "pass";
  case Status::Fail:
    return "fail";
  default:
    return "error";
  }
}

struct CheckLine {
  std::string name;
  Status status = Status::Pass;
  std::string detail;   // witness, differing monomial, diagnostic
  double residual = -1; // negative when not applicable
};

struct Report {
  std::string title;
  std::vector<CheckLine> checks;
  double time_ms = 0;
  nlohmann::json extra = nlohmann::json::object();

  void add(std::string name, bool ok, std::string detail = {}, double residual = -1) {
    checks.push_back({std::move(name), ok ? Status::Pass : Status::Fail,
                      std::move(detail), residual});
  }

  void error(std::string name, std::string detail) {
    checks.push_back({std::move(name), Status::Error, std::move(detail), -1});
  }

  bool pass() const {
    for (const auto &c : checks)
      if (c.status != Status::Pass)
        return false;
    return true;
  }

  bool has_error() const {
    for (const auto &c : checks)
      if (c.status == Status::Error)
        return true;
    return false;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["check"] = title;
    j["status"] = has_error() ? "error" : pass() ? "pass" : "fail";
    j["time_ms"] = time_ms;
    double worst = -1;
    nlohmann::json witness = nullptr;
    for (const auto &c : checks) {
      worst = std::max(worst, c.residual);
      if (c.status != Status::Pass && witness.is_null() && !c.detail.empty())
        witness = c.name + ": " + c.detail;
    }
    if (worst >= 0)
      j["max_residual"] = worst;
    j["witness"] = witness;
    j["checks"] = nlohmann::json::array();
    for (const auto &c : checks) {
      nlohmann::json cj{{"name", c.name}, {"status", to_string(c.status)}};
      if (!c.detail.empty())
        cj["detail"] = c.detail;
      if (c.residual >= 0)
        cj["residual"] = c.residual;
      j["checks"].push_back(std::move(cj));
    }
    if (!extra.empty())
      j["data"] = extra;
    return j;
  }

  std::string to_text() const {
    std::ostringstream os;
    os << title << ": " << (has_error() ? "ERROR" : pass() ? "PASS" : "FAIL") << "\n";
    for (const auto &c : checks) {
      os << "  [" << to_string(c.status) << "] " << c.name;
      if (c.residual >= 0)
        os << "  residual=" << c.residual;
      if (!c.detail.empty())
        os << "  " << c.detail;
      os << "\n";
    }
    for (const auto &[key, value] : extra.items())
      os << "  " << key << ": " << value.dump() << "\n";
    return os.str();
  }
};

/// Milliseconds since construction.
class Stopwatch {
public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_ = Clock::now();
};

inline std::string witness_string(const std::vector<long> &w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i)
    s += (i ? "," : "") + std::to_string(w[i]);
  return s + ")";
}

/// One line per violated rule, or a single passing line.
inline void add_check_report(Report &r, const std::string &prefix,
                             const CheckReport &c) {
  if (c.valid) {
    r.add(prefix, true);
    return;
  }
  for (const auto &v : c.violations)
    r.add(prefix + "/" + v.rule, false, "witness " + witness_string(v.witness));
}

} // namespace rackworks
