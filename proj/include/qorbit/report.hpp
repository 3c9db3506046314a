#pragma once

// Verification reports: {command, inputs, checks: [{name, status, residual?,
// certificate?}], results, elapsed_ms}.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace qorbit {

enum class CheckStatus { Pass, Fail, Skipped };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

struct CheckEntry {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::optional<std::string> residual;
  std::optional<std::string> certificate;
};

struct Report {
  std::string command;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  std::vector<CheckEntry> checks;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  long long elapsed_ms = 0;

  CheckEntry& check(std::string name, bool passed, std::optional<std::string> residual = std::nullopt,
                    std::optional<std::string> certificate = std::nullopt) {
    checks.push_back({std::move(name), passed ? CheckStatus::Pass : CheckStatus::Fail, std::move(residual),
                      std::move(certificate)});
    return checks.back();
  }
  void skip(std::string name, std::string why) {
    checks.push_back({std::move(name), CheckStatus::Skipped, std::nullopt, std::move(why)});
  }
  bool passed() const {
    for (const auto& c : checks)
      if (c.status == CheckStatus::Fail) return false;
    return true;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
      nlohmann::ordered_json e;
      e["name"] = c.name;
      e["status"] = to_string(c.status);
      if (c.residual) e["residual"] = *c.residual;
      if (c.certificate) e["certificate"] = *c.certificate;
      j["checks"].push_back(e);
    }
    if (!results.empty()) j["results"] = results;
    j["elapsed_ms"] = elapsed_ms;
    return j;
  }

  std::string to_text() const {
    std::ostringstream os;
    os << command;
    for (const auto& [k, v] : inputs.items()) os << " " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump());
    os << "\n";
    for (const auto& [k, v] : results.items()) os << "  " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    for (const auto& c : checks) {
      os << "  [" << to_string(c.status) << "] " << c.name;
      if (c.residual) os << "  residual: " << *c.residual;
      if (c.certificate) os << "  (" << *c.certificate << ")";
      os << "\n";
    }
    os << (passed() ? "PASS" : "FAIL") << " (" << elapsed_ms << " ms)\n";
    return os.str();
  }
};

}  // namespace qorbit
