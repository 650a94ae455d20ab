#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace clf {

using json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kCodeVersion = "clf-kit 0.1.0";

/// Result record of one probe. `metrics` holds numbers only, so two runs can be
/// compared field by field; timings live outside it.
struct VerificationReport {
  std::string probe;
  json inputs = json::object();
  json metrics = json::object();
  json stability = json::object();
  std::vector<std::string> notes;
  bool pass = false;
  double wall_seconds = 0.0;
  std::string config_hash;

  json to_json() const;
  static VerificationReport from_json(const json& j);
};

std::string fnv1a_hex(const std::string& text);

/// Relative change |a - b| / max(|a|, |b|, floor).
double relative_change(double a, double b, double floor = 1e-300);

}  // namespace clf
