#include "clf/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#ifndef CLF_SOURCE_HASH
#define CLF_SOURCE_HASH "unknown"
#endif

namespace clf {

json VerificationReport::to_json() const {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["probe"] = probe;
  j["inputs"] = inputs;
  j["metrics"] = metrics;
  j["stability"] = stability;
  j["notes"] = notes;
  j["pass"] = pass;
  j["wall_seconds"] = wall_seconds;
  j["code_version"] = kCodeVersion;
  j["code_hash"] = CLF_SOURCE_HASH;
  j["config_hash"] = config_hash;
  return j;
}

VerificationReport VerificationReport::from_json(const json& j) {
  VerificationReport r;
  r.probe = j.at("probe").get<std::string>();
  r.inputs = j.value("inputs", json::object());
  r.metrics = j.value("metrics", json::object());
  r.stability = j.value("stability", json::object());
  r.notes = j.value("notes", std::vector<std::string>{});
  r.pass = j.value("pass", false);
  r.wall_seconds = j.value("wall_seconds", 0.0);
  r.config_hash = j.value("config_hash", std::string{});
  return r;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

double relative_change(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace clf
