#include "vfbm/report.hpp"

#include <algorithm>
#include <cmath>

namespace vfbm {

void CheckItem::record(double lhs, double rhs) {
  ++cases;
  double ratio;
  if (!std::isfinite(lhs) || std::isnan(rhs)) {
    ratio = std::numeric_limits<double>::infinity();
  } else if (rhs <= 0.0) {
    ratio = lhs <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    ratio = lhs / rhs;
  }
  if (ratio > max_ratio || std::isnan(ratio)) max_ratio = ratio;
}

void EstimateReport::add(CheckItem item) {
  item.finalize();
  items.push_back(std::move(item));
}

void EstimateReport::finalize() {
  cases = 0;
  max_ratio = 0.0;
  passed = true;
  for (const auto& it : items) {
    cases += it.cases;
    if (it.advisory) continue;
    max_ratio = std::max(max_ratio, it.max_ratio);
    slack_allowed = std::max(slack_allowed, it.slack);
    passed = passed && it.passed;
  }
}

nlohmann::ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

nlohmann::ordered_json to_json(const CheckItem& item) {
  nlohmann::ordered_json j;
  j["name"] = item.name;
  j["cases"] = item.cases;
  j["max_ratio"] = json_number(item.max_ratio);
  j["slack"] = item.slack;
  j["passed"] = item.passed;
  if (item.advisory) j["advisory"] = true;
  return j;
}

nlohmann::ordered_json to_json(const EstimateReport& report) {
  nlohmann::ordered_json j;
  j["name"] = report.name;
  j["cases"] = report.cases;
  j["max_ratio"] = json_number(report.max_ratio);
  j["slack"] = report.slack_allowed;
  j["passed"] = report.passed;
  nlohmann::ordered_json constants = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.constants_used) constants[k] = json_number(v);
  j["constants_used"] = constants;
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  for (const auto& it : report.items) items.push_back(to_json(it));
  j["items"] = items;
  return j;
}

}  // namespace vfbm
