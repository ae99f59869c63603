#pragma once

#include <array>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace vfbm {

/// One inequality instantiated over many randomized cases.
struct CheckItem {
  std::string name;
  long cases = 0;
  double max_ratio = 0.0;  // max lhs / rhs
  double slack = 0.0;
  bool passed = true;
  // `passed` is false but only advisory (reported, not counted as failure).
  bool advisory = false;

  /// Records one (lhs, rhs) pair. rhs == 0 with lhs == 0 counts as ratio 0.
  void record(double lhs, double rhs);
  void finalize() { passed = max_ratio <= 1.0 + slack; }
};

struct EstimateReport {
  std::string name;
  long cases = 0;
  double max_ratio = 0.0;
  double slack_allowed = 0.0;
  bool passed = true;
  std::vector<std::pair<std::string, double>> constants_used;
  std::vector<CheckItem> items;
  std::vector<std::array<double, 2>> samples;  // first (lhs, rhs) pairs, capped

  void add(CheckItem item);
  void constant(const std::string& key, double value) { constants_used.emplace_back(key, value); }
  void sample(double lhs, double rhs) {
    if (samples.size() < kMaxSamples) samples.push_back({lhs, rhs});
  }
  /// Recomputes cases/max_ratio/passed from the items.
  void finalize();

  static constexpr size_t kMaxSamples = 32;
};

nlohmann::ordered_json to_json(const CheckItem& item);
/// {name, cases, max_ratio, slack, passed, constants_used, items}
nlohmann::ordered_json to_json(const EstimateReport& report);

/// JSON number that survives non-finite values (emitted as strings).
nlohmann::ordered_json json_number(double v);

}  // namespace vfbm
