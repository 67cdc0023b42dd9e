#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

namespace revprime {

using json = nlohmann::ordered_json;

inline constexpr double kRelTol = 1e-9;

/// One inequality lhs <= rhs, checked with relative tolerance 1e-9 plus an
/// optional absolute slack (zero unless stated at the call site).
struct BoundReport {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  double slack = 0;
  json params = json::object();
  bool pass = true;

  json to_json() const {
    json j;
    j["name"] = name;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["ratio"] = ratio;
    if (slack != 0) j["slack"] = slack;
    j["params"] = params;
    j["pass"] = pass;
    return j;
  }
};

inline double safe_ratio(double lhs, double rhs) {
  if (rhs > 0) return lhs / rhs;
  return lhs > 0 ? std::numeric_limits<double>::infinity() : 0.0;
}

inline BoundReport make_report(std::string name, double lhs, double rhs, json params = json::object(),
                               double abs_slack = 0.0) {
  BoundReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = safe_ratio(lhs, rhs);
  r.slack = abs_slack;
  r.params = std::move(params);
  r.pass = std::isfinite(lhs) && lhs <= rhs * (1 + kRelTol) + abs_slack;
  return r;
}

/// Running summary of many reports: count, violations, worst ratio.
struct BoundTally {
  std::string name;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double max_ratio = 0;
  BoundReport worst;
  BoundReport first_failure;

  void add(const BoundReport& r) {
    ++checked;
    if (!r.pass) {
      if (violations == 0) first_failure = r;
      ++violations;
    }
    if (checked == 1 || r.ratio > max_ratio) {
      max_ratio = r.ratio;
      worst = r;
    }
  }

  /// Same as add(make_report(...)) but only builds the report (and calls
  /// params()) when it becomes the worst case or the first failure.
  template <typename ParamsFn>
  void add_lazy(const std::string& nm, double lhs, double rhs, double abs_slack, ParamsFn&& params) {
    const double ratio = safe_ratio(lhs, rhs);
    const bool ok = std::isfinite(lhs) && lhs <= rhs * (1 + kRelTol) + abs_slack;
    if (checked == 0 || ratio > max_ratio || (!ok && violations == 0)) {
      add(make_report(nm, lhs, rhs, params(), abs_slack));
      return;
    }
    ++checked;
    if (!ok) ++violations;
  }

  void merge(const BoundTally& o) {
    if (o.checked == 0) return;
    if (violations == 0 && o.violations > 0) first_failure = o.first_failure;
    if (checked == 0 || o.max_ratio > max_ratio) {
      max_ratio = o.max_ratio;
      worst = o.worst;
    }
    checked += o.checked;
    violations += o.violations;
  }

  bool pass() const { return violations == 0; }

  json to_json() const {
    json j;
    j["name"] = name;
    j["checked"] = checked;
    j["violations"] = violations;
    j["max_ratio"] = max_ratio;
    j["worst"] = worst.to_json();
    if (violations) j["first_failure"] = first_failure.to_json();
    j["pass"] = pass();
    return j;
  }
};

}  // namespace revprime
