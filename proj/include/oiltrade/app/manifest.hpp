#pragma once

// Declarative run description for `oiltrade simulate`.
//
// {
//   "input": "trade.csv",
//   "years": [2019, 2020],          // or "1988-2022", or "all"
//   "output": "out",
//   "master_seed": 7,
//   "flow": "import",
//   "jobs": 2,
//   "scenarios": [
//     {"targets": ["nodes", "edges"], "indicators": ["out_degree", "random"],
//      "batch_fraction": 0.01, "shock_depth": 0.5,
//      "recovery_order": "shock_order", "replicates": 20}
//   ]
// }
//
// "target"/"indicator" accept a single name; "targets"/"indicators" expand
// into the cross product. Relative paths resolve against the manifest file.

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "oiltrade/error.hpp"
#include "oiltrade/ingest.hpp"
#include "oiltrade/simulation.hpp"

namespace oiltrade::app {

struct YearSelection {
  bool all = true;
  std::vector<int> years;

  [[nodiscard]] bool contains(int y) const {
    return all || std::find(years.begin(), years.end(), y) != years.end();
  }
};

// "all", "2019", "1988-2022" or "2001,2008,2014".
inline YearSelection parse_years(std::string_view text) {
  YearSelection sel;
  text = detail::trim(text);
  if (text.empty() || text == "all") return sel;
  sel.all = false;
  for (auto part : detail::split(text, ',')) {
    auto dash = part.find('-');
    int lo = 0, hi = 0;
    bool ok = dash == std::string_view::npos
                  ? detail::parse_number(part, lo) && (hi = lo, true)
                  : detail::parse_number(detail::trim(part.substr(0, dash)), lo) &&
                        detail::parse_number(detail::trim(part.substr(dash + 1)), hi);
    if (!ok || hi < lo) throw ValidationError("bad year selection '" + std::string(text) + "'");
    for (int y = lo; y <= hi; ++y) sel.years.push_back(y);
  }
  return sel;
}

struct RunManifest {
  std::filesystem::path input;
  YearSelection years;
  std::vector<ScenarioConfig> scenarios;
  std::filesystem::path output_dir;
  std::uint64_t master_seed = 0;
  FlowPolicy flow = FlowPolicy::import;
  unsigned jobs = 1;
};

inline FlowPolicy parse_flow_policy(std::string_view s) {
  if (s == "import") return FlowPolicy::import;
  if (s == "export") return FlowPolicy::export_;
  throw ValidationError("unknown flow policy '" + std::string(s) + "'");
}

inline RunManifest parse_manifest(const nlohmann::json& j, const std::filesystem::path& base = {}) {
  using nlohmann::json;
  RunManifest m;
  try {
    auto resolve = [&](const std::string& p) {
      std::filesystem::path path(p);
      return path.is_relative() && !base.empty() ? base / path : path;
    };
    m.input = resolve(j.at("input").get<std::string>());
    m.output_dir = resolve(j.value("output", std::string("out")));
    m.master_seed = j.value("master_seed", std::uint64_t{0});
    m.flow = parse_flow_policy(j.value("flow", std::string("import")));
    m.jobs = std::max(1u, j.value("jobs", 1u));
    if (j.contains("years")) {
      const auto& y = j["years"];
      if (y.is_string()) {
        m.years = parse_years(y.get<std::string>());
      } else if (y.is_array()) {
        m.years.all = false;
        for (const auto& v : y) m.years.years.push_back(v.get<int>());
      } else {
        throw ValidationError("'years' must be a string or an array");
      }
    }
    for (const auto& s : j.at("scenarios")) {
      auto names = [&](const char* one, const char* many) {
        std::vector<std::string> out;
        if (s.contains(many)) {
          for (const auto& v : s[many]) out.push_back(v.get<std::string>());
        } else {
          out.push_back(s.at(one).get<std::string>());
        }
        return out;
      };
      for (const auto& target : names("target", "targets")) {
        for (const auto& indicator : names("indicator", "indicators")) {
          ScenarioConfig c;
          c.target_kind = parse_element_kind(target);
          c.indicator = parse_indicator(indicator);
          c.batch_fraction = s.value("batch_fraction", c.batch_fraction);
          c.shock_depth = s.value("shock_depth", c.shock_depth);
          c.recovery_order = parse_recovery_order(s.value("recovery_order", std::string("shock_order")));
          c.replicates = s.value("replicates", c.replicates);
          c.recompute_rankings = s.value("recompute_rankings", false);
          c.master_seed = m.master_seed;
          c.validate();
          m.scenarios.push_back(c);
        }
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  }
  if (m.scenarios.empty()) throw ValidationError("manifest lists no scenarios");
  return m;
}

inline RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open manifest " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("manifest " + path.string() + ": " + e.what());
  }
  return parse_manifest(j, path.parent_path());
}

}  // namespace oiltrade::app
