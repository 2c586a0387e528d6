#pragma once

// Subcommand implementations behind the `oiltrade` executable. Each takes
// parsed options plus output/diagnostic streams and returns the exit code:
// 0 success, 1 validation error, 2 partial scenario failure.

#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oiltrade/app/manifest.hpp"
#include "oiltrade/app/tables.hpp"
#include "oiltrade/oiltrade.hpp"

namespace oiltrade::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitPartial = 2;

inline YearlyNetworks load_networks(const std::filesystem::path& input, FlowPolicy flow, std::ostream& err) {
  auto report = read_trade_file(input);
  for (const auto& e : report.errors) err << input.string() << ":" << e.line << ": " << e.message << '\n';
  if (report.zero_value_rows > 0) err << "dropped " << report.zero_value_rows << " zero-value rows\n";
  return build_yearly_networks(report.records, flow);
}

inline const TradeNetwork& require_year(const YearlyNetworks& nets, int year) {
  auto it = nets.find(year);
  if (it == nets.end()) throw ValidationError("year " + std::to_string(year) + " not present in the data");
  return it->second;
}

// Atomic file write: temp file then rename.
inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << content;
    if (!out) throw ValidationError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const StateError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitValidation;
}

struct IngestOptions {
  std::filesystem::path input;
  FlowPolicy flow = FlowPolicy::import;
  bool summary = true;
};

// Per-year N, N_E, W and density.
inline int cmd_ingest(const IngestOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto report = read_trade_file(opt.input);
    for (const auto& e : report.errors) err << opt.input.string() << ":" << e.line << ": " << e.message << '\n';
    if (report.zero_value_rows > 0) err << "dropped " << report.zero_value_rows << " zero-value rows\n";
    auto nets = build_yearly_networks(report.records, opt.flow);
    if (opt.summary) {
      out << kStatsHeader << '\n';
      for (const auto& [year, net] : nets) write_stats_row(out, year, net);
    } else {
      out << "records," << report.records.size() << "\nrow_errors," << report.errors.size()
          << "\nzero_value_rows," << report.zero_value_rows << "\nyears," << nets.size() << '\n';
    }
    return kExitOk;
  });
}

struct EfficiencyOptions {
  std::filesystem::path input;
  YearSelection years;
  FlowPolicy flow = FlowPolicy::import;
};

// Per-year E and E^W, each year normalized by its own mean edge weight.
inline int cmd_efficiency(const EfficiencyOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto nets = load_networks(opt.input, opt.flow, err);
    if (!opt.years.all) {
      for (int y : opt.years.years) require_year(nets, y);
    }
    out << kEfficiencyHeader << '\n';
    for (const auto& [year, net] : nets) {
      if (opt.years.contains(year)) write_efficiency_row(out, year, net);
    }
    return kExitOk;
  });
}

struct RankOptions {
  std::filesystem::path input;
  int year = 0;
  IndicatorKind indicator = IndicatorKind::out_degree;
  ElementKind target = ElementKind::node;
  std::size_t top = 10;
  std::uint64_t seed = 0;
  FlowPolicy flow = FlowPolicy::import;
};

inline int cmd_rank(const RankOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto nets = load_networks(opt.input, opt.flow, err);
    const auto& net = require_year(nets, opt.year);
    auto r = rank(net, opt.target, opt.indicator, opt.seed);
    write_ranking(out, net, r, opt.top);
    return kExitOk;
  });
}

struct ImpactOptions {
  std::filesystem::path input;
  int year = 0;
  ElementKind target = ElementKind::node;
  std::size_t top = 10;
  FlowPolicy flow = FlowPolicy::import;
};

inline int cmd_impact(const ImpactOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto nets = load_networks(opt.input, opt.flow, err);
    const auto& net = require_year(nets, opt.year);
    write_impacts(out, net, opt.target, rank_by_impact(net, opt.target, opt.top));
    return kExitOk;
  });
}

struct ScenarioOutcome {
  ScenarioKey key;
  std::optional<ResilienceReport> report;
  std::size_t replicates = 0;
  std::string error;
};

inline std::string make_run_id(int year, std::size_t scenario, const ScenarioConfig& c) {
  std::ostringstream id;
  id << year << "_s" << (scenario < 10 ? "0" : "") << scenario << '_' << to_string(c.target_kind) << '_'
     << to_string(c.indicator);
  return id.str();
}

inline nlohmann::json report_json(const ScenarioOutcome& o, const ScenarioConfig& c) {
  nlohmann::json j;
  j["run_id"] = o.key.run_id;
  j["indicator"] = std::string(to_string(o.key.indicator));
  j["target_kind"] = std::string(to_string(o.key.target));
  j["batch_fraction"] = c.batch_fraction;
  j["shock_depth"] = c.shock_depth;
  j["recovery_order"] = std::string(to_string(c.recovery_order));
  if (!o.report) {
    j["error"] = o.error;
    return j;
  }
  const auto& r = *o.report;
  j["R"] = r.r;
  j["LONE_DS"] = r.lone_ds;
  j["LONE_RS"] = r.lone_rs;
  j["Resilience"] = r.resilience;
  j["NE0"] = r.ne0;
  j["ROC_DS"] = r.roc_ds;
  j["ROC_RS"] = r.roc_rs;
  if (o.replicates > 0) j["replicates"] = o.replicates;
  return j;
}

// Run the scenario matrix (years x scenarios). Writes
//   <out>/trajectories/<run_id>.csv, <out>/reports/<run_id>.csv,
//   <out>/evolution.csv and <out>/summary.json.
inline int cmd_simulate(const RunManifest& m, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto nets = load_networks(m.input, m.flow, err);
    std::vector<int> years;
    if (m.years.all) {
      for (const auto& [y, net] : nets) years.push_back(y);
    } else {
      for (int y : m.years.years) {
        require_year(nets, y);
        years.push_back(y);
      }
    }

    struct Task {
      int year;
      std::size_t scenario;
    };
    std::vector<Task> tasks;
    for (int y : years) {
      for (std::size_t s = 0; s < m.scenarios.size(); ++s) tasks.push_back({y, s});
    }
    std::vector<ScenarioOutcome> outcomes(tasks.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
      for (std::size_t k = next++; k < tasks.size(); k = next++) {
        const auto& task = tasks[k];
        const auto& cfg = m.scenarios[task.scenario];
        auto& o = outcomes[k];
        o.key = {make_run_id(task.year, task.scenario, cfg), task.year, cfg.indicator, cfg.target_kind};
        try {
          const auto& net = nets.at(task.year);
          std::ostringstream traj_out;
          if (cfg.indicator == IndicatorKind::random) {
            auto rc = run_random_control(net, cfg);
            o.replicates = rc.replicates.size();
            o.report = summarize(rc.mean);
            write_trajectory(traj_out, o.key, rc.mean, &rc.stddev);
          } else {
            auto traj = run_shock_recovery(net, cfg);
            o.report = summarize(traj);
            write_trajectory(traj_out, o.key, traj, nullptr);
          }
          std::ostringstream rep_out;
          rep_out << kReportHeader << '\n';
          write_report_row(rep_out, o.key, *o.report);
          write_file(m.output_dir / "trajectories" / (o.key.run_id + ".csv"), traj_out.str());
          write_file(m.output_dir / "reports" / (o.key.run_id + ".csv"), rep_out.str());
        } catch (const std::exception& e) {
          o.report.reset();
          o.error = e.what();
        }
      }
    };
    {
      std::vector<std::jthread> pool;
      const auto threads = std::min<std::size_t>(m.jobs, std::max<std::size_t>(1, tasks.size()));
      for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
      worker();
    }

    std::ostringstream evolution;
    evolution << kReportHeader << '\n';
    nlohmann::json summary;
    summary["master_seed"] = m.master_seed;
    summary["flow"] = m.flow == FlowPolicy::import ? "import" : "export";
    summary["years"] = nlohmann::json::object();
    std::size_t failures = 0;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
      const auto& o = outcomes[k];
      const auto& cfg = m.scenarios[tasks[k].scenario];
      summary["years"][std::to_string(o.key.year)].push_back(report_json(o, cfg));
      if (o.report) {
        write_report_row(evolution, o.key, *o.report);
      } else {
        ++failures;
        err << "scenario " << o.key.run_id << " failed: " << o.error << '\n';
      }
    }
    write_file(m.output_dir / "evolution.csv", evolution.str());
    write_file(m.output_dir / "summary.json", summary.dump(2) + "\n");
    out << "ran " << tasks.size() << " scenarios (" << failures << " failed) into " << m.output_dir.string() << '\n';
    return failures == 0 ? kExitOk : kExitPartial;
  });
}

struct SynthOptions {
  std::filesystem::path output;
  YearSelection years;  // default: a single year
  SyntheticOptions network;
};

// Synthetic import-report file; year y uses seed network.seed + (y - first).
inline int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<int> years = opt.years.all ? std::vector<int>{opt.network.year} : opt.years.years;
    std::ostringstream text;
    text << kTradeHeader << '\n';
    for (std::size_t k = 0; k < years.size(); ++k) {
      auto o = opt.network;
      o.year = years[k];
      o.seed = opt.network.seed + k;
      for (const auto& f : hub_dominated_flows(o)) {
        text << o.year << ',' << f.target << ',' << f.source << ",import," << format_double(f.weight) << '\n';
      }
    }
    if (opt.output.empty()) {
      out << text.str();
    } else {
      write_file(opt.output, text.str());
      out << "wrote " << opt.output.string() << '\n';
    }
    return kExitOk;
  });
}

}  // namespace oiltrade::app
