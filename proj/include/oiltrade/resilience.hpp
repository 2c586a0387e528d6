#pragma once

// Resistance, recoverability and composite resilience of a shock-recovery
// trajectory.
//
// Time is discrete with unit step. The shock phase covers samples
// (t_d, t_r] and the recovery phase (t_r, t_rs]; loss areas use the right
// rectangle rule so that resilience = lone_ds + lone_rs holds exactly.
// LONE values are losses: larger means less resistant / less recoverable.

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "oiltrade/network.hpp"

namespace oiltrade {

enum class Phase { baseline, shock, recovery };

inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::baseline: return "baseline";
    case Phase::shock: return "shock";
    case Phase::recovery: return "recovery";
  }
  return "unknown";
}

struct TrajectoryStep {
  std::size_t t = 0;
  double ne = 0.0;
  Phase phase = Phase::baseline;
  std::vector<Element> batch;  // shocked or restored at this step
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  std::size_t t0 = 0;
  std::size_t td = 0;   // last sample before the first shock
  std::size_t tr = 0;   // last shock sample (lowest point of the protocol)
  std::size_t trs = 0;  // last recovery sample

  [[nodiscard]] double ne0() const { return steps.at(t0).ne; }
  [[nodiscard]] bool has_recovery() const { return trs > tr; }

  // NE samples t_d..t_r (shock) or t_r..t_rs (recovery), endpoints included.
  [[nodiscard]] std::vector<double> phase_samples(Phase p) const {
    std::size_t from = p == Phase::recovery ? tr : td;
    std::size_t to = p == Phase::recovery ? trs : tr;
    std::vector<double> out;
    for (std::size_t t = from; t <= to && t < steps.size(); ++t) out.push_back(steps[t].ne);
    return out;
  }

  // Trajectory from raw samples: one baseline sample followed by
  // `shock_steps` shock samples and the rest recovery samples.
  static Trajectory from_samples(const std::vector<double>& ne, std::size_t shock_steps) {
    if (ne.empty()) throw std::invalid_argument("trajectory needs a baseline sample");
    if (shock_steps + 1 > ne.size()) throw std::invalid_argument("more shock steps than samples");
    Trajectory tr;
    for (std::size_t t = 0; t < ne.size(); ++t) {
      Phase p = t == 0 ? Phase::baseline : (t <= shock_steps ? Phase::shock : Phase::recovery);
      tr.steps.push_back({t, ne[t], p, {}});
    }
    tr.t0 = 0;
    tr.td = 0;
    tr.tr = shock_steps;
    tr.trs = ne.size() - 1;
    return tr;
  }
};

// Lowest NE over (t_d, t_rs). Includes t_rs when there is no recovery phase
// or the open interval is empty.
inline double min_performance(const Trajectory& traj) {
  if (traj.tr <= traj.td) throw std::invalid_argument("trajectory has no shock step");
  std::size_t last = traj.has_recovery() && traj.trs > traj.td + 1 ? traj.trs - 1 : traj.trs;
  double r = traj.steps.at(traj.td + 1).ne;
  for (std::size_t t = traj.td + 1; t <= last; ++t) r = std::min(r, traj.steps[t].ne);
  return r;
}

// Forward differences NE(t_i) - NE(t_i - 1) within a phase.
inline std::vector<double> rate_of_change(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("rate of change needs at least two samples");
  std::vector<double> rates;
  rates.reserve(samples.size() - 1);
  for (std::size_t k = 1; k < samples.size(); ++k) rates.push_back(samples[k] - samples[k - 1]);
  return rates;
}

inline std::vector<double> rate_of_change(const Trajectory& traj, Phase phase) {
  auto s = traj.phase_samples(phase);
  return rate_of_change(std::span<const double>(s));
}

// Right-rectangle loss area sum (ne0 - NE(t)) over the phase samples that
// follow its opening sample. Accumulated in extended precision and rounded
// once.
inline double lone(std::span<const double> samples_after_start, double ne0) {
  long double area = 0.0L;
  for (double v : samples_after_start) area += static_cast<long double>(ne0) - static_cast<long double>(v);
  return static_cast<double>(area);
}

inline double lone(const Trajectory& traj, Phase phase) {
  auto s = traj.phase_samples(phase);
  if (s.empty()) throw std::invalid_argument("empty phase");
  return lone(std::span<const double>(s).subspan(1), traj.ne0());
}

struct ResilienceReport {
  double r = 0.0;
  std::vector<double> roc_ds;
  std::vector<double> roc_rs;
  double lone_ds = 0.0;
  double lone_rs = 0.0;
  double resilience = 0.0;
  double ne0 = 0.0;
  // False when the trajectory has no recovery phase; recovery fields are 0.
  bool complete = true;
};

inline ResilienceReport summarize(const Trajectory& traj) {
  ResilienceReport rep;
  rep.ne0 = traj.ne0();
  rep.r = min_performance(traj);
  rep.roc_ds = rate_of_change(traj, Phase::shock);
  rep.lone_ds = lone(traj, Phase::shock);
  rep.complete = traj.has_recovery();
  if (rep.complete) {
    rep.roc_rs = rate_of_change(traj, Phase::recovery);
    rep.lone_rs = lone(traj, Phase::recovery);
  }
  rep.resilience = rep.lone_ds + rep.lone_rs;
  return rep;
}

}  // namespace oiltrade
