#include "warmstandby/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "warmstandby/parallel.hpp"

namespace warmstandby {

void SimConfig::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be positive");
  if (n_paths < 1) throw DomainError("n_paths must be >= 1");
  if (hist_bins < 1) throw DomainError("hist_bins must be >= 1");
  if (bin_cap < 0.0) throw DomainError("bin_cap must be nonnegative");
  for (std::size_t k = 0; k < time_grid.size(); ++k) {
    if (!(time_grid[k] >= 0.0 && time_grid[k] <= horizon)) {
      throw DomainError("time_grid must lie in [0, horizon]");
    }
    if (k > 0 && !(time_grid[k] > time_grid[k - 1])) {
      throw DomainError("time_grid must be strictly increasing");
    }
  }
}

FullState SamplePath::state_at(double t) const {
  FullState s = x0;
  double now = 0.0;
  for (const Event& e : events) {
    if (e.t > t) break;
    s = s.advanced(e.t - now);
    s.flip(e.component);
    now = e.t;
  }
  return s.advanced(t - now);
}

std::vector<FullState> SamplePath::states_at(std::span<const double> times) const {
  std::vector<FullState> out;
  out.reserve(times.size());
  FullState s = x0;
  double now = 0.0;
  std::size_t next = 0;
  for (const double t : times) {
    while (next < events.size() && events[next].t <= t) {
      s = s.advanced(events[next].t - now);
      s.flip(events[next].component);
      now = events[next].t;
      ++next;
    }
    out.push_back(s.advanced(t - now));
  }
  return out;
}

namespace {

constexpr double kBoundsRelTol = 1e-12;

[[noreturn]] void bounds_violation(Component c, const FullState& s, double value,
                                   const RateBounds& b) {
  const char* name = c == Component::main ? (s.main == Condition::working ? "lambda1" : "mu1")
                                          : (s.standby == Condition::working ? "lambda2" : "mu2");
  throw SimulationError(std::string("intensity ") + name + " = " + std::to_string(value) +
                        " outside declared bounds [" + std::to_string(b.lo) + ", " +
                        std::to_string(b.hi) + "] at state " + to_string(s));
}

}  // namespace

SamplePath simulate_path(const IntensityModel& model, const FullState& x0, double horizon,
                         Rng& rng) {
  x0.validate();
  if (!(horizon >= 0.0)) throw DomainError("simulate_path: horizon must be nonnegative");
  const IntensityBounds& b = model.bounds();
  const double dominating = b.dominating_rate();

  SamplePath path{x0, {}, horizon};
  FullState s = x0;
  double t = 0.0;
  while (true) {
    const double dt = rng.exponential(dominating);
    if (t + dt > horizon) break;
    t += dt;
    s = s.advanced(dt);
    const double a_main = model.rate(Component::main, s);
    const double a_standby = model.rate(Component::standby, s);
    const RateBounds& bm = b.active(Component::main, s.main);
    const RateBounds& bs = b.active(Component::standby, s.standby);
    if (!bm.contains(a_main, kBoundsRelTol)) bounds_violation(Component::main, s, a_main, bm);
    if (!bs.contains(a_standby, kBoundsRelTol)) {
      bounds_violation(Component::standby, s, a_standby, bs);
    }
    const double u = rng.uniform() * dominating;
    Component c;
    if (u < a_main) {
      c = Component::main;
    } else if (u < a_main + a_standby) {
      c = Component::standby;
    } else {
      continue;
    }
    path.events.push_back({t, c, pending_transition(s.condition(c))});
    s.flip(c);
  }
  return path;
}

SamplePath simulate_path(const IntensityModel& model, const FullState& x0, double horizon,
                         std::uint64_t path_seed) {
  Rng rng(path_seed, 0, StreamDomain::path);
  return simulate_path(model, x0, horizon, rng);
}

Ensemble simulate_ensemble(const IntensityModel& model, const FullState& x0,
                           const SimConfig& config) {
  config.validate();
  Ensemble ensemble{x0, config.horizon, std::vector<SamplePath>(config.n_paths)};
  parallel_for(config.n_paths, config.threads, [&](std::size_t k) {
    Rng rng(config.master_seed, k, StreamDomain::path);
    try {
      ensemble.paths[k] = simulate_path(model, x0, config.horizon, rng);
    } catch (const std::exception& e) {
      throw SimulationError("path " + std::to_string(k) + ": " + e.what());
    }
  });
  return ensemble;
}

namespace {

void check_grid(const Ensemble& ensemble, std::span<const double> grid) {
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] >= 0.0 && grid[k] <= ensemble.horizon)) {
      throw DomainError("time grid must lie within [0, horizon]");
    }
    if (k > 0 && grid[k] < grid[k - 1]) throw DomainError("time grid must be sorted");
  }
  if (ensemble.paths.empty()) throw DomainError("empty ensemble");
}

template <class Pred>
std::vector<Estimate> fraction_where(const Ensemble& ensemble, std::span<const double> grid,
                                     Pred pred) {
  check_grid(ensemble, grid);
  std::vector<std::size_t> hits(grid.size(), 0);
  for (const SamplePath& path : ensemble.paths) {
    const auto states = path.states_at(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (pred(states[k])) ++hits[k];
    }
  }
  const double n = static_cast<double>(ensemble.paths.size());
  std::vector<Estimate> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double p = static_cast<double>(hits[k]) / n;
    out[k] = {grid[k], p, std::sqrt(p * (1.0 - p) / n)};
  }
  return out;
}

}  // namespace

std::vector<Estimate> estimate_availability(const Ensemble& ensemble,
                                            std::span<const double> time_grid) {
  return fraction_where(ensemble, time_grid, [](const FullState& s) {
    return !(s.main == Condition::failed && s.standby == Condition::failed);
  });
}

std::vector<Estimate> estimate_component_availability(const Ensemble& ensemble,
                                                      std::span<const double> time_grid,
                                                      Component c) {
  return fraction_where(ensemble, time_grid,
                        [c](const FullState& s) { return s.condition(c) == Condition::working; });
}

std::vector<FlagDistributionEstimate> estimate_flag_distribution(
    const Ensemble& ensemble, std::span<const double> time_grid) {
  check_grid(ensemble, time_grid);
  std::vector<FlagDistributionEstimate> out(time_grid.size());
  for (const SamplePath& path : ensemble.paths) {
    const auto states = path.states_at(time_grid);
    for (std::size_t k = 0; k < time_grid.size(); ++k) ++out[k].counts[states[k].mode()];
  }
  const double n = static_cast<double>(ensemble.paths.size());
  for (std::size_t k = 0; k < time_grid.size(); ++k) {
    out[k].t = time_grid[k];
    for (std::size_t m = 0; m < 4; ++m) {
      const double p = static_cast<double>(out[k].counts[m]) / n;
      out[k].p[m] = p;
      out[k].std_error[m] = std::sqrt(p * (1.0 - p) / n);
    }
  }
  return out;
}

StateHistogram state_histogram(std::span<const FullState> states, std::size_t bins, double cap) {
  if (bins < 1) throw DomainError("state_histogram: bins must be >= 1");
  if (!(cap > 0.0)) throw DomainError("state_histogram: cap must be positive");
  if (states.empty()) throw DomainError("state_histogram: no samples");
  StateHistogram h;
  h.bins = bins;
  h.cap = cap;
  h.samples = states.size();
  h.probability.assign(4 * h.cells_per_axis() * h.cells_per_axis(), 0.0);
  const double width = cap / static_cast<double>(bins);
  auto cell = [&](double v) {
    if (v >= cap) return bins;
    return std::min(static_cast<std::size_t>(v / width), bins - 1);
  };
  std::vector<std::size_t> counts(h.probability.size(), 0);
  for (const FullState& s : states) ++counts[h.index(s.mode(), cell(s.x), cell(s.y))];
  const double n = static_cast<double>(states.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    h.probability[k] = static_cast<double>(counts[k]) / n;
  }
  return h;
}

StateHistogram state_histogram(const Ensemble& ensemble, double t, std::size_t bins, double cap) {
  const double grid[] = {t};
  check_grid(ensemble, grid);
  std::vector<FullState> states;
  states.reserve(ensemble.paths.size());
  for (const SamplePath& path : ensemble.paths) states.push_back(path.state_at(t));
  return state_histogram(states, bins, cap);
}

double estimate_tv(const StateHistogram& a, const StateHistogram& b) {
  if (a.bins != b.bins || a.cap != b.cap || a.probability.size() != b.probability.size()) {
    throw DomainError("estimate_tv: histograms have different shapes");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < a.probability.size(); ++k) {
    sum += std::abs(a.probability[k] - b.probability[k]);
  }
  return std::min(1.0, 0.5 * sum);
}

double tv_standard_error(const StateHistogram& a, const StateHistogram& b) {
  if (a.probability.size() != b.probability.size()) {
    throw DomainError("tv_standard_error: histograms have different shapes");
  }
  const double na = static_cast<double>(a.samples);
  const double nb = static_cast<double>(b.samples);
  double var = 0.0;
  for (std::size_t k = 0; k < a.probability.size(); ++k) {
    const double pa = a.probability[k], pb = b.probability[k];
    var += pa * (1.0 - pa) / na + pb * (1.0 - pb) / nb;
  }
  return 0.5 * std::sqrt(var);
}

RepairEpochs extract_epochs(const SamplePath& path) {
  RepairEpochs epochs;
  if (path.x0.main == Condition::working) epochs.theta.push_back(0.0);
  for (const Event& e : path.events) {
    if (e.component != Component::main) continue;
    (e.transition == Transition::repair ? epochs.theta : epochs.theta_prime).push_back(e.t);
  }
  return epochs;
}

CycleStatistics cycle_statistics(const Ensemble& ensemble) {
  CycleStatistics stats;
  double sum = 0.0, sum_sq = 0.0;
  std::size_t all_cycles = 0;
  for (const SamplePath& path : ensemble.paths) {
    const RepairEpochs epochs = extract_epochs(path);
    if (epochs.theta.size() < 2) {
      ++stats.censored;
      continue;
    }
    all_cycles += epochs.theta.size() - 1;
    const double d = epochs.theta[1] - epochs.theta[0];
    sum += d;
    sum_sq += d * d;
    ++stats.cycles;
  }
  if (!ensemble.paths.empty()) {
    stats.mean_cycles_per_path =
        static_cast<double>(all_cycles) / static_cast<double>(ensemble.paths.size());
  }
  if (stats.cycles > 0) {
    const double n = static_cast<double>(stats.cycles);
    stats.mean_length = sum / n;
    const double var = stats.cycles > 1 ? (sum_sq - n * stats.mean_length * stats.mean_length) /
                                              (n - 1.0)
                                        : 0.0;
    stats.std_error = std::sqrt(std::max(var, 0.0) / n);
  }
  return stats;
}

bool hits_fresh_set(const SamplePath& path, double start, double eps, Condition flag) {
  auto inside = [&](const FullState& s) {
    return s.main == flag && s.standby == flag && s.x < eps && s.y < eps;
  };
  // Elapsed times only grow between events, so the set can only be entered at
  // the window start or at an event inside the window.
  FullState s = path.state_at(start);
  if (inside(s)) return true;
  double now = start;
  for (const Event& e : path.events) {
    if (e.t <= start) continue;
    if (e.t > start + eps) break;
    s = s.advanced(e.t - now);
    s.flip(e.component);
    now = e.t;
    if (inside(s)) return true;
  }
  return false;
}

WindowHitStatistics fresh_set_window_hits(const Ensemble& ensemble, double eps) {
  if (!(eps > 0.0)) throw DomainError("fresh_set_window_hits: eps must be positive");
  auto inside = [eps](const FullState& s) {
    return s.main == Condition::working && s.standby == Condition::working && s.x < eps &&
           s.y < eps;
  };
  WindowHitStatistics stats;
  std::vector<FullState> after;  // state right after each event
  for (const SamplePath& path : ensemble.paths) {
    after.clear();
    FullState s = path.x0;
    double now = 0.0;
    for (const Event& e : path.events) {
      s = s.advanced(e.t - now);
      s.flip(e.component);
      now = e.t;
      after.push_back(s);
    }
    for (std::size_t k = 0; k < path.events.size(); ++k) {
      const Event& e = path.events[k];
      if (e.component != Component::main || e.transition != Transition::repair) continue;
      if (e.t + eps > path.horizon) break;
      ++stats.windows;
      bool hit = inside(after[k]);
      for (std::size_t m = k + 1; !hit && m < path.events.size(); ++m) {
        if (path.events[m].t > e.t + eps) break;
        hit = inside(after[m]);
      }
      if (hit) ++stats.hits;
    }
  }
  if (stats.windows > 0) {
    const double n = static_cast<double>(stats.windows);
    stats.frequency = static_cast<double>(stats.hits) / n;
    stats.std_error = std::sqrt(stats.frequency * (1.0 - stats.frequency) / n);
  }
  return stats;
}

}  // namespace warmstandby
