#include "warmstandby/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "warmstandby/maximal_coupling.hpp"
#include "warmstandby/parallel.hpp"

namespace warmstandby {

std::size_t CouplingRun::windows_hit() const {
  return static_cast<std::size_t>(std::count_if(attempts.begin(), attempts.end(), [](const auto& a) {
    return a.outcome != AttemptOutcome::missed_window;
  }));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundsRelTol = 1e-12;

struct PendingEvent {
  double t;
  Component component;
};

struct Side {
  FullState state;
  SamplePath path;
  std::optional<PendingEvent> pending;
};

struct Window {
  double start;
  double end;
  AttemptChannel channel;
};

bool in_fresh_set(const FullState& s, double eps, Condition flag) {
  return s.main == flag && s.standby == flag && s.x < eps && s.y < eps;
}

class CoupledRunner {
 public:
  CoupledRunner(const IntensityModel& model, const FullState& x0, const FullState& x0_hat,
                double horizon, Rng& rng, const CouplingOptions& options)
      : model_(model),
        bounds_(model.bounds()),
        dominating_(bounds_.dominating_rate()),
        horizon_(horizon),
        rng_(rng),
        options_(options),
        quad_{options.density_tol, 1'000'000, 50} {
    y_.state = x0;
    y_.path = {x0, {}, horizon};
    h_.state = x0_hat;
    h_.path = {x0_hat, {}, horizon};
  }

  CouplingRun run() {
    if (y_.state == h_.state) {
      run_.tau = 0.0;
      mirror_until_horizon();
      return finish();
    }
    if (y_.state.main == Condition::working) open_window(0.0, AttemptChannel::repair);
    if (options_.failure_channel && y_.state.main == Condition::failed) {
      open_window(0.0, AttemptChannel::failure);
    }
    try_attempts();
    double candidate = now_ + rng_.exponential(dominating_);

    while (!run_.tau && !stop_) {
      const double t_y = y_.pending ? y_.pending->t : kInf;
      const double t_h = h_.pending ? h_.pending->t : kInf;
      const double next = std::min({candidate, t_y, t_h});
      if (next > horizon_) break;
      expire_windows(next);
      advance_to(next);
      if (next == t_y || next == t_h) {
        if (next == t_y) fire_pending(y_, true);
        if (next == t_h) fire_pending(h_, false);
      } else {
        if (!y_.pending) thin_step(y_, true);
        if (!h_.pending) thin_step(h_, false);
        candidate = now_ + rng_.exponential(dominating_);
      }
      try_attempts();
    }
    if (run_.tau) mirror_until_horizon();
    return finish();
  }

 private:
  void advance_to(double t) {
    y_.state = y_.state.advanced(t - now_);
    h_.state = h_.state.advanced(t - now_);
    now_ = t;
  }

  void apply(Side& side, bool is_y, Component c) {
    const Transition tr = pending_transition(side.state.condition(c));
    side.path.events.push_back({now_, c, tr});
    side.state.flip(c);
    if (is_y && c == Component::main) {
      if (tr == Transition::repair) open_window(now_, AttemptChannel::repair);
      if (tr == Transition::fail && options_.failure_channel) {
        open_window(now_, AttemptChannel::failure);
      }
    }
  }

  void fire_pending(Side& side, bool is_y) {
    const Component c = side.pending->component;
    side.pending.reset();
    apply(side, is_y, c);
  }

  void check_bounds(Component c, const FullState& s, double value) const {
    const RateBounds& b = bounds_.active(c, s.condition(c));
    if (!b.contains(value, kBoundsRelTol)) {
      throw SimulationError("coupled run: intensity " + std::to_string(value) +
                            " outside declared bounds at state " + to_string(s));
    }
  }

  void thin_step(Side& side, bool is_y) {
    const double a_main = model_.rate(Component::main, side.state);
    const double a_standby = model_.rate(Component::standby, side.state);
    check_bounds(Component::main, side.state, a_main);
    check_bounds(Component::standby, side.state, a_standby);
    const double u = rng_.uniform() * dominating_;
    if (u < a_main) {
      apply(side, is_y, Component::main);
    } else if (u < a_main + a_standby) {
      apply(side, is_y, Component::standby);
    }
  }

  // Windows: at most one open per channel; a window is closed by its
  // attempt, by expiry, or by the next epoch of the same channel.
  std::optional<Window>& slot(AttemptChannel ch) {
    return ch == AttemptChannel::repair ? repair_window_ : failure_window_;
  }

  void open_window(double t, AttemptChannel ch) {
    auto& w = slot(ch);
    if (w) record(*w, AttemptOutcome::missed_window);
    w = Window{t, t + options_.epsilon, ch};
  }

  void expire_windows(double t) {
    for (auto* w : {&repair_window_, &failure_window_}) {
      if (*w && t > (*w)->end) {
        record(**w, AttemptOutcome::missed_window);
        w->reset();
      }
    }
  }

  void record(const Window& w, AttemptOutcome outcome) {
    run_.attempts.push_back({w.start, w.end, w.channel, outcome});
  }

  void try_attempts() {
    for (AttemptChannel ch : {AttemptChannel::repair, AttemptChannel::failure}) {
      if (run_.tau) return;
      auto& w = slot(ch);
      if (!w || y_.pending || h_.pending || now_ > w->end) continue;
      const Condition flag = ch == AttemptChannel::repair ? Condition::working : Condition::failed;
      if (!in_fresh_set(y_.state, options_.epsilon, flag) ||
          !in_fresh_set(h_.state, options_.epsilon, flag)) {
        continue;
      }
      const Window attempted = *w;
      w.reset();
      const bool coupled = coupling_chain();
      record(attempted, coupled ? AttemptOutcome::residuals_coupled : AttemptOutcome::joint_hit);
    }
  }

  ContinuousLaw residual_law(const FullState& s, Component c) const {
    const double hi = bounds_.active(c, s.condition(c)).hi;
    const IntensityModel* model = &model_;
    const QuadratureOptions quad = quad_;
    auto hazard = [model, s, c](double v) { return model->rate(c, s.advanced(v)); };
    ContinuousLaw law;
    law.density = [hazard, quad](double v) {
      return v < 0.0 ? 0.0 : density_from_intensity(hazard, v, quad);
    };
    // Thinning for a single duration whose hazard is bounded by hi.
    law.sample = [hazard, hi](Rng& rng) {
      double v = 0.0;
      while (true) {
        v += rng.exponential(hi);
        if (rng.uniform() * hi <= hazard(v)) return v;
      }
    };
    return law;
  }

  struct Latent {
    double t;
    Component component;
    friend bool operator==(const Latent&, const Latent&) = default;
  };

  static Latent earliest(double main_time, double standby_time) {
    return main_time <= standby_time ? Latent{main_time, Component::main}
                                     : Latent{standby_time, Component::standby};
  }

  // Returns true once the two full states coincide.
  bool coupling_chain() {
    while (true) {
      const ContinuousLaw mains[] = {residual_law(y_.state, Component::main),
                                     residual_law(h_.state, Component::main)};
      const ContinuousLaw standbys[] = {residual_law(y_.state, Component::standby),
                                        residual_law(h_.state, Component::standby)};
      const auto main_pair = sample_maximal_coupling(mains, rng_);
      const auto standby_pair = sample_maximal_coupling(standbys, rng_);
      const Latent next_y = earliest(main_pair.values[0], standby_pair.values[0]);
      const Latent next_h = earliest(main_pair.values[1], standby_pair.values[1]);

      if (!(next_y == next_h)) {
        y_.pending = PendingEvent{now_ + next_y.t, next_y.component};
        h_.pending = PendingEvent{now_ + next_h.t, next_h.component};
        return false;
      }
      const double t = now_ + next_y.t;
      if (t > horizon_) {
        // Censored mid-chain; the shared event lies beyond the horizon.
        now_ = horizon_;
        stop_ = true;
        return false;
      }
      expire_windows(t);
      advance_to(t);
      apply(y_, true, next_y.component);
      apply(h_, false, next_h.component);
      if (y_.state == h_.state) {
        run_.tau = now_;
        return true;
      }
    }
  }

  void mirror_until_horizon() {
    // One event stream drives both trajectories from here on. A window still
    // open from an earlier epoch never got its attempt; one opened by the
    // coupling event itself is not an attempt window.
    for (auto* w : {&repair_window_, &failure_window_}) {
      if (*w && (*w)->start < now_) record(**w, AttemptOutcome::missed_window);
      w->reset();
    }
    double t = now_;
    while (true) {
      const double dt = rng_.exponential(dominating_);
      if (t + dt > horizon_) break;
      t += dt;
      advance_to(t);
      const double a_main = model_.rate(Component::main, y_.state);
      const double a_standby = model_.rate(Component::standby, y_.state);
      check_bounds(Component::main, y_.state, a_main);
      check_bounds(Component::standby, y_.state, a_standby);
      const double u = rng_.uniform() * dominating_;
      Component c;
      if (u < a_main) {
        c = Component::main;
      } else if (u < a_main + a_standby) {
        c = Component::standby;
      } else {
        continue;
      }
      const Transition tr = pending_transition(y_.state.condition(c));
      y_.path.events.push_back({t, c, tr});
      h_.path.events.push_back({t, c, tr});
      y_.state.flip(c);
      h_.state.flip(c);
    }
  }

  CouplingRun finish() {
    for (auto* w : {&repair_window_, &failure_window_}) {
      if (*w) record(**w, AttemptOutcome::missed_window);
      w->reset();
    }
    std::stable_sort(run_.attempts.begin(), run_.attempts.end(),
                     [](const Attempt& a, const Attempt& b) { return a.window_start < b.window_start; });
    run_.y = std::move(y_.path);
    run_.y_hat = std::move(h_.path);
    return std::move(run_);
  }

  const IntensityModel& model_;
  const IntensityBounds& bounds_;
  double dominating_;
  double horizon_;
  Rng& rng_;
  CouplingOptions options_;
  QuadratureOptions quad_;

  Side y_, h_;
  double now_ = 0.0;
  bool stop_ = false;
  std::optional<Window> repair_window_, failure_window_;
  CouplingRun run_;
};

}  // namespace

CouplingRun run_coupled(const IntensityModel& model, const FullState& x0, const FullState& x0_hat,
                        double horizon, Rng& rng, const CouplingOptions& options) {
  x0.validate();
  x0_hat.validate();
  if (!(horizon >= 0.0)) throw DomainError("run_coupled: horizon must be nonnegative");
  if (!(options.epsilon > 0.0)) throw DomainError("run_coupled: epsilon must be positive");
  return CoupledRunner(model, x0, x0_hat, horizon, rng, options).run();
}

CouplingRun run_coupled(const IntensityModel& model, const FullState& x0, const FullState& x0_hat,
                        double horizon, std::uint64_t seed, const CouplingOptions& options) {
  Rng rng(seed, 0, StreamDomain::coupling);
  return run_coupled(model, x0, x0_hat, horizon, rng, options);
}

std::vector<CouplingRun> run_coupled_batch(const IntensityModel& model, const FullState& x0,
                                           const FullState& x0_hat, double horizon,
                                           std::size_t n_runs, std::uint64_t master_seed,
                                           const CouplingOptions& options, unsigned threads) {
  std::vector<CouplingRun> runs(n_runs);
  parallel_for(n_runs, threads, [&](std::size_t k) {
    Rng rng(master_seed, k, StreamDomain::coupling);
    try {
      runs[k] = run_coupled(model, x0, x0_hat, horizon, rng, options);
    } catch (const std::exception& e) {
      throw SimulationError("coupled run " + std::to_string(k) + ": " + e.what());
    }
  });
  return runs;
}

std::vector<TailPoint> coupling_tail(std::span<const CouplingRun> runs,
                                     std::span<const double> t_grid) {
  if (runs.empty()) throw DomainError("coupling_tail: no runs");
  const double n = static_cast<double>(runs.size());
  constexpr double z = 1.959963984540054;
  std::vector<TailPoint> out;
  out.reserve(t_grid.size());
  for (const double t : t_grid) {
    const auto above = std::count_if(runs.begin(), runs.end(),
                                     [t](const CouplingRun& r) { return !r.tau || *r.tau > t; });
    const double p = static_cast<double>(above) / n;
    const double centre = (p + z * z / (2 * n)) / (1 + z * z / n);
    const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n);
    out.push_back({t, p, std::sqrt(p * (1 - p) / n), std::max(0.0, centre - half),
                   std::min(1.0, centre + half)});
  }
  return out;
}

}  // namespace warmstandby
