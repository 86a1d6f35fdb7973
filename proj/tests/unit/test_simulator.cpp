#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "warmstandby/bounds.hpp"
#include "warmstandby/exact_markov.hpp"
#include "warmstandby/simulator.hpp"

using namespace warmstandby;

namespace {

const ExpParams kReference{1.0, 2.0, 0.3, 0.6, 1.5};
const FullState kAllWorking{Condition::working, 0, Condition::working, 0};
const FullState kAllFailed{Condition::failed, 0, Condition::failed, 0};

SimConfig config(std::size_t n, double horizon, std::vector<double> grid, std::uint64_t seed = 1) {
  SimConfig c;
  c.n_paths = n;
  c.horizon = horizon;
  c.time_grid = std::move(grid);
  c.master_seed = seed;
  return c;
}

std::vector<double> uniform_grid(double step, int n) {
  std::vector<double> g;
  for (int k = 1; k <= n; ++k) g.push_back(step * k);
  return g;
}

}  // namespace

TEST_CASE("zero horizon leaves the initial state") {
  const auto m = IntensityModel::from_exp_params(kReference);
  const SamplePath p = simulate_path(m, kAllFailed, 0.0, 5u);
  CHECK(p.events.empty());
  CHECK(p.state_at(0.0) == kAllFailed);
}

TEST_CASE("paths replay to valid states with increasing event times") {
  const auto m = IntensityModel::from_exp_params(kReference);
  const SamplePath p = simulate_path(m, kAllWorking, 50.0, 11u);
  REQUIRE(p.events.size() > 20);
  FullState s = kAllWorking;
  double now = 0.0;
  for (const Event& e : p.events) {
    CHECK(e.t > now);
    CHECK(e.t <= 50.0);
    CHECK(e.transition == pending_transition(s.condition(e.component)));
    s = s.advanced(e.t - now);
    s.flip(e.component);
    now = e.t;
    CHECK(s.valid());
    CHECK(p.state_at(e.t) == s);
  }
  const std::vector<double> times{0.0, 3.3, 3.3, 17.0, 50.0};
  const auto states = p.states_at(times);
  for (std::size_t k = 0; k < times.size(); ++k) CHECK(states[k] == p.state_at(times[k]));
}

TEST_CASE("ensembles do not depend on the thread count") {
  const auto m = IntensityModel::from_exp_params(kReference);
  SimConfig c = config(300, 20.0, {1.0, 10.0}, 99);
  const Ensemble one = simulate_ensemble(m, kAllWorking, c);
  c.threads = 4;
  const Ensemble four = simulate_ensemble(m, kAllWorking, c);
  REQUIRE(one.paths.size() == four.paths.size());
  for (std::size_t k = 0; k < one.paths.size(); ++k) CHECK(one.paths[k].events == four.paths[k].events);
  c.master_seed = 100;
  CHECK_FALSE(simulate_ensemble(m, kAllWorking, c).paths[0].events == one.paths[0].events);
}

TEST_CASE("constant intensities reproduce the Kolmogorov solution") {
  const auto m = IntensityModel::from_exp_params(kReference);
  const auto grid = uniform_grid(0.5, 10);
  const Ensemble ens = simulate_ensemble(m, kAllWorking, config(20000, 5.0, grid, 2024));
  const auto exact = solve_kolmogorov(kReference, MarkovDist::point_mass(kState00), grid);
  const auto est = estimate_flag_distribution(ens, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (int s = 0; s < 4; ++s) {
      const double se = std::sqrt(exact[k].p[s] * (1 - exact[k].p[s]) / 20000.0);
      CHECK(std::abs(est[k].p[s] - exact[k].p[s]) <= 3 * se);
    }
  }
  const auto avail = estimate_availability(ens, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(std::abs(avail[k].value - (1 - exact[k].p11())) <= 3 * avail[k].std_error + 1e-12);
  }
}

TEST_CASE("availability at time zero") {
  const auto m = IntensityModel::from_exp_params(kReference);
  const double zero = 0.0;
  const Ensemble ens = simulate_ensemble(m, kAllWorking, config(100, 1.0, {0.0}));
  const auto a = estimate_availability(ens, {&zero, 1});
  CHECK(a[0].value == 1.0);
  CHECK(a[0].std_error == 0.0);
}

TEST_CASE("inter-event times of constant intensities are exponential") {
  // lambda2 equals the loaded rate so every sojourn is memoryless.
  const ExpParams p{1.0, 2.0, 0.5, 0.5, 1.5};
  const auto m = IntensityModel::from_exp_params(p);
  const SamplePath path = simulate_path(m, kAllWorking, 15000.0, 77u);

  for (Component c : {Component::main, Component::standby}) {
    std::vector<double> up, down;
    double last = 0.0;
    for (const Event& e : path.events) {
      if (e.component != c) continue;
      (e.transition == Transition::fail ? up : down).push_back(e.t - last);
      last = e.t;
    }
    up.resize(std::min<std::size_t>(up.size(), 10000));
    down.resize(std::min<std::size_t>(down.size(), 10000));
    REQUIRE(up.size() >= 5000);
    REQUIRE(down.size() >= 5000);
    const double fail_rate = c == Component::main ? p.lambda1 : p.lambda2;
    const double repair_rate = c == Component::main ? p.mu1 : p.mu2;
    CHECK(oracle::ks_statistic(up, [&](double t) { return 1 - std::exp(-fail_rate * t); }) <
          oracle::ks_critical_1pct(up.size()));
    CHECK(oracle::ks_statistic(down, [&](double t) { return 1 - std::exp(-repair_rate * t); }) <
          oracle::ks_critical_1pct(down.size()));
  }
}

TEST_CASE("fast main repair drives the down fraction to zero") {
  const std::vector<double> grid = uniform_grid(0.5, 20);
  double prev = 1.0;
  for (double mu1 : {1.0, 10.0, 100.0, 1000.0}) {
    const auto m = IntensityModel::from_exp_params({1.0, mu1, 0.3, 0.6, 1.5});
    const Ensemble ens = simulate_ensemble(m, kAllWorking, config(2000, 10.0, grid, 5));
    const auto up = estimate_component_availability(ens, grid, Component::main);
    double down = 0.0;
    for (const auto& e : up) down += (1 - e.value) / static_cast<double>(up.size());
    CHECK(down <= prev);
    prev = down;
  }
  CHECK(prev < 0.005);
}

TEST_CASE("bounds violations abort the path") {
  const IntensityBounds b{{0.5, 2}, {0.5, 2}, {0.5, 2}, {0.5, 2}};
  auto c = [](double r) { return ConstantPerMode{{r, r, r, r}}; };
  const CustomIntensity runaway{[](const FullState& s) { return 1.0 + s.x; }};
  const IntensityModel m(runaway, c(1), c(1), c(1), b);
  CHECK_THROWS_AS(simulate_path(m, kAllWorking, 1000.0, 3u), SimulationError);
  SimConfig cfg = config(10, 1000.0, {1.0});
  try {
    simulate_ensemble(m, kAllWorking, cfg);
    FAIL("expected a SimulationError");
  } catch (const SimulationError& e) {
    CHECK(std::string(e.what()).find("path 0") != std::string::npos);
  }
}

TEST_CASE("SimConfig validation") {
  CHECK_THROWS_AS(config(0, 1.0, {0.5}).validate(), DomainError);
  CHECK_THROWS_AS(config(1, 0.0, {}).validate(), DomainError);
  CHECK_THROWS_AS(config(1, 1.0, {2.0}).validate(), DomainError);
  CHECK_THROWS_AS(config(1, 1.0, {0.5, 0.2}).validate(), DomainError);
  CHECK_NOTHROW(config(1, 1.0, {0.0, 1.0}).validate());
}

TEST_CASE("histograms and total variation") {
  const auto m = IntensityModel::from_exp_params(kReference);
  const Ensemble a = simulate_ensemble(m, kAllWorking, config(5000, 3.0, {3.0}, 8));
  const Ensemble a2 = simulate_ensemble(m, kAllWorking, config(5000, 3.0, {3.0}, 8));
  const auto h = state_histogram(a, 3.0, 16, 5.0 / 0.3);
  CHECK(h.probability.size() == 4 * 17 * 17);
  CHECK(std::abs(std::accumulate(h.probability.begin(), h.probability.end(), 0.0) - 1.0) <= 1e-12);
  for (double p : h.probability) CHECK(p >= 0.0);
  CHECK(estimate_tv(h, state_histogram(a2, 3.0, 16, 5.0 / 0.3)) == 0.0);

  const std::vector<FullState> far{{Condition::working, 100, Condition::working, 100}};
  const auto overflow = state_histogram(far, 4, 1.0);
  CHECK(overflow.probability[overflow.index(0, 4, 4)] == 1.0);

  const Ensemble up = simulate_ensemble(m, kAllWorking, config(50, 1e-9, {0.0}));
  const Ensemble down = simulate_ensemble(m, kAllFailed, config(50, 1e-9, {0.0}));
  CHECK(estimate_tv(state_histogram(up, 0.0, 8, 1.0), state_histogram(down, 0.0, 8, 1.0)) == 1.0);
  CHECK(tv_standard_error(state_histogram(up, 0.0, 8, 1.0), state_histogram(down, 0.0, 8, 1.0)) ==
        0.0);
}

TEST_CASE("histograms from different starts merge at large times") {
  const auto m = IntensityModel::from_exp_params(kReference);
  const double t = 20.0 / 0.3;
  const Ensemble a = simulate_ensemble(m, kAllWorking, config(100000, t, {t}, 31));
  const Ensemble b = simulate_ensemble(m, kAllFailed, config(100000, t, {t}, 32));
  const double cap = 5.0 / 0.3;
  const double tv = estimate_tv(state_histogram(a, t, 16, cap), state_histogram(b, t, 16, cap));
  CHECK(tv <= 0.02);
  const double early = estimate_tv(state_histogram(a, 0.5, 16, cap), state_histogram(b, 0.5, 16, cap));
  CHECK(early > tv);
}

TEST_CASE("repair epochs") {
  SamplePath p;
  p.x0 = kAllWorking;
  p.horizon = 10;
  CHECK(extract_epochs(p).theta == std::vector<double>{0.0});
  CHECK(extract_epochs(p).theta_prime.empty());
  p.events = {{1.0, Component::standby, Transition::fail},
              {2.0, Component::main, Transition::fail},
              {2.5, Component::standby, Transition::repair},
              {3.0, Component::main, Transition::repair}};
  const RepairEpochs e = extract_epochs(p);
  CHECK(e.theta == std::vector<double>{0.0, 3.0});
  CHECK(e.theta_prime == std::vector<double>{2.0});
  p.x0 = kAllFailed;
  p.events = {{0.5, Component::main, Transition::repair}};
  CHECK(extract_epochs(p).theta == std::vector<double>{0.5});
}

TEST_CASE("fresh-set hits on a constructed path") {
  SamplePath p;
  p.x0 = {Condition::working, 0, Condition::failed, 4.0};
  p.horizon = 10;
  p.events = {{0.3, Component::standby, Transition::repair}};
  CHECK(hits_fresh_set(p, 0.0, 0.5));
  CHECK_FALSE(hits_fresh_set(p, 0.0, 0.2));
  p.events.insert(p.events.begin(), {0.1, Component::main, Transition::fail});
  CHECK_FALSE(hits_fresh_set(p, 0.0, 0.5));
  SamplePath q;
  q.x0 = kAllFailed;
  q.horizon = 1;
  CHECK(hits_fresh_set(q, 0.0, 0.1, Condition::failed));
  CHECK_FALSE(hits_fresh_set(q, 0.0, 0.1, Condition::working));
}

TEST_CASE("cycle statistics and window hits on the reference model") {
  const auto m = IntensityModel::from_exp_params(kReference);
  const Ensemble ens = simulate_ensemble(m, kAllWorking, config(20000, 100.0, {100.0}, 404));
  const CycleStatistics cs = cycle_statistics(ens);
  CHECK(cs.censored == 0);
  CHECK(cs.cycles == 20000);
  CHECK(cs.mean_length <= 1 / kReference.lambda1 + 1 / kReference.mu1 + 3 * cs.std_error);
  const double renewal = 100.0 / (1 / kReference.lambda1 + 1 / kReference.mu1);
  CHECK(std::abs(cs.mean_cycles_per_path - renewal) <= 0.1 * renewal);

  const auto& b = m.bounds();
  double prev = 0.0;
  for (double eps : {0.1, 0.5, 1.0}) {
    const WindowHitStatistics w = fresh_set_window_hits(ens, eps);
    CHECK(w.windows > 100000);
    CHECK(w.frequency >= fresh_set_hit_probability(eps, b) - 3 * w.std_error);
    CHECK(w.frequency > prev);
    prev = w.frequency;
  }
}

TEST_CASE("lone main element follows the single-element law") {
  const ExpParams lone{1.0, 2.0, 1e-9, 1e-9, 1.0};
  const auto m = IntensityModel::from_exp_params(lone);
  const auto grid = uniform_grid(0.25, 20);
  const Ensemble ens = simulate_ensemble(m, kAllWorking, config(20000, 5.0, grid, 12));
  const auto est = estimate_component_availability(ens, grid, Component::main);
  const auto sys = estimate_availability(ens, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double exact = transient_availability_single(1.0, 2.0, grid[k]);
    CHECK(std::abs(est[k].value - exact) <= 3 * est[k].std_error);
    CHECK(sys[k].value == 1.0);
  }
}
