#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "warmstandby/intensity.hpp"
#include "warmstandby/rng.hpp"

namespace warmstandby {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimConfig {
  double horizon = 10.0;
  std::size_t n_paths = 1000;
  std::uint64_t master_seed = 1;
  std::vector<double> time_grid;
  std::size_t hist_bins = 16;
  double bin_cap = 0.0;  ///< 0 selects 5 / min lower bound
  unsigned threads = 1;

  void validate() const;
};

enum class Transition : std::uint8_t { fail, repair };

struct Event {
  double t = 0.0;
  Component component = Component::main;
  Transition transition = Transition::fail;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Transition that element `c` undergoes from condition `cond`.
inline Transition pending_transition(Condition cond) {
  return cond == Condition::working ? Transition::fail : Transition::repair;
}

struct SamplePath {
  FullState x0;
  std::vector<Event> events;
  double horizon = 0.0;

  /// Right-continuous state at time t (events at exactly t are applied).
  FullState state_at(double t) const;
  /// States at a nondecreasing list of times, in one pass over the events.
  std::vector<FullState> states_at(std::span<const double> times) const;
};

struct Ensemble {
  FullState x0;
  double horizon = 0.0;
  std::vector<SamplePath> paths;
};

/// Main-element repair epochs theta_k and failure epochs theta'_k. A path
/// that starts with the main element working has theta_1 = 0.
struct RepairEpochs {
  std::vector<double> theta;
  std::vector<double> theta_prime;
};

/// Thinning against the homogeneous clock at the sum of the four upper bounds.
/// Throws SimulationError if an intensity leaves its declared bounds.
SamplePath simulate_path(const IntensityModel& model, const FullState& x0, double horizon,
                         Rng& rng);
SamplePath simulate_path(const IntensityModel& model, const FullState& x0, double horizon,
                         std::uint64_t path_seed);

/// Path k draws from Rng(master_seed, k, StreamDomain::path); the result does
/// not depend on config.threads.
Ensemble simulate_ensemble(const IntensityModel& model, const FullState& x0,
                           const SimConfig& config);

struct Estimate {
  double t = 0.0;
  double value = 0.0;
  double std_error = 0.0;
};

/// Fraction of paths with (i, j) != (1, 1), with binomial standard errors.
std::vector<Estimate> estimate_availability(const Ensemble& ensemble,
                                            std::span<const double> time_grid);

/// Fraction of paths in which element `c` works.
std::vector<Estimate> estimate_component_availability(const Ensemble& ensemble,
                                                      std::span<const double> time_grid,
                                                      Component c);

struct FlagDistributionEstimate {
  double t = 0.0;
  std::array<double, 4> p{};
  std::array<double, 4> std_error{};
  std::array<std::size_t, 4> counts{};
};

std::vector<FlagDistributionEstimate> estimate_flag_distribution(
    const Ensemble& ensemble, std::span<const double> time_grid);

/// Empirical law of the full state on {0,1}^2 x bins^2. Each elapsed-time axis
/// has `bins` equal cells on [0, cap) and one overflow cell for [cap, inf).
struct StateHistogram {
  std::size_t bins = 0;  ///< regular cells per axis (overflow not counted)
  double cap = 0.0;
  std::size_t samples = 0;
  std::vector<double> probability;

  std::size_t cells_per_axis() const { return bins + 1; }
  std::size_t index(std::size_t mode, std::size_t xb, std::size_t yb) const {
    return (mode * cells_per_axis() + xb) * cells_per_axis() + yb;
  }
};

StateHistogram state_histogram(const Ensemble& ensemble, double t, std::size_t bins, double cap);
StateHistogram state_histogram(std::span<const FullState> states, std::size_t bins, double cap);

/// Half the L1 distance between two histograms of identical shape. Binning
/// can only merge mass, so this never exceeds the distance between the
/// underlying laws (up to sampling noise).
double estimate_tv(const StateHistogram& a, const StateHistogram& b);
/// Multinomial standard error of estimate_tv, ignoring cell covariances.
double tv_standard_error(const StateHistogram& a, const StateHistogram& b);

RepairEpochs extract_epochs(const SamplePath& path);

struct CycleStatistics {
  std::size_t cycles = 0;    ///< paths contributing a first cycle
  std::size_t censored = 0;  ///< paths with fewer than two epochs before the horizon
  double mean_length = 0.0;
  double std_error = 0.0;
  double mean_cycles_per_path = 0.0;  ///< all complete cycles
};

/// Mean of theta_2 - theta_1, one sample per path. Pooling every complete
/// cycle would drop the long cycle cut by the horizon and bias the mean low.
CycleStatistics cycle_statistics(const Ensemble& ensemble);

/// Whether the path is in the fresh set {i = j = flag, x < eps, y < eps} at
/// some time in [start, start + eps].
bool hits_fresh_set(const SamplePath& path, double start, double eps,
                    Condition flag = Condition::working);

struct WindowHitStatistics {
  std::size_t windows = 0;
  std::size_t hits = 0;
  double frequency = 0.0;
  double std_error = 0.0;
};

/// Hit frequency of the all-working fresh set within [theta_k, theta_k + eps]
/// over genuine repair epochs (the theta_1 = 0 convention is skipped) whose
/// window fits in the horizon.
WindowHitStatistics fresh_set_window_hits(const Ensemble& ensemble, double eps);

}  // namespace warmstandby
