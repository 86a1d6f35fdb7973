#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "warmstandby/intensity.hpp"
#include "warmstandby/rng.hpp"
#include "warmstandby/simulator.hpp"

namespace warmstandby {

struct CouplingOptions {
  double epsilon = 1.0;
  /// Also attempt at main-element failure epochs, into the all-failed fresh set.
  bool failure_channel = false;
  /// Quadrature tolerance for the residual-time densities.
  double density_tol = 1e-8;
};

enum class AttemptOutcome : std::uint8_t { missed_window, joint_hit, residuals_coupled };

enum class AttemptChannel : std::uint8_t { repair, failure };

struct Attempt {
  double window_start = 0.0;
  double window_end = 0.0;
  AttemptChannel channel = AttemptChannel::repair;
  AttemptOutcome outcome = AttemptOutcome::missed_window;
};

/// Both trajectories of one coupled run. After tau the two event lists are
/// identical.
struct CouplingRun {
  SamplePath y;
  SamplePath y_hat;
  std::optional<double> tau;
  std::vector<Attempt> attempts;

  std::size_t windows_hit() const;
};

/// Builds a successful coupling of the processes started at x0 and x0_hat.
///
/// Outside attempts each process is simulated by thinning; the candidate
/// clock is shared and acceptance uniforms are independent. Every repair of
/// the y-process's main element opens the window [theta_k, theta_k + eps].
/// The first time inside the window at which both processes sit in the
/// fresh set {i = j = 0, x < eps, y < eps} starts one attempt: the residual
/// times of main (resp. standby) in the two processes are drawn from a
/// pairwise maximal coupling of their densities, computed from the
/// intensities with flags frozen. Each process's next event is the smaller of
/// its two residuals. While those next events coincide in time and element,
/// the draw is repeated from the new states; once the full states agree the
/// run is coupled and one trajectory drives both. At the first disagreement
/// each process keeps its pending event and returns to thinning after it.
///
/// Each draw has exactly the marginal law of its own process, and latent
/// times are never discarded at the other process's events, so both
/// trajectories have the law of the uncoupled process.
CouplingRun run_coupled(const IntensityModel& model, const FullState& x0, const FullState& x0_hat,
                        double horizon, Rng& rng, const CouplingOptions& options);
CouplingRun run_coupled(const IntensityModel& model, const FullState& x0, const FullState& x0_hat,
                        double horizon, std::uint64_t seed, const CouplingOptions& options);

/// Run k uses Rng(master_seed, k, StreamDomain::coupling).
std::vector<CouplingRun> run_coupled_batch(const IntensityModel& model, const FullState& x0,
                                           const FullState& x0_hat, double horizon,
                                           std::size_t n_runs, std::uint64_t master_seed,
                                           const CouplingOptions& options, unsigned threads = 1);

struct TailPoint {
  double t = 0.0;
  double tail = 0.0;  ///< fraction of runs with tau > t (censored runs included)
  double std_error = 0.0;
  double ci_lo = 0.0;  ///< 95% Wilson interval
  double ci_hi = 0.0;
};

std::vector<TailPoint> coupling_tail(std::span<const CouplingRun> runs,
                                     std::span<const double> t_grid);

}  // namespace warmstandby
