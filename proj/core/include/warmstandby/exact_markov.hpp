#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "warmstandby/error.hpp"

namespace warmstandby {

/// Rates of the exponential warm-standby model.
struct ExpParams {
  double lambda1;         ///< main element failure rate
  double mu1;             ///< main element repair rate
  double lambda2;         ///< standby failure rate while the main element works
  double lambda2_loaded;  ///< standby failure rate while the main element is down
  double mu2;             ///< standby repair rate

  /// Throws DomainError unless all five rates are positive and finite.
  void validate() const;
};

/// Index of a flag pair (i, j) in the fixed order (0,0), (1,0), (0,1), (1,1).
/// 0 means working, 1 means failed; i is the main element, j the standby.
constexpr std::size_t state_index(int i, int j) { return static_cast<std::size_t>(i + 2 * j); }

inline constexpr std::size_t kState00 = 0;
inline constexpr std::size_t kState10 = 1;
inline constexpr std::size_t kState01 = 2;
inline constexpr std::size_t kState11 = 3;

/// Distribution over the four flag states, same order as state_index.
struct MarkovDist {
  std::array<double, 4> p{};

  double p00() const { return p[kState00]; }
  double p10() const { return p[kState10]; }
  double p01() const { return p[kState01]; }
  double p11() const { return p[kState11]; }

  static MarkovDist point_mass(std::size_t state);
  void validate(double tol = 1e-12) const;
};

using Generator = Eigen::Matrix4d;

struct Spectrum {
  /// Sorted by decreasing real part; the first entry is the zero eigenvalue.
  std::array<std::complex<double>, 4> eigenvalues;

  bool contains(std::complex<double> value, double tol = 1e-9) const;
  /// Minus the largest real part among the nonzero eigenvalues: the exact
  /// asymptotic decay rate of the transient distribution.
  double spectral_gap() const;
};

/// Availability (mu + lambda e^{-(lambda+mu)t}) / (mu + lambda) of a single
/// repairable element that works at t = 0.
double transient_availability_single(double lambda, double mu, double t);

Generator generator_matrix(const ExpParams& params);

/// Forward Kolmogorov solution p(t) = p0 exp(Qt) on an increasing grid of
/// nonnegative times, by adaptive Cash-Karp Runge-Kutta with the probability
/// vector renormalized after every accepted step.
std::vector<MarkovDist> solve_kolmogorov(const ExpParams& params, const MarkovDist& p0,
                                         std::span<const double> t_grid);

/// Stationary law from the one-dimensional null space of Q^T.
MarkovDist stationary(const ExpParams& params);

Spectrum spectrum(const ExpParams& params);

/// 1 - p11(t).
double availability_exact(const ExpParams& params, const MarkovDist& p0, double t);

/// Compares the published closed-form eigenvalue and stationary-availability
/// expressions with the numerically computed ones. Diagnostic only; those
/// expressions are dimensionally inconsistent and never feed certified output.
struct PrintedFormulaReport {
  std::complex<double> printed_alpha2;
  std::complex<double> printed_alpha3;
  double printed_availability = 0.0;
  std::complex<double> computed_alpha2;
  std::complex<double> computed_alpha3;
  double computed_availability = 0.0;
  bool eigenvalues_agree = false;
  bool availability_agrees = false;
};

PrintedFormulaReport printed_formula_diagnostic(const ExpParams& params, double rel_tol = 1e-6);

}  // namespace warmstandby
