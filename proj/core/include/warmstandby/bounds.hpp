#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "warmstandby/exact_markov.hpp"
#include "warmstandby/intensity.hpp"

namespace warmstandby {

/// How the residual working times are matched at an attempt. pairwise couples
/// main with main and standby with standby; four_way uses the single
/// min/max common-part bound for all four times at once.
enum class CouplingStrategy : std::uint8_t { pairwise, four_way };

std::string to_string(CouplingStrategy s);
CouplingStrategy parse_strategy(const std::string& name);

struct BoundResult {
  double epsilon = 0.0;
  double pi1 = 0.0;
  double pi2 = 0.0;
  double kappa1 = 0.0;  ///< residual common-part bound
  double kappa_tilde = 0.0;
  double alpha = 0.0;
  double K = 0.0;
  bool valid = false;
  CouplingStrategy strategy = CouplingStrategy::pairwise;
  std::string note;

  double envelope(double t) const;  ///< K exp(-alpha t), or 1 if invalid
};

/// Safety margin of the bisection predicate.
inline constexpr double kAlphaMargin = 1e-3;

/// Probability that the standby fails and is repaired inside the window.
double pi1(double eps, const IntensityBounds& b);
/// Five-factor window probability; the loaded standby rate uses the lower
/// bound of lambda2.
double pi2(double eps, const IntensityBounds& b);
double kappa_residual(const IntensityBounds& b, CouplingStrategy strategy);
double kappa_tilde(double eps, const IntensityBounds& b, CouplingStrategy strategy);

/// Lower bound on reaching the fresh set within eps of a repair epoch:
/// min of the standby-down and standby-up cases.
double fresh_set_hit_probability(double eps, const IntensityBounds& b);

/// MGF at alpha of Exp(lambda1-) + Exp(mu1-), the dominating cycle length.
double cycle_mgf(double alpha, const IntensityBounds& b);
/// MGF at alpha of Exp(r_min), the dominating time to the first epoch.
double entry_mgf(double alpha, const IntensityBounds& b);
/// Exclusive upper limit for alpha.
double alpha_cap(const IntensityBounds& b);

BoundResult certify(const IntensityBounds& b, double eps, CouplingStrategy strategy);
/// certify with a given success probability per cycle; pi/kappa fields are
/// left at zero.
BoundResult certify_from_kappa(const IntensityBounds& b, double kappa_tilde_value);

/// Log-spaced grid spanning [lo, hi] / min lower bound.
std::vector<double> default_epsilon_grid(const IntensityBounds& b, std::size_t points = 64,
                                         double lo = 1e-3, double hi = 10.0);
/// Largest alpha over the grid; ties go to the smaller K.
BoundResult optimize_epsilon(const IntensityBounds& b, CouplingStrategy strategy,
                             std::span<const double> grid);

struct CurvePoint {
  double t = 0.0;
  double value = 0.0;
  double std_error = 0.0;
};

struct DominationCheck {
  std::string quantity;
  double t = 0.0;
  double observed = 0.0;  ///< value + 3 SE
  double bound = 0.0;
  bool passed = false;
};

/// Exact constant-rate comparison: |A(t) - A(inf)| and the spectral gap.
struct ExactReference {
  ExpParams params;
  MarkovDist p0;
  std::vector<double> t_grid;
};

struct CertificateReport {
  bool passed = false;
  std::vector<DominationCheck> checks;
  std::optional<double> spectral_gap;
  bool alpha_below_gap = true;
  std::string message;
};

/// Every curve point plus three standard errors must lie below K e^{-alpha t}.
CertificateReport tv_certificate_check(const BoundResult& result,
                                       std::span<const CurvePoint> tv_curve,
                                       std::span<const CurvePoint> tail_curve,
                                       const std::optional<ExactReference>& exact = std::nullopt);

}  // namespace warmstandby
