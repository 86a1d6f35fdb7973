#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "warmstandby/error.hpp"
#include "warmstandby/quadrature.hpp"

namespace warmstandby {

struct ExpParams;

enum class Condition : std::uint8_t { working = 0, failed = 1 };
enum class Component : std::uint8_t { main = 0, standby = 1 };

inline int flag(Condition c) { return static_cast<int>(c); }
inline Condition toggled(Condition c) {
  return c == Condition::working ? Condition::failed : Condition::working;
}

/// Markovized state ((i, x), (j, y)): flags plus time since each flag last
/// changed.
struct FullState {
  Condition main = Condition::working;
  double x = 0.0;
  Condition standby = Condition::working;
  double y = 0.0;

  /// Flag-pair index in the order (0,0), (1,0), (0,1), (1,1).
  std::size_t mode() const { return static_cast<std::size_t>(flag(main) + 2 * flag(standby)); }
  Condition condition(Component c) const { return c == Component::main ? main : standby; }

  /// Same flags, both elapsed times advanced by dt.
  FullState advanced(double dt) const { return {main, x + dt, standby, y + dt}; }
  /// Toggles one element and resets its elapsed time.
  void flip(Component c);
  bool valid() const;
  void validate() const;

  friend bool operator==(const FullState&, const FullState&) = default;
};

std::string to_string(const FullState& s);

struct RateBounds {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v, double rel_tol = 0.0) const {
    return v >= lo * (1.0 - rel_tol) && v <= hi * (1.0 + rel_tol);
  }
};

/// Declared lower/upper bounds of the four intensities.
struct IntensityBounds {
  RateBounds lambda1, mu1, lambda2, mu2;

  void validate() const;
  double min_lower() const;
  /// Sum of the upper bounds; rate of the dominating Poisson clock.
  double dominating_rate() const { return lambda1.hi + mu1.hi + lambda2.hi + mu2.hi; }
  /// Bounds of the intensity governing `c` while it is in condition `cond`.
  const RateBounds& active(Component c, Condition cond) const;
};

// Intensity families. Each maps a FullState to a rate.

/// One rate per flag pair, indexed by FullState::mode().
struct ConstantPerMode {
  std::array<double, 4> rates{};
};

enum class ElapsedArgument : std::uint8_t { x, y };

/// clamp(intercept[mode] + slope[mode] * (x or y), lo, hi).
struct ClampedAffine {
  std::array<double, 4> intercept{};
  std::array<double, 4> slope{};
  ElapsedArgument argument = ElapsedArgument::x;
  double lo = 0.0;
  double hi = 0.0;
};

/// Piecewise-constant lookup over (mode, x bin, y bin). Bins have equal width;
/// the last bin on each axis is open-ended.
struct TableLookup {
  double bin_width = 1.0;
  std::size_t x_bins = 1;
  std::size_t y_bins = 1;
  std::vector<double> values;  ///< size 4 * x_bins * y_bins, mode-major

  double at(std::size_t mode, std::size_t xb, std::size_t yb) const {
    return values[(mode * x_bins + xb) * y_bins + yb];
  }
};

/// Library-only escape hatch. The callable must be a pure function of the state.
struct CustomIntensity {
  std::function<double(const FullState&)> fn;
};

using IntensityFunction = std::variant<ConstantPerMode, ClampedAffine, TableLookup, CustomIntensity>;

double evaluate(const IntensityFunction& f, const FullState& s);

class IntensityModel {
 public:
  IntensityModel(IntensityFunction lambda1, IntensityFunction mu1, IntensityFunction lambda2,
                 IntensityFunction mu2, IntensityBounds bounds);

  /// Constant-per-mode model equivalent to the exponential chain; the standby
  /// failure rate switches between lambda2 and lambda2_loaded with the main flag.
  static IntensityModel from_exp_params(const ExpParams& params);

  double lambda1(const FullState& s) const { return evaluate(lambda1_, s); }
  double mu1(const FullState& s) const { return evaluate(mu1_, s); }
  double lambda2(const FullState& s) const { return evaluate(lambda2_, s); }
  double mu2(const FullState& s) const { return evaluate(mu2_, s); }

  /// Intensity of the one pending transition of element `c`.
  double rate(Component c, const FullState& s) const;

  const IntensityBounds& bounds() const { return bounds_; }

 private:
  IntensityFunction lambda1_, mu1_, lambda2_, mu2_;
  IntensityBounds bounds_;
};

// Intensity calculus on a single random duration with hazard phi.

/// 1 - exp(-int_0^s phi).
double cdf_from_intensity(const ScalarFunction& phi, double s, const QuadratureOptions& q = {});
/// phi(s) exp(-int_0^s phi).
double density_from_intensity(const ScalarFunction& phi, double s,
                              const QuadratureOptions& q = {});

struct BoundsViolation {
  std::string intensity;
  FullState state;
  double value = 0.0;
  RateBounds bounds;
};

struct BoundsReport {
  bool passed = true;
  std::size_t states_probed = 0;
  std::optional<BoundsViolation> violation;
};

/// Probes every intensity, in the modes where it is active, at the origin
/// and at probe_count quasi-random elapsed-time pairs log-spaced over
/// [0, 1e3 / min lower bound]. Reports the first violating state.
BoundsReport validate_bounds(const IntensityModel& model, std::size_t probe_count,
                             std::uint64_t seed);

/// Exponential comparison variable for a duration whose intensity lies in
/// [c, C]: the rate-C variable is stochastically smaller, the rate-c one larger.
struct DominatedExp {
  enum class Side : std::uint8_t { lower_bound_rate_c, upper_bound_rate_C };

  double rate = 1.0;
  Side side = Side::lower_bound_rate_c;

  double cdf(double s) const { return s <= 0.0 ? 0.0 : -std::expm1(-rate * s); }
  double mean() const { return 1.0 / rate; }
};

/// True when 1 - e^{-C s} >= F(s) >= 1 - e^{-c s} at every grid point, F
/// reconstructed from phi. Requires 0 < c < C.
bool stochastic_order_check(const ScalarFunction& phi, double c, double C,
                            std::span<const double> s_grid);

}  // namespace warmstandby
