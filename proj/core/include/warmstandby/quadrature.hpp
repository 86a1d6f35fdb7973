#pragma once

#include <cstddef>
#include <functional>

#include "warmstandby/error.hpp"

namespace warmstandby {

class QuadratureError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  std::size_t max_intervals = 1'000'000;
  /// Bisection depth at which a panel is accepted as is. Panels straddling a
  /// jump never meet the Simpson criterion; at depth 50 they are 2^-50 wide.
  int max_depth = 50;
};

using ScalarFunction = std::function<double(double)>;

/// Adaptive Simpson quadrature of f over [a, b]. Throws QuadratureError when
/// f returns a non-finite value or the subdivision cap is exceeded.
double integrate(const ScalarFunction& f, double a, double b,
                 const QuadratureOptions& options = {});

/// Integral of f over [a, inf) through the substitution s = a + scale*u/(1-u).
/// f must decay fast enough for the transformed integrand to vanish at u = 1.
double integrate_to_infinity(const ScalarFunction& f, double a, double scale = 1.0,
                             const QuadratureOptions& options = {});

}  // namespace warmstandby
