#include "warmstandby/quadrature.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace warmstandby {

namespace {

struct Panel {
  double a, b;
  double fa, fm, fb;
  double whole;
  double tol;
  int depth;
};

double checked(const ScalarFunction& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw QuadratureError("integrand is not finite at x = " + std::to_string(x));
  }
  return v;
}

}  // namespace

double integrate(const ScalarFunction& f, double a, double b,
                 const QuadratureOptions& options) {
  if (a == b) return 0.0;
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw DomainError("integrate: limits must be finite");
  }
  if (b < a) return -integrate(f, b, a, options);

  // A few initial panels keep the first Simpson estimate from matching an
  // oscillating integrand by accident.
  constexpr int kInitialPanels = 8;
  const double width = (b - a) / kInitialPanels;
  std::vector<Panel> stack;
  stack.reserve(128);
  std::vector<double> nodes(2 * kInitialPanels + 1);
  for (int k = 0; k <= 2 * kInitialPanels; ++k) {
    const double x = (k == 2 * kInitialPanels) ? b : a + 0.5 * width * k;
    nodes[k] = checked(f, x);
  }
  for (int p = kInitialPanels - 1; p >= 0; --p) {
    const double pa = a + width * p;
    const double pb = (p == kInitialPanels - 1) ? b : a + width * (p + 1);
    const double fa = nodes[2 * p], fm = nodes[2 * p + 1], fb = nodes[2 * p + 2];
    stack.push_back({pa, pb, fa, fm, fb, (pb - pa) / 6.0 * (fa + 4.0 * fm + fb),
                     options.abs_tol / kInitialPanels, 0});
  }

  std::size_t intervals = kInitialPanels;
  double total = 0.0;
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double flm = checked(f, 0.5 * (p.a + m));
    const double frm = checked(f, 0.5 * (m + p.b));
    const double left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const double right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const double delta = left + right - p.whole;
    if (p.depth >= options.max_depth || std::abs(delta) <= 15.0 * p.tol) {
      total += left + right + delta / 15.0;
      continue;
    }
    if (++intervals > options.max_intervals) {
      throw QuadratureError("integrate: subdivision cap of " +
                            std::to_string(options.max_intervals) + " exceeded");
    }
    stack.push_back({m, p.b, p.fm, frm, p.fb, right, 0.5 * p.tol, p.depth + 1});
    stack.push_back({p.a, m, p.fa, flm, p.fm, left, 0.5 * p.tol, p.depth + 1});
  }
  return total;
}

double integrate_to_infinity(const ScalarFunction& f, double a, double scale,
                             const QuadratureOptions& options) {
  if (!(scale > 0.0)) throw DomainError("integrate_to_infinity: scale must be positive");
  auto mapped = [&](double u) {
    if (u >= 1.0) return 0.0;
    const double one_minus = 1.0 - u;
    const double s = a + scale * u / one_minus;
    const double jacobian = scale / (one_minus * one_minus);
    const double v = f(s);
    if (v == 0.0) return 0.0;
    return v * jacobian;
  };
  return integrate(mapped, 0.0, 1.0, options);
}

}  // namespace warmstandby
