#include "warmstandby/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "warmstandby/error.hpp"

namespace warmstandby {

std::string to_string(CouplingStrategy s) {
  return s == CouplingStrategy::pairwise ? "pairwise" : "four_way";
}

CouplingStrategy parse_strategy(const std::string& name) {
  if (name == "pairwise") return CouplingStrategy::pairwise;
  if (name == "four_way") return CouplingStrategy::four_way;
  throw DomainError("unknown coupling strategy '" + name + "'");
}

double BoundResult::envelope(double t) const {
  if (!valid) return 1.0;
  return K * std::exp(-alpha * t);
}

namespace {

// 1 - e^{-x}, accurate for small x.
double hit(double x) { return -std::expm1(-x); }

void require_eps(double eps) {
  if (!(eps > 0.0)) throw DomainError("epsilon must be positive");
}

}  // namespace

double pi1(double eps, const IntensityBounds& b) {
  require_eps(eps);
  return hit(eps * b.lambda2.lo / 2) * hit(eps * b.mu2.lo / 2);
}

double pi2(double eps, const IntensityBounds& b) {
  require_eps(eps);
  double p = 1.0;
  for (double r : {b.lambda1.lo, b.mu1.lo, b.lambda2.lo, b.lambda2.lo, b.mu2.lo}) {
    p *= hit(eps * r / 2);
  }
  return p;
}

double kappa_residual(const IntensityBounds& b, CouplingStrategy strategy) {
  if (strategy == CouplingStrategy::pairwise) {
    return (b.lambda1.lo / b.lambda1.hi) * (b.lambda2.lo / b.lambda2.hi);
  }
  return std::min(b.lambda1.lo, b.lambda2.lo) / std::max(b.lambda1.hi, b.lambda2.hi);
}

double kappa_tilde(double eps, const IntensityBounds& b, CouplingStrategy strategy) {
  return pi1(eps, b) * pi2(eps, b) * kappa_residual(b, strategy);
}

double fresh_set_hit_probability(double eps, const IntensityBounds& b) {
  require_eps(eps);
  const double standby_down = hit(eps * b.mu2.lo);
  const double standby_up = hit(eps * b.mu2.lo / 2) * hit(eps * b.lambda2.lo / 2);
  return std::min(standby_down, standby_up);
}

double alpha_cap(const IntensityBounds& b) {
  return std::min({b.lambda1.lo, b.mu1.lo, b.min_lower()});
}

double cycle_mgf(double alpha, const IntensityBounds& b) {
  if (!(alpha >= 0.0) || alpha >= std::min(b.lambda1.lo, b.mu1.lo)) {
    throw DomainError("cycle_mgf: alpha outside the convergence region");
  }
  return b.lambda1.lo / (b.lambda1.lo - alpha) * b.mu1.lo / (b.mu1.lo - alpha);
}

double entry_mgf(double alpha, const IntensityBounds& b) {
  const double r = b.min_lower();
  if (!(alpha >= 0.0) || alpha >= r) throw DomainError("entry_mgf: alpha outside the convergence region");
  return r / (r - alpha);
}

BoundResult certify_from_kappa(const IntensityBounds& b, double kt) {
  b.validate();
  BoundResult r;
  r.kappa_tilde = kt;
  if (!(kt > 0.0) || kt > 1.0) {
    std::ostringstream msg;
    msg << "kappa_tilde = " << kt << " is not in (0, 1]";
    r.note = msg.str();
    return r;
  }
  const double cap = (1.0 - kAlphaMargin) * alpha_cap(b);
  auto feasible = [&](double a) { return (1.0 - kt) * cycle_mgf(a, b) <= 1.0 - kAlphaMargin; };
  if (!feasible(0.0)) {
    r.note = "kappa_tilde is below the safety margin";
    return r;
  }
  double alpha;
  if (feasible(cap)) {
    alpha = cap;
  } else {
    double lo = 0.0, hi = cap;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * cap; ++it) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? lo : hi) = mid;
    }
    alpha = lo;
  }
  if (!(alpha > 0.0)) {
    r.note = "bisection found no positive rate";
    return r;
  }
  const double m = cycle_mgf(alpha, b);
  r.alpha = alpha;
  r.K = entry_mgf(alpha, b) * m * kt / (1.0 - (1.0 - kt) * m) + 1.0;
  r.valid = true;
  return r;
}

BoundResult certify(const IntensityBounds& b, double eps, CouplingStrategy strategy) {
  b.validate();
  const double p1 = pi1(eps, b);
  const double p2 = pi2(eps, b);
  const double k1 = kappa_residual(b, strategy);
  BoundResult r = certify_from_kappa(b, p1 * p2 * k1);
  r.epsilon = eps;
  r.pi1 = p1;
  r.pi2 = p2;
  r.kappa1 = k1;
  r.strategy = strategy;
  const std::string subst = "loaded standby factor of pi2 uses the lambda2 lower bound";
  r.note = r.note.empty() ? subst : r.note + "; " + subst;
  return r;
}

std::vector<double> default_epsilon_grid(const IntensityBounds& b, std::size_t points, double lo,
                                         double hi) {
  if (points == 0 || !(lo > 0.0) || !(hi >= lo)) throw DomainError("invalid epsilon grid");
  const double scale = 1.0 / b.min_lower();
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double f = points == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(points - 1);
    grid[k] = scale * lo * std::pow(hi / lo, f);
  }
  return grid;
}

BoundResult optimize_epsilon(const IntensityBounds& b, CouplingStrategy strategy,
                             std::span<const double> grid) {
  if (grid.empty()) throw DomainError("optimize_epsilon: empty grid");
  std::optional<BoundResult> best;
  for (const double eps : grid) {
    BoundResult r = certify(b, eps, strategy);
    if (!best) {
      best = std::move(r);
      continue;
    }
    if (!r.valid) continue;
    if (!best->valid || r.alpha > best->alpha || (r.alpha == best->alpha && r.K < best->K)) {
      best = std::move(r);
    }
  }
  return *best;
}

CertificateReport tv_certificate_check(const BoundResult& result,
                                       std::span<const CurvePoint> tv_curve,
                                       std::span<const CurvePoint> tail_curve,
                                       const std::optional<ExactReference>& exact) {
  CertificateReport rep;
  if (!result.valid) {
    rep.message = "no certificate";
    return rep;
  }
  auto check = [&](const char* name, const CurvePoint& p) {
    const double observed = p.value + 3.0 * p.std_error;
    const double bound = result.envelope(p.t);
    rep.checks.push_back({name, p.t, observed, bound, observed <= bound});
  };
  for (const auto& p : tv_curve) check("tv", p);
  for (const auto& p : tail_curve) check("tail", p);

  if (exact) {
    const auto dists = solve_kolmogorov(exact->params, exact->p0, exact->t_grid);
    const double a_inf = 1.0 - stationary(exact->params).p11();
    for (std::size_t k = 0; k < dists.size(); ++k) {
      check("availability", {exact->t_grid[k], std::abs(1.0 - dists[k].p11() - a_inf), 0.0});
    }
    rep.spectral_gap = spectrum(exact->params).spectral_gap();
    rep.alpha_below_gap = result.alpha <= *rep.spectral_gap;
  }

  const auto failed = std::count_if(rep.checks.begin(), rep.checks.end(),
                                    [](const DominationCheck& c) { return !c.passed; });
  rep.passed = failed == 0 && rep.alpha_below_gap;
  std::ostringstream msg;
  msg << rep.checks.size() - static_cast<std::size_t>(failed) << "/" << rep.checks.size()
      << " domination checks passed";
  if (rep.spectral_gap) {
    msg << "; alpha " << result.alpha << (rep.alpha_below_gap ? " <= " : " > ") << "spectral gap "
        << *rep.spectral_gap;
  }
  rep.message = msg.str();
  return rep;
}

}  // namespace warmstandby
