#include "warmstandby/exact_markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <boost/numeric/odeint.hpp>

namespace warmstandby {

namespace {

constexpr double kOdeAbsTol = 1e-10;
constexpr double kOdeRelTol = 1e-10;
constexpr double kMinStep = 1e-14;
constexpr double kMaxRenormDrift = 1e-10;

void require_rate(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

void ExpParams::validate() const {
  require_rate(lambda1, "lambda1");
  require_rate(mu1, "mu1");
  require_rate(lambda2, "lambda2");
  require_rate(lambda2_loaded, "lambda2_loaded");
  require_rate(mu2, "mu2");
}

MarkovDist MarkovDist::point_mass(std::size_t state) {
  if (state > 3) throw DomainError("point_mass: state index out of range");
  MarkovDist d;
  d.p[state] = 1.0;
  return d;
}

void MarkovDist::validate(double tol) const {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= -tol && v <= 1.0 + tol)) throw DomainError("MarkovDist: entry outside [0,1]");
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol) throw DomainError("MarkovDist: entries do not sum to 1");
}

bool Spectrum::contains(std::complex<double> value, double tol) const {
  return std::any_of(eigenvalues.begin(), eigenvalues.end(),
                     [&](const auto& e) { return std::abs(e - value) <= tol; });
}

double Spectrum::spectral_gap() const {
  std::size_t zero = 0;
  for (std::size_t k = 1; k < eigenvalues.size(); ++k) {
    if (std::abs(eigenvalues[k]) < std::abs(eigenvalues[zero])) zero = k;
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
    if (k != zero) best = std::max(best, eigenvalues[k].real());
  }
  return -best;
}

double transient_availability_single(double lambda, double mu, double t) {
  require_rate(lambda, "lambda");
  require_rate(mu, "mu");
  if (!(t >= 0.0)) throw DomainError("t must be nonnegative");
  return (mu + lambda * std::exp(-(lambda + mu) * t)) / (mu + lambda);
}

Generator generator_matrix(const ExpParams& params) {
  params.validate();
  Generator q = Generator::Zero();
  q(kState00, kState10) = params.lambda1;
  q(kState00, kState01) = params.lambda2;
  q(kState10, kState00) = params.mu1;
  q(kState10, kState11) = params.lambda2_loaded;
  q(kState01, kState00) = params.mu2;
  q(kState01, kState11) = params.lambda1;
  q(kState11, kState01) = params.mu1;
  q(kState11, kState10) = params.mu2;
  for (int r = 0; r < 4; ++r) q(r, r) = -q.row(r).sum();
  return q;
}

std::vector<MarkovDist> solve_kolmogorov(const ExpParams& params, const MarkovDist& p0,
                                         std::span<const double> t_grid) {
  p0.validate(1e-12);
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (!(t_grid[k] >= 0.0) || !std::isfinite(t_grid[k])) {
      throw DomainError("solve_kolmogorov: grid times must be finite and nonnegative");
    }
    if (k > 0 && !(t_grid[k] > t_grid[k - 1])) {
      throw DomainError("solve_kolmogorov: grid must be strictly increasing");
    }
  }
  const Generator q = generator_matrix(params);

  using State = std::array<double, 4>;
  auto rhs = [&q](const State& p, State& dp, double /*t*/) {
    for (int j = 0; j < 4; ++j) {
      dp[j] = p[0] * q(0, j) + p[1] * q(1, j) + p[2] * q(2, j) + p[3] * q(3, j);
    }
  };

  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled(kOdeAbsTol, kOdeRelTol,
                                         odeint::runge_kutta_cash_karp54<State>());

  const double fastest = -q.diagonal().minCoeff();
  State p = p0.p;
  double t = 0.0;
  double dt = 0.1 / fastest;
  std::vector<MarkovDist> out;
  out.reserve(t_grid.size());

  for (const double target : t_grid) {
    while (target - t > 1e-15 * std::max(1.0, target)) {
      double step = std::min(dt, target - t);
      const bool clamped = step < dt;
      const auto result = stepper.try_step(rhs, p, t, step);
      if (result == odeint::success) {
        double sum = 0.0;
        for (double& v : p) {
          v = std::max(v, 0.0);
          sum += v;
        }
        if (std::abs(sum - 1.0) > kMaxRenormDrift) {
          throw NumericalFailure("solve_kolmogorov: probability mass drifted by " +
                                 std::to_string(sum - 1.0));
        }
        for (double& v : p) v /= sum;
        // A step shortened to land on the grid says little about the next one.
        if (!clamped) dt = step;
      } else {
        dt = step;
        if (dt < kMinStep) throw NumericalFailure("solve_kolmogorov: step size underflow");
      }
    }
    t = target;
    out.push_back(MarkovDist{p});
  }
  return out;
}

MarkovDist stationary(const ExpParams& params) {
  const Generator q = generator_matrix(params);
  Eigen::FullPivLU<Eigen::Matrix4d> lu(q.transpose());
  lu.setThreshold(1e-10);
  if (lu.rank() != 3) {
    throw NumericalFailure("stationary: generator null space is not one-dimensional");
  }
  Eigen::Vector4d v = lu.kernel().col(0);
  v /= v.sum();
  MarkovDist d;
  for (int k = 0; k < 4; ++k) {
    if (!(v(k) > 0.0)) throw NumericalFailure("stationary: non-positive stationary entry");
    d.p[k] = v(k);
  }
  return d;
}

Spectrum spectrum(const ExpParams& params) {
  const Generator q = generator_matrix(params);
  Eigen::EigenSolver<Eigen::Matrix4d> solver(q, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("spectrum: eigenvalue iteration did not converge");
  }
  Spectrum s;
  for (int k = 0; k < 4; ++k) s.eigenvalues[k] = solver.eigenvalues()(k);
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return s;
}

double availability_exact(const ExpParams& params, const MarkovDist& p0, double t) {
  const double grid[] = {t};
  return 1.0 - solve_kolmogorov(params, p0, grid).front().p11();
}

PrintedFormulaReport printed_formula_diagnostic(const ExpParams& params, double rel_tol) {
  params.validate();
  const double l1 = params.lambda1, m1 = params.mu1, l2 = params.lambda2;
  const double big = params.lambda2_loaded, m2 = params.mu2;

  PrintedFormulaReport r;
  const double centre = -big / 2 - l1 / 2 - l2 / 2 - m1 / 2 - m2;
  const double disc = (big + m1) * (big + m1) + (l1 + l2) * (l1 + l2) +
                      2 * m1 * (l1 - l2 + 2 * m2 - 8) - 2 * big * (l1 + l2);
  const std::complex<double> root = std::sqrt(std::complex<double>(disc, 0.0));
  r.printed_alpha2 = centre + root / 2.0;
  r.printed_alpha3 = centre - root / 2.0;

  const double num = m1 * (m1 * l2 + big * (l1 + l2) + 2 * (m2 * m2 + m1 - m2)) +
                     m2 * (l1 * (l1 + l2 + m2) + m1 * m2 * (2 * l1 + l2 + big));
  const double den = (l1 + m1) * (m1 * (2 + l2) + m2 * (m2 + big + l1 + l2) + big * (l1 + l2));
  r.printed_availability = num / den;

  const Spectrum s = spectrum(params);
  const double main_rate = -(l1 + m1);
  // Drop the zero eigenvalue and the one closest to -(lambda1 + mu1).
  std::vector<std::complex<double>> rest(s.eigenvalues.begin() + 1, s.eigenvalues.end());
  auto it = std::min_element(rest.begin(), rest.end(), [&](const auto& a, const auto& b) {
    return std::abs(a - main_rate) < std::abs(b - main_rate);
  });
  rest.erase(it);
  r.computed_alpha2 = rest[0];
  r.computed_alpha3 = rest[1];
  r.computed_availability = 1.0 - stationary(params).p11();

  auto close = [rel_tol](std::complex<double> a, std::complex<double> b) {
    return std::abs(a - b) <= rel_tol * std::max(1.0, std::abs(b));
  };
  r.eigenvalues_agree =
      (close(r.printed_alpha2, r.computed_alpha2) && close(r.printed_alpha3, r.computed_alpha3)) ||
      (close(r.printed_alpha2, r.computed_alpha3) && close(r.printed_alpha3, r.computed_alpha2));
  r.availability_agrees = std::abs(r.printed_availability - r.computed_availability) <=
                          rel_tol * std::max(1.0, std::abs(r.computed_availability));
  return r;
}

}  // namespace warmstandby
