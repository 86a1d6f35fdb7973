#include "warmstandby/maximal_coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace warmstandby {

namespace {

constexpr double kUnitMassTol = 1e-8;
constexpr std::size_t kMaxRejections = 10'000'000;

void require_unit_mass(const ScalarFunction& f, double scale) {
  const double mass = integrate_to_infinity(f, 0.0, scale);
  if (std::abs(mass - 1.0) > kUnitMassTol) {
    throw DomainError("common_part: density integrates to " + std::to_string(mass));
  }
}

// Shared rejection scheme. `draw(k)` samples law k, `dens(k, v)` evaluates it.
template <class T, class Draw, class Dens>
CoupledSample<T> couple(std::size_t n, Rng& rng, Draw draw, Dens dens) {
  if (n < 2) throw DomainError("sample_maximal_coupling: needs at least two laws");
  auto min_density = [&](const T& v) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) m = std::min(m, dens(k, v));
    return m;
  };

  CoupledSample<T> out;
  out.values.resize(n);
  const T first = draw(0);
  const double f0 = dens(0, first);
  const double m0 = min_density(first);
  if (f0 > 0.0 && rng.uniform() * f0 <= m0) {
    std::fill(out.values.begin(), out.values.end(), first);
    out.all_equal = true;
    return out;
  }
  // The rejected draw already has the residual law of law 0.
  out.values[0] = first;
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t tries = 0;; ++tries) {
      if (tries == kMaxRejections) {
        throw NumericalFailure("sample_maximal_coupling: residual rejection did not terminate");
      }
      const T v = draw(k);
      const double fk = dens(k, v);
      if (rng.uniform() * fk > min_density(v)) {
        out.values[k] = v;
        break;
      }
    }
  }
  out.all_equal = std::all_of(out.values.begin(), out.values.end(),
                              [&](const T& v) { return v == out.values[0]; });
  return out;
}

}  // namespace

double common_part(const ScalarFunction& f1, const ScalarFunction& f2, double scale) {
  const ScalarFunction fs[] = {f1, f2};
  return common_part(fs, scale);
}

double common_part(std::span<const ScalarFunction> densities, double scale) {
  if (densities.size() < 2) throw DomainError("common_part: needs at least two densities");
  for (const auto& f : densities) require_unit_mass(f, scale);
  auto min_f = [&](double s) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& f : densities) m = std::min(m, f(s));
    return m;
  };
  return std::clamp(integrate_to_infinity(min_f, 0.0, scale), 0.0, 1.0);
}

double common_part(std::span<const DiscreteLaw> laws) {
  if (laws.size() < 2) throw DomainError("common_part: needs at least two laws");
  const std::size_t atoms = laws[0].probabilities.size();
  for (const auto& law : laws) {
    if (law.probabilities.size() != atoms) throw DomainError("common_part: atom counts differ");
    const double mass = std::accumulate(law.probabilities.begin(), law.probabilities.end(), 0.0);
    if (std::abs(mass - 1.0) > kUnitMassTol) throw DomainError("common_part: mass is not 1");
  }
  double kappa = 0.0;
  for (std::size_t a = 0; a < atoms; ++a) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& law : laws) m = std::min(m, law.probabilities[a]);
    kappa += m;
  }
  return std::clamp(kappa, 0.0, 1.0);
}

CoupledSample<double> sample_maximal_coupling(std::span<const ContinuousLaw> laws, Rng& rng) {
  return couple<double>(
      laws.size(), rng, [&](std::size_t k) { return laws[k].sample(rng); },
      [&](std::size_t k, double v) { return laws[k].density(v); });
}

DiscreteCoupledSample sample_maximal_coupling(std::span<const DiscreteLaw> laws, Rng& rng) {
  DiscreteCoupledSample out;
  out.degenerate = common_part(laws) == 0.0;
  auto draw = [&](std::size_t k) {
    const auto& p = laws[k].probabilities;
    double u = rng.uniform();
    for (std::size_t a = 0; a < p.size(); ++a) {
      if (u < p[a]) return a;
      u -= p[a];
    }
    // Rounding left u just above the last cumulative sum.
    std::size_t last = p.size() - 1;
    while (last > 0 && p[last] == 0.0) --last;
    return last;
  };
  auto dens = [&](std::size_t k, std::size_t a) { return laws[k].probabilities[a]; };
  static_cast<CoupledSample<std::size_t>&>(out) = couple<std::size_t>(laws.size(), rng, draw, dens);
  return out;
}

}  // namespace warmstandby
