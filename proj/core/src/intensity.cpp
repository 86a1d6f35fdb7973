#include "warmstandby/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "warmstandby/exact_markov.hpp"
#include "warmstandby/rng.hpp"

namespace warmstandby {

void FullState::flip(Component c) {
  if (c == Component::main) {
    main = toggled(main);
    x = 0.0;
  } else {
    standby = toggled(standby);
    y = 0.0;
  }
}

bool FullState::valid() const {
  auto ok_flag = [](Condition c) { return c == Condition::working || c == Condition::failed; };
  return ok_flag(main) && ok_flag(standby) && x >= 0.0 && y >= 0.0 && std::isfinite(x) &&
         std::isfinite(y);
}

void FullState::validate() const {
  if (!valid()) throw DomainError("invalid FullState " + to_string(*this));
}

std::string to_string(const FullState& s) {
  std::ostringstream os;
  os.precision(17);
  os << "((" << flag(s.main) << ", " << s.x << "), (" << flag(s.standby) << ", " << s.y << "))";
  return os.str();
}

void IntensityBounds::validate() const {
  auto check = [](const RateBounds& b, const char* name) {
    if (!(b.lo > 0.0 && b.lo <= b.hi && std::isfinite(b.hi))) {
      throw DomainError(std::string("bounds for ") + name + " must satisfy 0 < lo <= hi < inf");
    }
  };
  check(lambda1, "lambda1");
  check(mu1, "mu1");
  check(lambda2, "lambda2");
  check(mu2, "mu2");
}

double IntensityBounds::min_lower() const {
  return std::min({lambda1.lo, mu1.lo, lambda2.lo, mu2.lo});
}

const RateBounds& IntensityBounds::active(Component c, Condition cond) const {
  if (c == Component::main) return cond == Condition::working ? lambda1 : mu1;
  return cond == Condition::working ? lambda2 : mu2;
}

namespace {

struct Evaluator {
  const FullState& s;

  double operator()(const ConstantPerMode& f) const { return f.rates[s.mode()]; }

  double operator()(const ClampedAffine& f) const {
    const std::size_t m = s.mode();
    const double arg = f.argument == ElapsedArgument::x ? s.x : s.y;
    return std::clamp(f.intercept[m] + f.slope[m] * arg, f.lo, f.hi);
  }

  double operator()(const TableLookup& f) const {
    auto bin = [&](double v, std::size_t n) {
      const double b = std::floor(v / f.bin_width);
      return b >= static_cast<double>(n - 1) ? n - 1 : static_cast<std::size_t>(b);
    };
    return f.at(s.mode(), bin(s.x, f.x_bins), bin(s.y, f.y_bins));
  }

  double operator()(const CustomIntensity& f) const { return f.fn(s); }
};

void check_family(const IntensityFunction& f, const RateBounds& b, const char* name) {
  if (const auto* ca = std::get_if<ClampedAffine>(&f)) {
    if (!(ca->lo > 0.0 && ca->lo <= ca->hi)) {
      throw DomainError(std::string(name) + ": clamped-affine clamp interval invalid");
    }
    if (ca->lo < b.lo || ca->hi > b.hi) {
      throw DomainError(std::string(name) + ": clamp interval exceeds declared bounds");
    }
  } else if (const auto* t = std::get_if<TableLookup>(&f)) {
    if (!(t->bin_width > 0.0) || t->x_bins == 0 || t->y_bins == 0 ||
        t->values.size() != 4 * t->x_bins * t->y_bins) {
      throw DomainError(std::string(name) + ": table shape inconsistent");
    }
  } else if (const auto* c = std::get_if<CustomIntensity>(&f)) {
    if (!c->fn) throw DomainError(std::string(name) + ": empty custom intensity");
  }
}

}  // namespace

double evaluate(const IntensityFunction& f, const FullState& s) {
  return std::visit(Evaluator{s}, f);
}

IntensityModel::IntensityModel(IntensityFunction lambda1, IntensityFunction mu1,
                               IntensityFunction lambda2, IntensityFunction mu2,
                               IntensityBounds bounds)
    : lambda1_(std::move(lambda1)),
      mu1_(std::move(mu1)),
      lambda2_(std::move(lambda2)),
      mu2_(std::move(mu2)),
      bounds_(bounds) {
  bounds_.validate();
  check_family(lambda1_, bounds_.lambda1, "lambda1");
  check_family(mu1_, bounds_.mu1, "mu1");
  check_family(lambda2_, bounds_.lambda2, "lambda2");
  check_family(mu2_, bounds_.mu2, "mu2");
}

IntensityModel IntensityModel::from_exp_params(const ExpParams& p) {
  p.validate();
  auto constant = [](double r) { return ConstantPerMode{{r, r, r, r}}; };
  // Modes (0,0), (1,0), (0,1), (1,1): the loaded rate applies when i = 1.
  ConstantPerMode standby{{p.lambda2, p.lambda2_loaded, p.lambda2, p.lambda2_loaded}};
  IntensityBounds b{
      {p.lambda1, p.lambda1},
      {p.mu1, p.mu1},
      {std::min(p.lambda2, p.lambda2_loaded), std::max(p.lambda2, p.lambda2_loaded)},
      {p.mu2, p.mu2},
  };
  return IntensityModel(constant(p.lambda1), constant(p.mu1), standby, constant(p.mu2), b);
}

double IntensityModel::rate(Component c, const FullState& s) const {
  if (c == Component::main) return s.main == Condition::working ? lambda1(s) : mu1(s);
  return s.standby == Condition::working ? lambda2(s) : mu2(s);
}

double cdf_from_intensity(const ScalarFunction& phi, double s, const QuadratureOptions& q) {
  if (!(s >= 0.0)) throw DomainError("cdf_from_intensity: s must be nonnegative");
  return -std::expm1(-integrate(phi, 0.0, s, q));
}

double density_from_intensity(const ScalarFunction& phi, double s, const QuadratureOptions& q) {
  if (!(s >= 0.0)) throw DomainError("density_from_intensity: s must be nonnegative");
  return phi(s) * std::exp(-integrate(phi, 0.0, s, q));
}

namespace {

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double result = 0.0;
  double f = 1.0 / static_cast<double>(base);
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= static_cast<double>(base);
  }
  return result;
}

}  // namespace

BoundsReport validate_bounds(const IntensityModel& model, std::size_t probe_count,
                             std::uint64_t seed) {
  if (probe_count < 1) throw DomainError("validate_bounds: probe_count must be >= 1");
  const IntensityBounds& b = model.bounds();
  const double span = std::log1p(1e3 / b.min_lower());

  // Cranley-Patterson rotation of a Halton(2, 3) sequence.
  Rng rng(seed, 0, StreamDomain::probe);
  const double shift_x = rng.uniform();
  const double shift_y = rng.uniform();

  BoundsReport report;
  auto probe = [&](double x, double y) -> bool {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const FullState s{static_cast<Condition>(i), x, static_cast<Condition>(j), y};
        ++report.states_probed;
        struct Item {
          const char* name;
          double value;
          const RateBounds& bounds;
        };
        const Item main_item = s.main == Condition::working
                                   ? Item{"lambda1", model.lambda1(s), b.lambda1}
                                   : Item{"mu1", model.mu1(s), b.mu1};
        const Item standby_item = s.standby == Condition::working
                                      ? Item{"lambda2", model.lambda2(s), b.lambda2}
                                      : Item{"mu2", model.mu2(s), b.mu2};
        for (const Item& item : {main_item, standby_item}) {
          if (!std::isfinite(item.value) || !item.bounds.contains(item.value)) {
            report.passed = false;
            report.violation = BoundsViolation{item.name, s, item.value, item.bounds};
            return false;
          }
        }
      }
    }
    return true;
  };

  if (!probe(0.0, 0.0)) return report;
  for (std::size_t k = 1; k <= probe_count; ++k) {
    const double u = std::fmod(radical_inverse(k, 2) + shift_x, 1.0);
    const double v = std::fmod(radical_inverse(k, 3) + shift_y, 1.0);
    if (!probe(std::expm1(u * span), std::expm1(v * span))) return report;
  }
  return report;
}

bool stochastic_order_check(const ScalarFunction& phi, double c, double C,
                            std::span<const double> s_grid) {
  if (!(c > 0.0 && c < C && std::isfinite(C))) {
    throw DomainError("stochastic_order_check: requires 0 < c < C < inf");
  }
  constexpr double kTol = 1e-9;
  const DominatedExp fastest{C, DominatedExp::Side::upper_bound_rate_C};
  const DominatedExp slowest{c, DominatedExp::Side::lower_bound_rate_c};
  for (const double s : s_grid) {
    const double f = cdf_from_intensity(phi, s);
    const double upper = fastest.cdf(s);
    const double lower = slowest.cdf(s);
    if (f > upper + kTol || f < lower - kTol) return false;
  }
  return true;
}

}  // namespace warmstandby
