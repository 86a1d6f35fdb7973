#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "warmstandby/exact_markov.hpp"
#include "warmstandby/intensity.hpp"

using namespace warmstandby;

namespace {

const IntensityBounds kUnitBounds{{0.5, 2}, {0.5, 2}, {0.5, 2}, {0.5, 2}};

IntensityModel constant_model(double l1, double m1, double l2, double m2,
                              IntensityBounds b = kUnitBounds) {
  auto c = [](double r) { return ConstantPerMode{{r, r, r, r}}; };
  return {c(l1), c(m1), c(l2), c(m2), b};
}

}  // namespace

TEST_CASE("full state flips reset only the flipped clock") {
  FullState s{Condition::working, 1.5, Condition::failed, 0.25};
  CHECK(s.mode() == 2);
  s = s.advanced(0.5);
  CHECK(s.x == 2.0);
  CHECK(s.y == 0.75);
  s.flip(Component::main);
  CHECK(s.main == Condition::failed);
  CHECK(s.x == 0.0);
  CHECK(s.y == 0.75);
  CHECK(s.mode() == 3);
  s.flip(Component::standby);
  CHECK(s.standby == Condition::working);
  CHECK(s.y == 0.0);
  CHECK(s.x == 0.0);

  CHECK_THROWS_AS((FullState{Condition::working, -1, Condition::working, 0}.validate()), DomainError);
  CHECK_THROWS_AS((FullState{Condition::working, 0, Condition::working, NAN}.validate()), DomainError);
  CHECK_FALSE((FullState{static_cast<Condition>(2), 0, Condition::working, 0}.valid()));
}

TEST_CASE("intensity families") {
  const FullState s00{Condition::working, 0.7, Condition::working, 2.2};
  const FullState s10{Condition::failed, 0.7, Condition::working, 2.2};

  CHECK(evaluate(ConstantPerMode{{1, 2, 3, 4}}, s10) == 2);

  const ClampedAffine ca{{0.5, 0.5, 0.5, 0.5}, {1, 1, 1, 1}, ElapsedArgument::x, 0.6, 1.0};
  CHECK(evaluate(ca, FullState{Condition::working, 0.0, Condition::working, 0}) == 0.6);
  CHECK(evaluate(ca, FullState{Condition::working, 0.3, Condition::working, 0}) ==
        doctest::Approx(0.8));
  CHECK(evaluate(ca, FullState{Condition::working, 9.0, Condition::working, 0}) == 1.0);
  ClampedAffine on_y = ca;
  on_y.argument = ElapsedArgument::y;
  CHECK(evaluate(on_y, s00) == 1.0);

  // Two x bins, three y bins of width 1; beyond the table the last bin holds.
  TableLookup table{1.0, 2, 3, {}};
  for (int k = 0; k < 24; ++k) table.values.push_back(k);
  CHECK(evaluate(table, s00) == table.at(0, 0, 2));
  CHECK(evaluate(table, s10) == table.at(1, 0, 2));
  CHECK(evaluate(table, FullState{Condition::working, 50, Condition::failed, 1.5}) ==
        table.at(2, 1, 1));

  const CustomIntensity custom{[](const FullState& s) { return 1.0 + s.x; }};
  CHECK(evaluate(custom, s00) == doctest::Approx(1.7));
}

TEST_CASE("model construction checks the families against the bounds") {
  auto c = [](double r) { return ConstantPerMode{{r, r, r, r}}; };
  const ClampedAffine wide{{1, 1, 1, 1}, {0, 0, 0, 0}, ElapsedArgument::x, 0.1, 5.0};
  CHECK_THROWS_AS(IntensityModel(wide, c(1), c(1), c(1), kUnitBounds), DomainError);
  CHECK_THROWS_AS(IntensityModel(TableLookup{1.0, 2, 2, {1, 2}}, c(1), c(1), c(1), kUnitBounds),
                  DomainError);
  CHECK_THROWS_AS(IntensityModel(CustomIntensity{}, c(1), c(1), c(1), kUnitBounds), DomainError);
  IntensityBounds inverted = kUnitBounds;
  inverted.mu2 = {2, 1};
  CHECK_THROWS_AS(IntensityModel(c(1), c(1), c(1), c(1), inverted), DomainError);
  IntensityBounds zero = kUnitBounds;
  zero.lambda2.lo = 0;
  CHECK_THROWS_AS(IntensityModel(c(1), c(1), c(1), c(1), zero), DomainError);
}

TEST_CASE("exponential parameters map to a constant-per-mode model") {
  const ExpParams p{1, 2, 0.3, 0.6, 1.5};
  const IntensityModel m = IntensityModel::from_exp_params(p);
  const FullState s00{Condition::working, 3, Condition::working, 1};
  const FullState s10{Condition::failed, 3, Condition::working, 1};
  const FullState s01{Condition::working, 3, Condition::failed, 1};
  CHECK(m.rate(Component::main, s00) == 1);
  CHECK(m.rate(Component::main, s10) == 2);
  CHECK(m.rate(Component::standby, s00) == 0.3);
  CHECK(m.rate(Component::standby, s10) == 0.6);
  CHECK(m.rate(Component::standby, s01) == 1.5);
  CHECK(m.bounds().lambda2.lo == 0.3);
  CHECK(m.bounds().lambda2.hi == 0.6);
  CHECK(m.bounds().dominating_rate() == doctest::Approx(1 + 2 + 0.6 + 1.5));
  CHECK(m.bounds().min_lower() == 0.3);
}

TEST_CASE("cdf and density from constant and linear intensities") {
  for (double c : {0.2, 1.0, 3.7}) {
    for (double s : {0.0, 0.1, 1.0, 2.5, 10.0}) {
      CHECK(std::abs(cdf_from_intensity([c](double) { return c; }, s) - (1 - std::exp(-c * s))) <=
            1e-10);
      CHECK(std::abs(density_from_intensity([c](double) { return c; }, s) - c * std::exp(-c * s)) <=
            1e-10);
    }
  }
  CHECK(cdf_from_intensity([](double u) { return u; }, 0.0) == 0.0);
  const double f2 = cdf_from_intensity([](double u) { return u; }, 2.0);
  CHECK(f2 == doctest::Approx(1 - std::exp(-2.0)).epsilon(1e-12));
  const double trap = oracle::trapezoid([](double u) { return u; }, 0, 2, 1000);
  CHECK(std::abs(f2 - (1 - std::exp(-trap))) <= 1e-10);

  const double a = 0.4, b = 0.9;
  for (double s : {0.3, 1.0, 2.0, 4.0}) {
    const double cum = a * s + b * s * s / 2;
    CHECK(std::abs(cdf_from_intensity([=](double u) { return a + b * u; }, s) -
                   (1 - std::exp(-cum))) <= 1e-8);
    CHECK(std::abs(density_from_intensity([=](double u) { return a + b * u; }, s) -
                   (a + b * s) * std::exp(-cum)) <= 1e-8);
  }

  CHECK(density_from_intensity([](double) { return 1.0; }, 0.0) == 1.0);
  CHECK(density_from_intensity([](double) { return 2.0; }, std::log(2.0) / 2) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(cdf_from_intensity([](double) { return 1.0; }, -1.0), DomainError);
}

TEST_CASE("reconstructed laws are proper and consistent") {
  auto phi = [](double u) { return 0.5 + 0.4 * std::sin(3 * u) * std::sin(3 * u); };
  double prev = 0.0;
  for (double s = 0.0; s <= 12.0; s += 0.25) {
    const double f = cdf_from_intensity(phi, s);
    CHECK(f >= prev);
    CHECK(f <= 1.0);
    prev = f;
    const double integral = integrate([&](double v) { return density_from_intensity(phi, v); }, 0, s);
    CHECK(std::abs(integral - f) <= 1e-8);
  }
  const double total =
      integrate_to_infinity([&](double v) { return density_from_intensity(phi, v); }, 0, 2.0);
  CHECK(std::abs(total - 1.0) <= 1e-8);
}

TEST_CASE("mean of a bounded-intensity duration is at most 1/c") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double c = 0.2 + 2 * u(gen);
    const double amp = 3 * u(gen);
    const double freq = 0.5 + 4 * u(gen);
    const double phase = 6 * u(gen);
    auto phi = [=](double s) { return c + amp * (1 + std::sin(freq * s + phase)) / 2; };
    const double mean =
        integrate_to_infinity([&](double s) { return 1 - cdf_from_intensity(phi, s); }, 0, 1 / c);
    CHECK(mean <= 1 / c + 1e-6);
    CHECK(mean >= 1 / (c + amp) - 1e-6);
  }
}

TEST_CASE("validate_bounds") {
  const auto ok = validate_bounds(constant_model(1, 1, 1, 1), 500, 1);
  CHECK(ok.passed);
  CHECK(ok.states_probed == 4 * 501);

  const ClampedAffine steep{{0.5, 0.5, 0.5, 0.5}, {10, 10, 10, 10}, ElapsedArgument::y, 0.5, 2.0};
  auto c = [](double r) { return ConstantPerMode{{r, r, r, r}}; };
  CHECK(validate_bounds(IntensityModel(steep, steep, steep, steep, kUnitBounds), 2000, 2).passed);

  // Exceeds lambda1's upper bound by 1% once x passes 5.
  const CustomIntensity bad{[](const FullState& s) { return s.x > 5 ? 2 * 1.01 : 1.0; }};
  const auto rep = validate_bounds(IntensityModel(bad, c(1), c(1), c(1), kUnitBounds), 1000, 3);
  REQUIRE_FALSE(rep.passed);
  REQUIRE(rep.violation.has_value());
  CHECK(rep.violation->intensity == "lambda1");
  CHECK(rep.violation->state.x > 5);
  CHECK(rep.violation->state.main == Condition::working);
  CHECK(rep.violation->value == doctest::Approx(2.02));

  // Out-of-bounds values in an inactive mode are never used by the dynamics.
  const ConstantPerMode inactive{{1, 1, 1, 100}};
  CHECK(validate_bounds(IntensityModel(c(1), c(1), inactive, c(1), kUnitBounds), 200, 4).passed);
  const ConstantPerMode active{{1, 100, 1, 1}};
  CHECK_FALSE(validate_bounds(IntensityModel(c(1), c(1), active, c(1), kUnitBounds), 200, 4).passed);

  CHECK_THROWS_AS(validate_bounds(constant_model(1, 1, 1, 1), 0, 1), DomainError);
}

TEST_CASE("stochastic ordering between the dominating exponentials") {
  std::vector<double> grid;
  for (int k = 0; k < 100; ++k) grid.push_back(0.05 * k);
  CHECK(stochastic_order_check([](double) { return 1.0; }, 0.5, 2.0, grid));
  CHECK(stochastic_order_check(
      [](double s) { return 1.25 + 0.7 * std::sin(5 * s); }, 0.5, 2.0, grid));
  CHECK_FALSE(stochastic_order_check([](double) { return 3.0; }, 0.5, 2.0, grid));
  CHECK_FALSE(stochastic_order_check([](double) { return 0.2; }, 0.5, 2.0, grid));
  CHECK_THROWS_AS(stochastic_order_check([](double) { return 1.0; }, 1.0, 1.0, grid), DomainError);
  CHECK_THROWS_AS(stochastic_order_check([](double) { return 1.0; }, 0.0, 1.0, grid), DomainError);

  const DominatedExp fast{2.0, DominatedExp::Side::upper_bound_rate_C};
  const DominatedExp slow{0.5, DominatedExp::Side::lower_bound_rate_c};
  for (double s : grid) CHECK(fast.cdf(s) >= slow.cdf(s));
  CHECK(slow.mean() == 2.0);
  CHECK(fast.cdf(-1.0) == 0.0);
}
