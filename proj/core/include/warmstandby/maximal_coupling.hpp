#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "warmstandby/quadrature.hpp"
#include "warmstandby/rng.hpp"

namespace warmstandby {

/// A law on [0, inf) given by a density and an exact sampler for it.
struct ContinuousLaw {
  ScalarFunction density;
  std::function<double(Rng&)> sample;
};

/// A law on {0, ..., n-1}.
struct DiscreteLaw {
  std::vector<double> probabilities;
};

template <class T>
struct CoupledSample {
  std::vector<T> values;
  bool all_equal = false;
};

/// Integral over [0, inf) of the pointwise minimum of the densities. Both must
/// integrate to 1 within 1e-8. `scale` sets the length unit of the half-line
/// substitution and should be of the order of the laws' means.
double common_part(const ScalarFunction& f1, const ScalarFunction& f2, double scale = 1.0);
double common_part(std::span<const ScalarFunction> densities, double scale = 1.0);
double common_part(std::span<const DiscreteLaw> laws);

/// Maximal coupling of n >= 2 laws: output k has law k, and all outputs are
/// equal with probability equal to the common part. Realised by rejection:
/// the common value is drawn from law 0 and kept with probability
/// min_k f_k / f_0; otherwise each output is drawn from its residual
/// (f_k - min) / (1 - kappa). When the common part is zero every draw goes
/// through the residual branch and the outputs are independent.
CoupledSample<double> sample_maximal_coupling(std::span<const ContinuousLaw> laws, Rng& rng);

struct DiscreteCoupledSample : CoupledSample<std::size_t> {
  bool degenerate = false;  ///< common part is zero
};

DiscreteCoupledSample sample_maximal_coupling(std::span<const DiscreteLaw> laws, Rng& rng);

}  // namespace warmstandby
