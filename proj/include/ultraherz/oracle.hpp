#pragma once

#include "ultraherz/operators.hpp"
#include "ultraherz/radial.hpp"

#include <cstdint>

namespace ultraherz {

struct OracleConfig {
  std::int64_t samples = 100000;
  int resolution = kDefaultResolution;
  /// Shells outside [-truncation, truncation] are folded into the core ball
  /// (below) or dropped (above, with a reported bias bound).
  int truncation = 30;
  std::uint64_t seed = 1;

  void validate() const;
};

struct OracleEstimate {
  double estimate = 0.0;
  double sigma = 0.0;
  /// Bound on the mass outside the truncation window that the estimate ignores.
  double truncation_bias_bound = 0.0;
};

/// Monte-Carlo estimate of the integral of f over B_gamma.
OracleEstimate mc_integrate(const RadialStepFunction& f, int gamma, const OracleConfig& cfg);

/// Monte-Carlo evaluation of the operator's defining integral at a random point of the probe shell.
OracleEstimate mc_operator_probe(const RadialStepFunction& f, const OperatorSpec& spec, int probe_shell,
                                 const OracleConfig& cfg);

/// Luxemburg norm by bisection on a sampled modular (common random numbers across lambda).
OracleEstimate mc_luxemburg(const RadialStepFunction& f, const ExponentFunction& u, const OracleConfig& cfg);

}  // namespace ultraherz
