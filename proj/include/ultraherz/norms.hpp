#pragma once

#include "ultraherz/radial.hpp"

#include <optional>

namespace ultraherz {

struct HerzParams {
  double beta = 0.0;
  double m = 1.0;
};

struct MorreyHerzParams {
  double beta = 0.0;
  double m = 1.0;
  double lambda = 0.0;
  /// Base of the k_0 discount; nullopt means p.
  std::optional<double> prefactor_base;
};

/// Value of a norm or modular. value is +inf exactly when convergent is false.
struct NormResult {
  double value = 0.0;
  bool convergent = true;
  /// Bound on the part of the value not covered by exact summation
  /// (bisection width, uncertified supremum tail).
  double tail_remainder_bound = 0.0;
  int window_lo = 0;
  int window_hi = 0;

  static NormResult divergent(int lo, int hi);
};

/// Integral of |f|^{u(x)} over Q_p^n, with both tails summed analytically.
NormResult modular(const RadialStepFunction& f, const ExponentFunction& u);

/// Luxemburg norm inf{lambda > 0 : modular(f / lambda) <= 1} by bisection.
NormResult luxemburg_norm(const RadialStepFunction& f, const ExponentFunction& u, double rel_tol = 1e-10);

/// ||chi_{S_k}||_{L^{u(.)}} = |S_k|^{1/u_k}.
double shell_indicator_norm(const ExponentFunction& u, int k);

/// ||chi_{B_gamma}||_{L^{u(.)}}; closed form when u is constant on the ball.
double ball_indicator_norm(const ExponentFunction& u, int gamma, double rel_tol = 1e-12);

/// Homogeneous Herz norm (sum_l ||p^{l beta} f chi_l||^m)^{1/m}.
NormResult herz_norm(const RadialStepFunction& f, const ExponentFunction& u, const HerzParams& params);

/// Homogeneous Morrey-Herz norm sup_{k0} base^{-k0 lambda} (sum_{l <= k0} ||p^{l beta} f chi_l||^m)^{1/m}.
NormResult morrey_herz_norm(const RadialStepFunction& f, const ExponentFunction& u, const MorreyHerzParams& params);

struct CmoOptions {
  /// Use ||f - f_B|| over all of Q_p^n instead of ||(f - f_B) chi_B||.
  bool literal = false;
  /// Balls B_gamma are scanned for gamma in [j_min - margin, j_max + margin].
  int scan_margin = 40;
  double rel_tol = 1e-10;
};

/// Central mean oscillation norm sup_gamma ||chi_B||^{-1} ||(b - b_B) chi_B||.
NormResult cmo_norm(const RadialStepFunction& b, const ExponentFunction& u, const CmoOptions& options = {});

}  // namespace ultraherz
