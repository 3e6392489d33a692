#pragma once

#include "ultraherz/padic.hpp"

#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ultraherz {

/// Two functions whose tails cannot be merged into a single power law.
class TailMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A hypothesis of an operation or theorem fails; the message names the failing piece.
class HypothesisViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// amplitude * p^{k * rate} on shell k.
struct PowerTail {
  double amplitude = 0.0;
  double rate = 0.0;

  bool is_zero() const noexcept { return amplitude == 0.0; }
  double at(double p, int k) const noexcept;

  friend bool operator==(const PowerTail&, const PowerTail&) = default;
};

/**
 * A radial function on Q_p^n: one coefficient per shell on [j_min, j_max],
 * power-law tails below and above the window.
 *
 * This is the closed class for every operator in the library: Hardy
 * operators, commutators and the maximal operator map it to itself.
 */
class RadialStepFunction {
 public:
  RadialStepFunction(PadicContext ctx, int j_min, std::vector<double> coeffs, PowerTail inner = {},
                     PowerTail outer = {}, std::optional<double> value_at_zero = std::nullopt);

  static RadialStepFunction zero(const PadicContext& ctx);
  static RadialStepFunction constant(const PadicContext& ctx, double c);
  /// Indicator of the sphere S_k.
  static RadialStepFunction shell_indicator(const PadicContext& ctx, int k, double c = 1.0);
  /// Indicator of the ball B_gamma.
  static RadialStepFunction ball_indicator(const PadicContext& ctx, int gamma, double c = 1.0);

  const PadicContext& context() const noexcept { return ctx_; }
  int j_min() const noexcept { return j_min_; }
  int j_max() const noexcept { return j_min_ + static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  const PowerTail& inner_tail() const noexcept { return inner_; }
  const PowerTail& outer_tail() const noexcept { return outer_; }
  double value_at_zero() const noexcept { return value_at_zero_; }

  /// Value on shell k.
  double operator()(int k) const noexcept;

  bool is_zero() const noexcept;
  /// Locally integrable near the origin: A_in = 0 or e_in > -n.
  bool inner_integrable() const noexcept;

 private:
  PadicContext ctx_;
  int j_min_;
  std::vector<double> coeffs_;
  PowerTail inner_;
  PowerTail outer_;
  double value_at_zero_;
};

inline double evaluate(const RadialStepFunction& f, int k) noexcept { return f(k); }

/// Same function on a wider window; tails unchanged.
RadialStepFunction widen(const RadialStepFunction& f, int lo, int hi);

RadialStepFunction add(const RadialStepFunction& f, const RadialStepFunction& g);
RadialStepFunction multiply(const RadialStepFunction& f, const RadialStepFunction& g);
RadialStepFunction scale(const RadialStepFunction& f, double c);

inline RadialStepFunction operator+(const RadialStepFunction& f, const RadialStepFunction& g) { return add(f, g); }
inline RadialStepFunction operator-(const RadialStepFunction& f, const RadialStepFunction& g) {
  return add(f, scale(g, -1.0));
}
inline RadialStepFunction operator*(const RadialStepFunction& f, const RadialStepFunction& g) {
  return multiply(f, g);
}
inline RadialStepFunction operator*(double c, const RadialStepFunction& f) { return scale(f, c); }

/// |f|^s shellwise; tails (|A|^s, s e).
RadialStepFunction abs_pow(const RadialStepFunction& f, double s);
inline RadialStepFunction abs(const RadialStepFunction& f) { return abs_pow(f, 1.0); }

/// Integral of f over B_k. Throws DomainError for a non-integrable inner tail.
double cumulative_integral(const RadialStepFunction& f, int k);

/// Integral of f over Q_p^n, or nullopt when the outer tail is not integrable.
std::optional<double> total_integral(const RadialStepFunction& f);

/// Mean of f over B_gamma.
double ball_mean(const RadialStepFunction& f, int gamma);

struct ExponentSummary {
  double u_minus;
  double u_plus;
  double u_infinity;
  bool admissible_for_conjugation;
};

/**
 * Radial variable exponent: u_j on the window, u_inner on every shell below it
 * (and at the origin), u_infinity on every shell above it.
 *
 * Values must be finite and >= 1; value 1 is admitted so that u/s with
 * s = u_- stays representable, but such exponents cannot be conjugated.
 */
class ExponentFunction {
 public:
  ExponentFunction(PadicContext ctx, int j_min, std::vector<double> values, double u_inner, double u_infinity);

  static ExponentFunction constant(const PadicContext& ctx, double u);

  const PadicContext& context() const noexcept { return ctx_; }
  int j_min() const noexcept { return j_min_; }
  int j_max() const noexcept { return j_min_ + static_cast<int>(values_.size()) - 1; }
  std::span<const double> values() const noexcept { return values_; }
  double inner() const noexcept { return u_inner_; }
  double infinity() const noexcept { return u_infinity_; }

  double operator()(int k) const noexcept;

  double minus() const noexcept;
  double plus() const noexcept;
  ExponentSummary summary() const noexcept;

  /// True if u takes a single value on every shell <= gamma.
  bool constant_on_ball(int gamma) const noexcept;
  bool is_constant() const noexcept;

 private:
  PadicContext ctx_;
  int j_min_;
  std::vector<double> values_;
  double u_inner_;
  double u_infinity_;
};

/// u' = u / (u - 1) piecewise.
ExponentFunction conjugate(const ExponentFunction& u);

/// v with 1/v = 1/u - alpha/n piecewise; requires 0 <= alpha < n/u_+.
ExponentFunction sobolev_shift(const ExponentFunction& u, double alpha);

/// u / s piecewise, s > 0 and s <= u_-.
ExponentFunction divide(const ExponentFunction& u, double s);

/// u(x, k): u on the shell of x for k < 0, u(infinity) for k >= 0.
double exponent_at(const ExponentFunction& u, int x_shell, int k) noexcept;

enum class RegularityMode { w0, w_infinity, lipschitz };

struct RegularityWitness {
  int first_shell;
  int second_shell;
};

struct RegularityReport {
  RegularityMode mode;
  bool satisfied;
  /// Sup of the defining quantity over the representable structure (the smallest
  /// admissible constant C, or L for the Lipschitz mode).
  double constant;
  RegularityWitness witness;
  /// Every candidate was examined; false if the witness budget ran out first.
  bool exhaustive;
  std::string verdict;
};

/**
 * Bounded search for the smallest constant in the W_0, W^infinity or Lipschitz
 * condition. For a radial exponent with constant tails the shells in
 * [j_min - 1, j_max + 1] (and the origin) realize every value of the defining
 * quantities, so the scan is exact when the budget covers it.
 *
 * `satisfied` means the constant found is <= max_constant.
 */
RegularityReport check_regularity(const ExponentFunction& u, RegularityMode mode, int witness_budget,
                                  double max_constant = std::numeric_limits<double>::infinity());

}  // namespace ultraherz
