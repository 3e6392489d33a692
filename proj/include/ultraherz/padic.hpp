#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ultraherz {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Raised when an input lies outside the domain of an operation
/// (zero denominator, non-integrable tail, unbounded conjugate, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

bool is_prime(std::int64_t value) noexcept;

/**
 * The field Q_p^n: a prime p and a dimension n.
 *
 * Shell indices passed to the exact measure functions are limited to
 * [-shell_limit, shell_limit]; p^{n*64} is already a ~600-digit integer
 * for the larger primes and nothing in the library needs more.
 */
class PadicContext {
 public:
  static constexpr int kDefaultShellLimit = 64;

  PadicContext(int p, int n, int shell_limit = kDefaultShellLimit);

  int p() const noexcept { return p_; }
  int n() const noexcept { return n_; }
  int shell_limit() const noexcept { return shell_limit_; }
  double prime() const noexcept { return static_cast<double>(p_); }

  /// Throws std::out_of_range if |k| exceeds the shell limit.
  void check_shell(int k) const;

  friend bool operator==(const PadicContext&, const PadicContext&) = default;

 private:
  int p_;
  int n_;
  int shell_limit_;
};

/// p-adic valuation of a rational; the valuation of 0 is +infinity.
class Valuation {
 public:
  static Valuation infinite() noexcept { return Valuation{}; }
  static Valuation finite(std::int64_t v) noexcept { return Valuation{v}; }

  bool is_infinite() const noexcept { return !value_.has_value(); }
  /// Precondition: !is_infinite().
  std::int64_t value() const { return value_.value(); }

  friend bool operator==(const Valuation&, const Valuation&) = default;

 private:
  Valuation() = default;
  explicit Valuation(std::int64_t v) : value_(v) {}
  std::optional<std::int64_t> value_;
};

/// gamma with numerator/denominator = p^gamma s/t and p dividing neither s nor t.
Valuation padic_valuation(std::int64_t numerator, std::int64_t denominator, const PadicContext& ctx);

/// One coordinate x = p^valuation * sum_i digits[i] p^i, truncated.
/// A zero coordinate has no valuation and all-zero digits.
struct PadicCoordinate {
  std::optional<int> valuation;
  std::vector<int> digits;
};

/**
 * A point of Q_p^n stored as truncated digit expansions, one per coordinate.
 * Every coordinate carries exactly resolution + 1 digits.
 */
class PadicPoint {
 public:
  PadicPoint(PadicContext ctx, std::vector<PadicCoordinate> coords, int resolution);

  /// Expands each rational s/t into resolution + 1 digits.
  static PadicPoint from_rationals(const PadicContext& ctx,
                                   std::span<const std::pair<std::int64_t, std::int64_t>> coords,
                                   int resolution);

  const PadicContext& context() const noexcept { return ctx_; }
  std::span<const PadicCoordinate> coordinates() const noexcept { return coords_; }
  int resolution() const noexcept { return resolution_; }

  bool is_zero() const noexcept;
  /// k with |x|_p = p^k, or nullopt for the origin.
  std::optional<int> shell() const noexcept;

 private:
  PadicContext ctx_;
  std::vector<PadicCoordinate> coords_;
  int resolution_;
};

/// max_i p^{-valuation_i}; 0 at the origin.
Rational vector_norm(const PadicPoint& x);

/// Exact sum of the two truncated expansions, re-truncated to the smaller resolution.
PadicPoint operator+(const PadicPoint& x, const PadicPoint& y);

/// p^a * x.
PadicPoint scale_by_prime_power(const PadicPoint& x, int a);

/// Exact p^e (e may be negative).
Rational prime_power(const PadicContext& ctx, int e);

/// Haar measure of B_gamma(a): p^{n gamma}.
Rational ball_measure(int gamma, const PadicContext& ctx);
/// Haar measure of S_gamma(a): p^{n gamma} (1 - p^{-n}).
Rational sphere_measure(int gamma, const PadicContext& ctx);

/// first / (1 - ratio), exact; requires |ratio| < 1.
Rational geometric_series(const Rational& first, const Rational& ratio);

// Floating-point measures for the numeric modules. No shell-limit check.
double ball_measure_value(int gamma, const PadicContext& ctx) noexcept;
double sphere_measure_value(int gamma, const PadicContext& ctx) noexcept;

struct Region {
  enum class Kind { ball, sphere };
  Kind kind = Kind::ball;
  int index = 0;

  static Region ball(int gamma) { return {Kind::ball, gamma}; }
  static Region sphere(int gamma) { return {Kind::sphere, gamma}; }
};

inline constexpr int kDefaultResolution = 24;

/// Haar-uniform point in the region, truncated to resolution + 1 digits per coordinate.
PadicPoint sample_uniform(Region region, int resolution, std::mt19937_64& rng, const PadicContext& ctx);
PadicPoint sample_uniform(Region region, int resolution, std::uint64_t seed, const PadicContext& ctx);

}  // namespace ultraherz
