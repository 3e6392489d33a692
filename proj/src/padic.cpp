#include "ultraherz/padic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ultraherz {

namespace {

// Leading zero digits drawn before a sampled coordinate is declared zero.
// The probability of reaching it is p^{-512}.
constexpr int kZeroDigitCap = 512;

std::uint64_t unsigned_abs(std::int64_t v) noexcept {
  return v < 0 ? std::uint64_t{0} - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
}

int strip_prime(std::uint64_t& v, std::uint64_t p) noexcept {
  int count = 0;
  while (v % p == 0) {
    v /= p;
    ++count;
  }
  return count;
}

BigInt mod_inverse(BigInt a, const BigInt& modulus) {
  BigInt old_r = a % modulus, r = modulus;
  if (old_r < 0) old_r += modulus;
  BigInt old_s = 1, s = 0;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw DomainError("mod_inverse: denominator not a p-adic unit");
  old_s %= modulus;
  if (old_s < 0) old_s += modulus;
  return old_s;
}

// Base-p digits of a nonnegative integer, least significant first, exactly `count` of them.
std::vector<int> base_p_digits(BigInt value, int p, int count) {
  std::vector<int> digits(static_cast<std::size_t>(count), 0);
  for (int i = 0; i < count && value != 0; ++i) {
    digits[static_cast<std::size_t>(i)] = static_cast<int>(value % p);
    value /= p;
  }
  return digits;
}

PadicCoordinate zero_coordinate(int resolution) {
  return {std::nullopt, std::vector<int>(static_cast<std::size_t>(resolution) + 1, 0)};
}

// Coordinate of a Haar-uniform element of p^{-gamma} Z_p.
PadicCoordinate sample_coordinate(int gamma, int resolution, int p, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> digit(0, p - 1);
  int leading_zeros = 0;
  int first = 0;
  while ((first = digit(rng)) == 0) {
    if (++leading_zeros >= kZeroDigitCap) return zero_coordinate(resolution);
  }
  PadicCoordinate c;
  c.valuation = -gamma + leading_zeros;
  c.digits.reserve(static_cast<std::size_t>(resolution) + 1);
  c.digits.push_back(first);
  for (int i = 0; i < resolution; ++i) c.digits.push_back(digit(rng));
  return c;
}

// Integer sum_i digits[i] p^{i + shift}.
BigInt digits_value(const std::vector<int>& digits, int p, int shift) {
  BigInt acc = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) acc = acc * p + *it;
  BigInt scale = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(shift));
  return acc * scale;
}

}  // namespace

bool is_prime(std::int64_t value) noexcept {
  if (value < 2) return false;
  if (value < 4) return true;
  if (value % 2 == 0) return false;
  for (std::int64_t d = 3; d <= value / d; d += 2) {
    if (value % d == 0) return false;
  }
  return true;
}

PadicContext::PadicContext(int p, int n, int shell_limit) : p_(p), n_(n), shell_limit_(shell_limit) {
  if (!is_prime(p)) throw std::invalid_argument("PadicContext: p = " + std::to_string(p) + " is not prime");
  if (n < 1) throw std::invalid_argument("PadicContext: dimension n must be >= 1");
  if (shell_limit < 1) throw std::invalid_argument("PadicContext: shell limit must be >= 1");
}

void PadicContext::check_shell(int k) const {
  if (k < -shell_limit_ || k > shell_limit_) {
    throw std::out_of_range("shell index " + std::to_string(k) + " outside [-" + std::to_string(shell_limit_) +
                            ", " + std::to_string(shell_limit_) + "]");
  }
}

Valuation padic_valuation(std::int64_t numerator, std::int64_t denominator, const PadicContext& ctx) {
  if (denominator == 0) throw DomainError("padic_valuation: zero denominator");
  if (numerator == 0) return Valuation::infinite();
  const auto p = static_cast<std::uint64_t>(ctx.p());
  std::uint64_t num = unsigned_abs(numerator);
  std::uint64_t den = unsigned_abs(denominator);
  return Valuation::finite(strip_prime(num, p) - strip_prime(den, p));
}

PadicPoint::PadicPoint(PadicContext ctx, std::vector<PadicCoordinate> coords, int resolution)
    : ctx_(ctx), coords_(std::move(coords)), resolution_(resolution) {
  if (resolution < 0) throw std::invalid_argument("PadicPoint: negative resolution");
  if (coords_.size() != static_cast<std::size_t>(ctx_.n())) {
    throw std::invalid_argument("PadicPoint: expected " + std::to_string(ctx_.n()) + " coordinates");
  }
  for (const auto& c : coords_) {
    if (c.digits.size() != static_cast<std::size_t>(resolution) + 1) {
      throw std::invalid_argument("PadicPoint: digit count must equal resolution + 1");
    }
    for (int d : c.digits) {
      if (d < 0 || d >= ctx_.p()) throw std::invalid_argument("PadicPoint: digit out of range");
    }
    if (c.valuation.has_value() && c.digits.front() == 0) {
      throw std::invalid_argument("PadicPoint: leading digit of a nonzero coordinate must be nonzero");
    }
    if (!c.valuation.has_value() && std::any_of(c.digits.begin(), c.digits.end(), [](int d) { return d != 0; })) {
      throw std::invalid_argument("PadicPoint: zero coordinate with nonzero digits");
    }
  }
}

PadicPoint PadicPoint::from_rationals(const PadicContext& ctx,
                                      std::span<const std::pair<std::int64_t, std::int64_t>> coords,
                                      int resolution) {
  const int p = ctx.p();
  const BigInt modulus = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(resolution + 1));
  std::vector<PadicCoordinate> out;
  out.reserve(coords.size());
  for (const auto& [num, den] : coords) {
    const Valuation v = padic_valuation(num, den, ctx);
    if (v.is_infinite()) {
      out.push_back(zero_coordinate(resolution));
      continue;
    }
    std::uint64_t s = unsigned_abs(num);
    std::uint64_t t = unsigned_abs(den);
    strip_prime(s, static_cast<std::uint64_t>(p));
    strip_prime(t, static_cast<std::uint64_t>(p));
    BigInt unit = BigInt(s) * mod_inverse(BigInt(t), modulus);
    if ((num < 0) != (den < 0)) unit = -unit;
    unit %= modulus;
    if (unit < 0) unit += modulus;
    out.push_back({static_cast<int>(v.value()), base_p_digits(unit, p, resolution + 1)});
  }
  return PadicPoint(ctx, std::move(out), resolution);
}

bool PadicPoint::is_zero() const noexcept {
  return std::none_of(coords_.begin(), coords_.end(), [](const PadicCoordinate& c) { return c.valuation.has_value(); });
}

std::optional<int> PadicPoint::shell() const noexcept {
  std::optional<int> min_val;
  for (const auto& c : coords_) {
    if (c.valuation && (!min_val || *c.valuation < *min_val)) min_val = c.valuation;
  }
  if (!min_val) return std::nullopt;
  return -*min_val;
}

Rational vector_norm(const PadicPoint& x) {
  const auto k = x.shell();
  if (!k) return Rational(0);
  return prime_power(x.context(), *k);
}

PadicPoint operator+(const PadicPoint& x, const PadicPoint& y) {
  if (!(x.context() == y.context())) throw std::invalid_argument("PadicPoint +: context mismatch");
  const int p = x.context().p();
  const int resolution = std::min(x.resolution(), y.resolution());
  std::vector<PadicCoordinate> out;
  for (std::size_t i = 0; i < x.coordinates().size(); ++i) {
    const auto& a = x.coordinates()[i];
    const auto& b = y.coordinates()[i];
    if (!a.valuation || !b.valuation) {
      const auto& nonzero = a.valuation ? a : b;
      if (!nonzero.valuation) {
        out.push_back(zero_coordinate(resolution));
      } else {
        PadicCoordinate c{nonzero.valuation, {nonzero.digits.begin(), nonzero.digits.begin() + resolution + 1}};
        out.push_back(std::move(c));
      }
      continue;
    }
    const int base = std::min(*a.valuation, *b.valuation);
    BigInt sum = digits_value(a.digits, p, *a.valuation - base) + digits_value(b.digits, p, *b.valuation - base);
    if (sum == 0) {
      out.push_back(zero_coordinate(resolution));
      continue;
    }
    int shift = 0;
    while (sum % p == 0) {
      sum /= p;
      ++shift;
    }
    out.push_back({base + shift, base_p_digits(sum, p, resolution + 1)});
  }
  return PadicPoint(x.context(), std::move(out), resolution);
}

PadicPoint scale_by_prime_power(const PadicPoint& x, int a) {
  std::vector<PadicCoordinate> out(x.coordinates().begin(), x.coordinates().end());
  for (auto& c : out) {
    if (c.valuation) *c.valuation += a;
  }
  return PadicPoint(x.context(), std::move(out), x.resolution());
}

Rational prime_power(const PadicContext& ctx, int e) {
  const BigInt magnitude = boost::multiprecision::pow(BigInt(ctx.p()), static_cast<unsigned>(e < 0 ? -e : e));
  return e < 0 ? Rational(BigInt(1), magnitude) : Rational(magnitude);
}

Rational ball_measure(int gamma, const PadicContext& ctx) {
  ctx.check_shell(gamma);
  return prime_power(ctx, ctx.n() * gamma);
}

Rational sphere_measure(int gamma, const PadicContext& ctx) {
  ctx.check_shell(gamma);
  return prime_power(ctx, ctx.n() * gamma) * (Rational(1) - prime_power(ctx, -ctx.n()));
}

Rational geometric_series(const Rational& first, const Rational& ratio) {
  if (abs(ratio) >= 1) throw DomainError("geometric_series: |ratio| must be < 1");
  return first / (Rational(1) - ratio);
}

double ball_measure_value(int gamma, const PadicContext& ctx) noexcept {
  return std::pow(ctx.prime(), static_cast<double>(ctx.n()) * gamma);
}

double sphere_measure_value(int gamma, const PadicContext& ctx) noexcept {
  return ball_measure_value(gamma, ctx) * (1.0 - std::pow(ctx.prime(), -static_cast<double>(ctx.n())));
}

PadicPoint sample_uniform(Region region, int resolution, std::mt19937_64& rng, const PadicContext& ctx) {
  if (resolution < 1) throw std::invalid_argument("sample_uniform: resolution must be >= 1");
  for (;;) {
    std::vector<PadicCoordinate> coords;
    coords.reserve(static_cast<std::size_t>(ctx.n()));
    for (int i = 0; i < ctx.n(); ++i) coords.push_back(sample_coordinate(region.index, resolution, ctx.p(), rng));
    PadicPoint point(ctx, std::move(coords), resolution);
    // Sphere draws are ball draws conditioned on the outermost shell; acceptance >= 1/2.
    if (region.kind == Region::Kind::ball || point.shell() == region.index) return point;
  }
}

PadicPoint sample_uniform(Region region, int resolution, std::uint64_t seed, const PadicContext& ctx) {
  std::mt19937_64 rng(seed);
  return sample_uniform(region, resolution, rng, ctx);
}

}  // namespace ultraherz
