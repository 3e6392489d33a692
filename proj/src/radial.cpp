#include "ultraherz/radial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ultraherz {

namespace {

constexpr double kRateTolerance = 1e-12;

PowerTail canonical(PowerTail t) noexcept {
  if (t.amplitude == 0.0) t.rate = 0.0;
  return t;
}

PowerTail merge_sum(const PowerTail& a, const PowerTail& b, const char* side) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (std::abs(a.rate - b.rate) > kRateTolerance) {
    std::ostringstream msg;
    msg << "add: " << side << " tail rates " << a.rate << " and " << b.rate
        << " differ; widen the windows so one operand's tail region is covered by explicit coefficients";
    throw TailMismatch(msg.str());
  }
  return canonical({a.amplitude + b.amplitude, a.rate});
}

PowerTail merge_product(const PowerTail& a, const PowerTail& b) noexcept {
  if (a.is_zero() || b.is_zero()) return {};
  return {a.amplitude * b.amplitude, a.rate + b.rate};
}

void require_same_context(const RadialStepFunction& f, const RadialStepFunction& g, const char* op) {
  if (!(f.context() == g.context())) throw std::invalid_argument(std::string(op) + ": context mismatch");
}

std::vector<double> sample_window(const RadialStepFunction& f, int lo, int hi) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int k = lo; k <= hi; ++k) out.push_back(f(k));
  return out;
}

// sum_{j=a}^{b} r^j for a <= b.
double finite_geometric(double r, int a, int b) {
  if (b < a) return 0.0;
  if (r == 1.0) return static_cast<double>(b - a + 1);
  return (std::pow(r, a) - std::pow(r, b + 1)) / (1.0 - r);
}

// Integral of the inner tail over B_upto, upto < j_min.
double inner_tail_integral(const RadialStepFunction& f, int upto) {
  const auto& t = f.inner_tail();
  if (t.is_zero()) return 0.0;
  const double p = f.context().prime();
  const double n = f.context().n();
  if (t.rate + n <= 0.0) {
    std::ostringstream msg;
    msg << "inner tail rate " << t.rate << " is not integrable near the origin (needs rate > " << -n << ")";
    throw DomainError(msg.str());
  }
  const double shrink = 1.0 - std::pow(p, -n);
  return t.amplitude * shrink * std::pow(p, upto * (t.rate + n)) / (1.0 - std::pow(p, -(t.rate + n)));
}

}  // namespace

double PowerTail::at(double p, int k) const noexcept {
  if (amplitude == 0.0) return 0.0;
  return amplitude * std::pow(p, k * rate);
}

RadialStepFunction::RadialStepFunction(PadicContext ctx, int j_min, std::vector<double> coeffs, PowerTail inner,
                                       PowerTail outer, std::optional<double> value_at_zero)
    : ctx_(ctx), j_min_(j_min), coeffs_(std::move(coeffs)), inner_(canonical(inner)), outer_(canonical(outer)) {
  if (coeffs_.empty()) throw std::invalid_argument("RadialStepFunction: empty window");
  ctx_.check_shell(j_min_);
  ctx_.check_shell(j_max());
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw std::invalid_argument("RadialStepFunction: non-finite coefficient");
  }
  if (!std::isfinite(inner_.amplitude) || !std::isfinite(inner_.rate) || !std::isfinite(outer_.amplitude) ||
      !std::isfinite(outer_.rate)) {
    throw std::invalid_argument("RadialStepFunction: non-finite tail");
  }
  value_at_zero_ = value_at_zero.value_or(inner_.rate == 0.0 ? inner_.amplitude : 0.0);
}

RadialStepFunction RadialStepFunction::zero(const PadicContext& ctx) { return {ctx, 0, {0.0}}; }

RadialStepFunction RadialStepFunction::constant(const PadicContext& ctx, double c) {
  return {ctx, 0, {c}, {c, 0.0}, {c, 0.0}};
}

RadialStepFunction RadialStepFunction::shell_indicator(const PadicContext& ctx, int k, double c) {
  return {ctx, k, {c}};
}

RadialStepFunction RadialStepFunction::ball_indicator(const PadicContext& ctx, int gamma, double c) {
  return {ctx, gamma, {c}, {c, 0.0}};
}

double RadialStepFunction::operator()(int k) const noexcept {
  if (k < j_min_) return inner_.at(ctx_.prime(), k);
  if (k > j_max()) return outer_.at(ctx_.prime(), k);
  return coeffs_[static_cast<std::size_t>(k - j_min_)];
}

bool RadialStepFunction::is_zero() const noexcept {
  return inner_.is_zero() && outer_.is_zero() &&
         std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

bool RadialStepFunction::inner_integrable() const noexcept {
  return inner_.is_zero() || inner_.rate > -static_cast<double>(ctx_.n());
}

RadialStepFunction widen(const RadialStepFunction& f, int lo, int hi) {
  lo = std::min(lo, f.j_min());
  hi = std::max(hi, f.j_max());
  return {f.context(), lo, sample_window(f, lo, hi), f.inner_tail(), f.outer_tail(), f.value_at_zero()};
}

RadialStepFunction add(const RadialStepFunction& f, const RadialStepFunction& g) {
  require_same_context(f, g, "add");
  const int lo = std::min(f.j_min(), g.j_min());
  const int hi = std::max(f.j_max(), g.j_max());
  std::vector<double> coeffs;
  coeffs.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int k = lo; k <= hi; ++k) coeffs.push_back(f(k) + g(k));
  return {f.context(),
          lo,
          std::move(coeffs),
          merge_sum(f.inner_tail(), g.inner_tail(), "inner"),
          merge_sum(f.outer_tail(), g.outer_tail(), "outer"),
          f.value_at_zero() + g.value_at_zero()};
}

RadialStepFunction multiply(const RadialStepFunction& f, const RadialStepFunction& g) {
  require_same_context(f, g, "multiply");
  const int lo = std::min(f.j_min(), g.j_min());
  const int hi = std::max(f.j_max(), g.j_max());
  std::vector<double> coeffs;
  coeffs.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int k = lo; k <= hi; ++k) coeffs.push_back(f(k) * g(k));
  return {f.context(),
          lo,
          std::move(coeffs),
          merge_product(f.inner_tail(), g.inner_tail()),
          merge_product(f.outer_tail(), g.outer_tail()),
          f.value_at_zero() * g.value_at_zero()};
}

RadialStepFunction scale(const RadialStepFunction& f, double c) {
  std::vector<double> coeffs(f.coeffs().begin(), f.coeffs().end());
  for (double& v : coeffs) v *= c;
  const auto& in = f.inner_tail();
  const auto& out = f.outer_tail();
  return {f.context(), f.j_min(), std::move(coeffs), {in.amplitude * c, in.rate}, {out.amplitude * c, out.rate},
          f.value_at_zero() * c};
}

RadialStepFunction abs_pow(const RadialStepFunction& f, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("abs_pow: exponent must be positive");
  std::vector<double> coeffs;
  coeffs.reserve(f.coeffs().size());
  for (double c : f.coeffs()) coeffs.push_back(std::pow(std::abs(c), s));
  auto tail = [s](const PowerTail& t) -> PowerTail {
    if (t.is_zero()) return {};
    return {std::pow(std::abs(t.amplitude), s), t.rate * s};
  };
  return {f.context(), f.j_min(), std::move(coeffs), tail(f.inner_tail()), tail(f.outer_tail()),
          std::pow(std::abs(f.value_at_zero()), s)};
}

double cumulative_integral(const RadialStepFunction& f, int k) {
  if (k < f.j_min()) return inner_tail_integral(f, k);
  const auto& ctx = f.context();
  double acc = inner_tail_integral(f, f.j_min() - 1);
  const int top = std::min(k, f.j_max());
  for (int j = f.j_min(); j <= top; ++j) acc += f(j) * sphere_measure_value(j, ctx);
  const auto& out = f.outer_tail();
  if (k > f.j_max() && !out.is_zero()) {
    const double p = ctx.prime();
    const double n = ctx.n();
    acc += out.amplitude * (1.0 - std::pow(p, -n)) * finite_geometric(std::pow(p, out.rate + n), f.j_max() + 1, k);
  }
  return acc;
}

std::optional<double> total_integral(const RadialStepFunction& f) {
  const auto& out = f.outer_tail();
  const double n = f.context().n();
  const double p = f.context().prime();
  double acc = cumulative_integral(f, f.j_max());
  if (out.is_zero()) return acc;
  if (out.rate + n >= 0.0) return std::nullopt;
  const double r = std::pow(p, out.rate + n);
  acc += out.amplitude * (1.0 - std::pow(p, -n)) * std::pow(r, f.j_max() + 1) / (1.0 - r);
  return acc;
}

double ball_mean(const RadialStepFunction& f, int gamma) {
  return cumulative_integral(f, gamma) / ball_measure_value(gamma, f.context());
}

// ---------------------------------------------------------------------------
// ExponentFunction

ExponentFunction::ExponentFunction(PadicContext ctx, int j_min, std::vector<double> values, double u_inner,
                                   double u_infinity)
    : ctx_(ctx), j_min_(j_min), values_(std::move(values)), u_inner_(u_inner), u_infinity_(u_infinity) {
  if (values_.empty()) throw std::invalid_argument("ExponentFunction: empty window");
  ctx_.check_shell(j_min_);
  ctx_.check_shell(j_max());
  auto check = [](double u) {
    if (!std::isfinite(u) || u < 1.0) throw std::invalid_argument("ExponentFunction: values must lie in [1, inf)");
  };
  for (double u : values_) check(u);
  check(u_inner_);
  check(u_infinity_);
}

ExponentFunction ExponentFunction::constant(const PadicContext& ctx, double u) { return {ctx, 0, {u}, u, u}; }

double ExponentFunction::operator()(int k) const noexcept {
  if (k < j_min_) return u_inner_;
  if (k > j_max()) return u_infinity_;
  return values_[static_cast<std::size_t>(k - j_min_)];
}

double ExponentFunction::minus() const noexcept {
  return std::min({*std::min_element(values_.begin(), values_.end()), u_inner_, u_infinity_});
}

double ExponentFunction::plus() const noexcept {
  return std::max({*std::max_element(values_.begin(), values_.end()), u_inner_, u_infinity_});
}

ExponentSummary ExponentFunction::summary() const noexcept {
  return {minus(), plus(), u_infinity_, minus() > 1.0};
}

bool ExponentFunction::constant_on_ball(int gamma) const noexcept {
  for (int k = j_min_; k <= std::min(gamma, j_max()); ++k) {
    if ((*this)(k) != u_inner_) return false;
  }
  return gamma <= j_max() || u_infinity_ == u_inner_;
}

bool ExponentFunction::is_constant() const noexcept { return constant_on_ball(j_max() + 1); }

namespace {

template <typename Fn>
ExponentFunction map_pieces(const ExponentFunction& u, Fn&& fn) {
  std::vector<double> values;
  values.reserve(u.values().size());
  for (int k = u.j_min(); k <= u.j_max(); ++k) values.push_back(fn(u(k), "shell " + std::to_string(k)));
  const double inner = fn(u.inner(), std::string("shells below ") + std::to_string(u.j_min()));
  const double outer = fn(u.infinity(), std::string("shells above ") + std::to_string(u.j_max()));
  return {u.context(), u.j_min(), std::move(values), inner, outer};
}

}  // namespace

ExponentFunction conjugate(const ExponentFunction& u) {
  return map_pieces(u, [](double v, const std::string& where) {
    if (v <= 1.0) throw DomainError("conjugate: exponent equals 1 on " + where + ", conjugate is unbounded");
    return v / (v - 1.0);
  });
}

ExponentFunction sobolev_shift(const ExponentFunction& u, double alpha) {
  if (alpha < 0.0) throw HypothesisViolation("sobolev_shift: alpha must be >= 0");
  if (alpha == 0.0) return u;
  const double n = u.context().n();
  return map_pieces(u, [alpha, n](double v, const std::string& where) {
    const double inv = 1.0 / v - alpha / n;
    if (!(inv > 0.0)) {
      std::ostringstream msg;
      msg << "sobolev_shift: alpha = " << alpha << " >= n/u = " << n / v << " on " << where;
      throw HypothesisViolation(msg.str());
    }
    return 1.0 / inv;
  });
}

ExponentFunction divide(const ExponentFunction& u, double s) {
  if (!(s > 0.0) || s > u.minus()) throw std::invalid_argument("divide: s must lie in (0, u_-]");
  return map_pieces(u, [s](double v, const std::string&) { return std::max(1.0, v / s); });
}

double exponent_at(const ExponentFunction& u, int x_shell, int k) noexcept {
  return k < 0 ? u(x_shell) : u.infinity();
}

// ---------------------------------------------------------------------------
// Regularity classes

namespace {

const char* mode_name(RegularityMode mode) {
  switch (mode) {
    case RegularityMode::w0: return "W0";
    case RegularityMode::w_infinity: return "Winfty";
    case RegularityMode::lipschitz: return "Lipschitz";
  }
  return "?";
}

}  // namespace

RegularityReport check_regularity(const ExponentFunction& u, RegularityMode mode, int witness_budget,
                                  double max_constant) {
  if (witness_budget < 1) throw std::invalid_argument("check_regularity: witness_budget must be >= 1");
  const double p = u.context().prime();
  const int lo = u.j_min() - 1;
  const int hi = u.j_max() + 1;
  // The origin is encoded as shell lo - 1: same exponent as the inner shells, norm 0.
  const int origin = lo - 1;

  double best = 0.0;
  RegularityWitness witness{lo, lo};
  long budget = witness_budget;
  bool exhaustive = true;

  auto consider = [&](double value, int a, int b) {
    if (value > best) {
      best = value;
      witness = {a, b};
    }
  };

  switch (mode) {
    case RegularityMode::w0: {
      // Balls B_gamma(x) with gamma < shell(x) sit inside one sphere; otherwise B_gamma(x) = B_gamma(0).
      double lo_val = u.inner();
      double hi_val = u.inner();
      int extreme = lo;
      for (int gamma = lo; gamma <= hi && exhaustive; ++gamma) {
        if (budget-- <= 0) {
          exhaustive = false;
          break;
        }
        const double v = u(gamma);
        if (v < lo_val || v > hi_val) extreme = gamma;
        lo_val = std::min(lo_val, v);
        hi_val = std::max(hi_val, v);
        consider(gamma * (lo_val - hi_val), gamma, extreme);
      }
      break;
    }
    case RegularityMode::w_infinity:
    case RegularityMode::lipschitz: {
      for (int a = origin; a <= hi && exhaustive; ++a) {
        for (int b = a + 1; b <= hi; ++b) {
          if (budget-- <= 0) {
            exhaustive = false;
            break;
          }
          const double diff = std::abs(u(a) - u(b));
          if (mode == RegularityMode::w_infinity) {
            const double min_norm = a == origin ? 0.0 : std::pow(p, a);
            consider(diff * std::log(p + min_norm) / std::log(p), a, b);
          } else {
            // |x - y|_p = p^{max(shell x, shell y)} for points on distinct shells.
            consider(diff / std::pow(p, b), a, b);
          }
        }
      }
      break;
    }
  }

  RegularityReport report{mode, best <= max_constant, best, witness, exhaustive, {}};
  std::ostringstream verdict;
  if (report.satisfied) {
    verdict << mode_name(mode) << " satisfied with constant " << best << " over the representable structure";
  } else {
    verdict << mode_name(mode) << " violated at shells (" << witness.first_shell << ", " << witness.second_shell
            << "): constant " << best << " exceeds " << max_constant;
  }
  if (!exhaustive) verdict << " (witness budget exhausted, partial scan)";
  report.verdict = verdict.str();
  return report;
}

}  // namespace ultraherz
