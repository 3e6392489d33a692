#include "ultraherz/operators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace ultraherz {

namespace {

constexpr double kFitRelTol = 1e-14;
constexpr double kRateEps = 1e-12;

void check_alpha(const RadialStepFunction& f, double alpha, const char* op) {
  const double n = f.context().n();
  if (!(alpha >= 0.0 && alpha < n)) {
    std::ostringstream msg;
    msg << op << ": alpha = " << alpha << " outside [0, n) with n = " << n;
    throw HypothesisViolation(msg.str());
  }
}

double shrink(const PadicContext& ctx) { return 1.0 - std::pow(ctx.prime(), -static_cast<double>(ctx.n())); }

/**
 * Builds the radial step function with the given shell values, explicit on a
 * window around [core_lo, core_hi] and following the asymptotic laws beyond it.
 * The window is widened until the law reproduces the exact values to kFitRelTol
 * on three consecutive shells past each edge.
 */
RadialStepFunction fit_to_class(const PadicContext& ctx, int core_lo, int core_hi,
                                const std::function<double(int)>& value, PowerTail inner_law, PowerTail outer_law,
                                const char* op) {
  const double p = ctx.prime();
  const int limit = ctx.shell_limit();
  auto matches = [&](int k, const PowerTail& law) {
    const double v = value(k);
    const double w = law.at(p, k);
    return std::abs(v - w) <= kFitRelTol * std::abs(w);
  };
  auto settled = [&](int edge, int step, const PowerTail& law) {
    for (int i = 1; i <= 3; ++i) {
      if (!matches(edge + i * step, law)) return false;
    }
    return true;
  };

  int lo = std::max(core_lo - 1, -limit);
  int hi = std::min(core_hi + 1, limit);
  while (!settled(lo, -1, inner_law)) {
    if (lo <= -limit) throw DomainError(std::string(op) + ": output inner tail does not settle within the shell limit");
    --lo;
  }
  while (!settled(hi, +1, outer_law)) {
    if (hi >= limit) throw DomainError(std::string(op) + ": output outer tail does not settle within the shell limit");
    ++hi;
  }
  std::vector<double> coeffs;
  coeffs.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int k = lo; k <= hi; ++k) coeffs.push_back(value(k));
  return {ctx, lo, std::move(coeffs), inner_law, outer_law};
}

// Sum_{j=a}^{b} r^j.
double finite_geometric(double r, int a, int b) {
  if (b < a) return 0.0;
  if (r == 1.0) return static_cast<double>(b - a + 1);
  return (std::pow(r, a) - std::pow(r, b + 1)) / (1.0 - r);
}

bool is_constant_symbol(const RadialStepFunction& b) {
  const double c = b.inner_tail().amplitude;
  if (b.inner_tail().rate != 0.0 || b.outer_tail().rate != 0.0 || b.outer_tail().amplitude != c) return false;
  return std::all_of(b.coeffs().begin(), b.coeffs().end(), [c](double v) { return v == c; });
}

/**
 * Ball means of |f| and their suffix suprema sup_{gamma >= k}.
 *
 * Above the window the mean is a x^gamma + b y^gamma with x = p^{-n},
 * y = p^{e_out}; the scan stops once |a| x^K + |b| y^K falls below the best
 * value seen, which certifies the supremum.
 */
class MaximalEvaluator {
 public:
  explicit MaximalEvaluator(const RadialStepFunction& f) : g_(abs(f)) {
    if (!g_.inner_integrable()) throw DomainError("maximal: inner tail is not locally integrable");
    const auto& ctx = g_.context();
    p_ = ctx.prime();
    n_ = ctx.n();
    const auto& out = g_.outer_tail();
    if (!out.is_zero()) {
      if (out.rate > kRateEps) throw DomainError("maximal: outer tail grows, M f is infinite everywhere");
      if (std::abs(out.rate + n_) <= kRateEps) throw DomainError("maximal: outer tail rate -n is not supported");
      const double r = std::pow(p_, out.rate + n_);
      const double base = cumulative_integral(g_, g_.j_max());
      outer_a_ = base - out.amplitude * shrink(ctx) * std::pow(r, g_.j_max() + 1) / (r - 1.0);
      outer_b_ = out.amplitude * shrink(ctx) * r / (r - 1.0);
    } else {
      outer_a_ = cumulative_integral(g_, g_.j_max());
      outer_b_ = 0.0;
    }
    outer_sup_ = outer_suffix_sup(g_.j_max() + 1);
    window_sup_ = outer_sup_;
    window_suffix_.assign(g_.coeffs().size(), 0.0);
    for (int gamma = g_.j_max(); gamma >= g_.j_min(); --gamma) {
      window_sup_ = std::max(window_sup_, ball_mean(g_, gamma));
      window_suffix_[static_cast<std::size_t>(gamma - g_.j_min())] = window_sup_;
    }
    const auto& in = g_.inner_tail();
    kappa_ = in.is_zero() ? 0.0 : shrink(ctx) / (1.0 - std::pow(p_, -(in.rate + n_)));
  }

  const RadialStepFunction& magnitude() const { return g_; }

  double value(int k) const { return std::max(g_(k), suffix_sup(k)); }

  PowerTail inner_law() const {
    const auto& in = g_.inner_tail();
    if (in.is_zero()) return {window_sup_, 0.0};
    if (in.rate < 0.0) return {in.amplitude * kappa_, in.rate};
    if (in.rate > 0.0) return {std::max(in.amplitude * kappa_ * std::pow(p_, (g_.j_min() - 1) * in.rate), window_sup_), 0.0};
    return {std::max(in.amplitude, window_sup_), 0.0};
  }

  PowerTail outer_law() const {
    const auto& out = g_.outer_tail();
    if (out.is_zero()) return {outer_a_, -n_};
    if (out.rate < -n_) return {outer_a_, -n_};
    return {outer_b_, out.rate};
  }

 private:
  double outer_mean(int gamma) const {
    return outer_a_ * std::pow(p_, -n_ * gamma) + outer_b_ * std::pow(p_, g_.outer_tail().rate * gamma);
  }

  double outer_suffix_sup(int from) const {
    double best = 0.0;
    const double y_rate = g_.outer_tail().rate;
    for (int gamma = from;; ++gamma) {
      best = std::max(best, outer_mean(gamma));
      const double decaying = std::abs(outer_a_) * std::pow(p_, -n_ * gamma) +
                              (y_rate < 0.0 ? std::abs(outer_b_) * std::pow(p_, y_rate * gamma) : 0.0);
      if (outer_b_ == 0.0 || y_rate < 0.0) {
        if (decaying <= best || decaying == 0.0) return best;
      } else {
        // y = 1: the means tend to outer_b_.
        if (decaying <= 1e-16 * outer_b_) return std::max(best, outer_b_);
      }
      if (gamma - from > 100000) return best;
    }
  }

  double suffix_sup(int k) const {
    if (k > g_.j_max()) return outer_suffix_sup(k);
    if (k >= g_.j_min()) return window_suffix_[static_cast<std::size_t>(k - g_.j_min())];
    const auto& in = g_.inner_tail();
    double inner = 0.0;
    if (!in.is_zero()) {
      // Mean over B_gamma inside the inner region is kappa |A| p^{gamma e}, monotone in gamma.
      const int at = in.rate < 0.0 ? k : g_.j_min() - 1;
      inner = in.amplitude * kappa_ * std::pow(p_, at * in.rate);
    }
    return std::max(inner, window_sup_);
  }

  RadialStepFunction g_;
  double p_ = 2.0;
  double n_ = 1.0;
  double outer_a_ = 0.0;
  double outer_b_ = 0.0;
  double outer_sup_ = 0.0;
  double window_sup_ = 0.0;
  double kappa_ = 0.0;
  std::vector<double> window_suffix_;
};

}  // namespace

std::string_view to_string(OperatorKind kind) noexcept {
  switch (kind) {
    case OperatorKind::hardy: return "hardy";
    case OperatorKind::hardy_adjoint: return "hardy-adjoint";
    case OperatorKind::commutator: return "commutator";
    case OperatorKind::commutator_adjoint: return "commutator-adjoint";
    case OperatorKind::maximal: return "maximal";
  }
  return "?";
}

OperatorKind parse_operator_kind(std::string_view name) {
  for (auto kind : {OperatorKind::hardy, OperatorKind::hardy_adjoint, OperatorKind::commutator,
                    OperatorKind::commutator_adjoint, OperatorKind::maximal}) {
    if (name == to_string(kind)) return kind;
  }
  throw std::invalid_argument("unknown operator '" + std::string(name) + "'");
}

void OperatorSpec::validate(const PadicContext& ctx) const {
  const bool is_commutator = kind == OperatorKind::commutator || kind == OperatorKind::commutator_adjoint;
  if (is_commutator && !symbol) throw HypothesisViolation("commutator requires a symbol b");
  if (!is_commutator && symbol) throw HypothesisViolation(std::string(to_string(kind)) + " takes no symbol");
  if (kind != OperatorKind::maximal && !(alpha >= 0.0 && alpha < ctx.n())) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " outside [0, n) with n = " << ctx.n();
    throw HypothesisViolation(msg.str());
  }
  if (symbol && !(symbol->context() == ctx)) throw HypothesisViolation("symbol context differs from the function's");
}

double hardy_value(const RadialStepFunction& f, double alpha, int k) {
  const auto& ctx = f.context();
  return std::pow(ctx.prime(), k * (alpha - ctx.n())) * cumulative_integral(f, k);
}

double hardy_adjoint_value(const RadialStepFunction& f, double alpha, int k) {
  const auto& ctx = f.context();
  const double p = ctx.prime();
  double acc = 0.0;
  const auto& out = f.outer_tail();
  if (!out.is_zero()) {
    const double q = std::pow(p, out.rate + alpha);
    if (q >= 1.0) {
      std::ostringstream msg;
      msg << "hardy_adjoint: outer sum diverges, tail rate " << out.rate << " + alpha " << alpha << " >= 0";
      throw DomainError(msg.str());
    }
    const int from = std::max(k, f.j_max()) + 1;
    acc += out.amplitude * std::pow(q, from) / (1.0 - q);
  }
  for (int j = std::max(k + 1, f.j_min()); j <= f.j_max(); ++j) acc += f(j) * std::pow(p, j * alpha);
  const auto& in = f.inner_tail();
  if (!in.is_zero() && k + 1 <= f.j_min() - 1) {
    acc += in.amplitude * finite_geometric(std::pow(p, in.rate + alpha), k + 1, f.j_min() - 1);
  }
  return shrink(ctx) * acc;
}

double maximal_value(const RadialStepFunction& f, int k) { return MaximalEvaluator(f).value(k); }

RadialStepFunction hardy(const RadialStepFunction& f, double alpha) {
  check_alpha(f, alpha, "hardy");
  if (!f.inner_integrable()) throw DomainError("hardy: inner tail is not locally integrable");
  const auto& ctx = f.context();
  const double p = ctx.prime();
  const double n = ctx.n();

  PowerTail inner{};
  if (const auto& in = f.inner_tail(); !in.is_zero()) {
    inner = {in.amplitude * shrink(ctx) / (1.0 - std::pow(p, -(in.rate + n))), in.rate + alpha};
  }
  PowerTail outer{};
  const auto& out = f.outer_tail();
  if (out.is_zero()) {
    outer = {cumulative_integral(f, f.j_max()), alpha - n};
  } else {
    const double r = std::pow(p, out.rate + n);
    if (std::abs(out.rate + n) <= kRateEps) throw DomainError("hardy: outer tail rate -n gives a logarithmic output");
    const double secondary = out.amplitude * shrink(ctx) * r / (r - 1.0);
    if (r < 1.0) {
      const double total = total_integral(f).value();
      outer = std::abs(total) > 1e-15 * std::abs(secondary) ? PowerTail{total, alpha - n}
                                                             : PowerTail{secondary, out.rate + alpha};
    } else {
      outer = {secondary, out.rate + alpha};
    }
  }
  return fit_to_class(ctx, f.j_min(), f.j_max(), [&](int k) { return hardy_value(f, alpha, k); }, inner, outer,
                      "hardy");
}

RadialStepFunction hardy_adjoint(const RadialStepFunction& f, double alpha) {
  check_alpha(f, alpha, "hardy_adjoint");
  const auto& ctx = f.context();
  const double p = ctx.prime();
  const double c = shrink(ctx);

  PowerTail outer{};
  if (const auto& out = f.outer_tail(); !out.is_zero()) {
    const double q = std::pow(p, out.rate + alpha);
    if (q >= 1.0) {
      std::ostringstream msg;
      msg << "hardy_adjoint: outer sum diverges, tail rate " << out.rate << " + alpha " << alpha << " >= 0";
      throw DomainError(msg.str());
    }
    outer = {c * out.amplitude * q / (1.0 - q), out.rate + alpha};
  }

  const double from_window = hardy_adjoint_value(f, alpha, f.j_min() - 1);
  PowerTail inner{from_window, 0.0};
  if (const auto& in = f.inner_tail(); !in.is_zero()) {
    const double rate = in.rate + alpha;
    if (std::abs(rate) <= kRateEps) throw DomainError("hardy_adjoint: inner tail rate -alpha gives a linear output");
    const double q = std::pow(p, rate);
    const double power = c * in.amplitude * q / (1.0 - q);
    if (q < 1.0) {
      inner = {power, rate};
    } else {
      const double constant = from_window + c * in.amplitude * std::pow(q, f.j_min()) / (q - 1.0);
      inner = std::abs(constant) > 1e-15 * std::abs(from_window) ? PowerTail{constant, 0.0} : PowerTail{power, rate};
    }
  }
  return fit_to_class(ctx, f.j_min(), f.j_max(), [&](int k) { return hardy_adjoint_value(f, alpha, k); }, inner,
                      outer, "hardy_adjoint");
}

RadialStepFunction commutator(const RadialStepFunction& f, const RadialStepFunction& b, double alpha, bool adjoint) {
  if (!(f.context() == b.context())) throw std::invalid_argument("commutator: context mismatch");
  // Multiplication by a constant commutes with both operators.
  if (is_constant_symbol(b)) {
    check_alpha(f, alpha, "commutator");
    return RadialStepFunction::zero(f.context());
  }
  auto op = [adjoint, alpha](const RadialStepFunction& g) { return adjoint ? hardy_adjoint(g, alpha) : hardy(g, alpha); };
  return b * op(f) - op(b * f);
}

RadialStepFunction maximal(const RadialStepFunction& f) {
  const MaximalEvaluator eval(f);
  return fit_to_class(f.context(), f.j_min(), f.j_max(), [&](int k) { return eval.value(k); }, eval.inner_law(),
                      eval.outer_law(), "maximal");
}

RadialStepFunction apply(const OperatorSpec& spec, const RadialStepFunction& f) {
  spec.validate(f.context());
  switch (spec.kind) {
    case OperatorKind::hardy: return hardy(f, spec.alpha);
    case OperatorKind::hardy_adjoint: return hardy_adjoint(f, spec.alpha);
    case OperatorKind::commutator: return commutator(f, *spec.symbol, spec.alpha, false);
    case OperatorKind::commutator_adjoint: return commutator(f, *spec.symbol, spec.alpha, true);
    case OperatorKind::maximal: return maximal(f);
  }
  throw std::logic_error("apply: unhandled operator kind");
}

}  // namespace ultraherz
