#include "ultraherz/norms.hpp"

#include "ultraherz/root_finding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ultraherz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSupRelTol = 1e-10;

/**
 * Nonnegative per-shell terms over all of Z: explicit on [lo, hi], geometric
 * below (term(j - 1) = inner_ratio * term(j)) and above
 * (term(j + 1) = outer_ratio * term(j)).
 */
struct ShellSeries {
  int lo = 0;
  int hi = 0;
  std::vector<double> window;
  double inner_first = 0.0;  // term at lo - 1
  double inner_ratio = 0.0;
  double outer_first = 0.0;  // term at hi + 1
  double outer_ratio = 0.0;

  bool inner_converges() const { return inner_first == 0.0 || inner_ratio < 1.0; }
  bool outer_converges() const { return outer_first == 0.0 || outer_ratio < 1.0; }

  double inner_sum() const { return inner_first == 0.0 ? 0.0 : inner_first / (1.0 - inner_ratio); }
  double outer_sum() const { return outer_first == 0.0 ? 0.0 : outer_first / (1.0 - outer_ratio); }
  double window_sum() const {
    double acc = 0.0;
    for (double t : window) acc += t;
    return acc;
  }
};

void require_same_context(const RadialStepFunction& f, const ExponentFunction& u) {
  if (!(f.context() == u.context())) throw std::invalid_argument("norm: function and exponent contexts differ");
}

// Terms |f_j / lambda|^{u_j} |S_j|, lambda = 1 / scale.
ShellSeries modular_series(const RadialStepFunction& f, const ExponentFunction& u, double scale) {
  const auto& ctx = f.context();
  const double p = ctx.prime();
  const double n = ctx.n();
  ShellSeries s;
  s.lo = std::min(f.j_min(), u.j_min());
  s.hi = std::max(f.j_max(), u.j_max());
  s.window.reserve(static_cast<std::size_t>(s.hi - s.lo + 1));
  auto term = [&](int j) { return std::pow(std::abs(f(j)) * scale, u(j)) * sphere_measure_value(j, ctx); };
  for (int j = s.lo; j <= s.hi; ++j) s.window.push_back(term(j));
  if (!f.inner_tail().is_zero()) {
    s.inner_first = term(s.lo - 1);
    s.inner_ratio = std::pow(p, -(f.inner_tail().rate * u.inner() + n));
  }
  if (!f.outer_tail().is_zero()) {
    s.outer_first = term(s.hi + 1);
    s.outer_ratio = std::pow(p, f.outer_tail().rate * u.infinity() + n);
  }
  return s;
}

// Terms (p^{j beta} |f_j| ||chi_{S_j}||_{u})^m.
ShellSeries herz_series(const RadialStepFunction& f, const ExponentFunction& u, double beta, double m) {
  const auto& ctx = f.context();
  const double p = ctx.prime();
  const double n = ctx.n();
  ShellSeries s;
  s.lo = std::min(f.j_min(), u.j_min());
  s.hi = std::max(f.j_max(), u.j_max());
  s.window.reserve(static_cast<std::size_t>(s.hi - s.lo + 1));
  auto term = [&](int j) { return std::pow(std::pow(p, j * beta) * std::abs(f(j)) * shell_indicator_norm(u, j), m); };
  for (int j = s.lo; j <= s.hi; ++j) s.window.push_back(term(j));
  if (!f.inner_tail().is_zero()) {
    s.inner_first = term(s.lo - 1);
    s.inner_ratio = std::pow(p, -m * (beta + f.inner_tail().rate + n / u.inner()));
  }
  if (!f.outer_tail().is_zero()) {
    s.outer_first = term(s.hi + 1);
    s.outer_ratio = std::pow(p, m * (beta + f.outer_tail().rate + n / u.infinity()));
  }
  return s;
}

double modular_value(const RadialStepFunction& f, const ExponentFunction& u, double scale) {
  const ShellSeries s = modular_series(f, u, scale);
  if (!s.inner_converges() || !s.outer_converges()) return kInf;
  return s.inner_sum() + s.window_sum() + s.outer_sum();
}

// (b - c) on the shells of B_gamma (or everywhere when `everywhere`), as a radial step
// function. A tail that is a sum of a power law and a constant is materialized until one
// term dominates to double precision.
RadialStepFunction shifted_difference(const RadialStepFunction& b, double c, int gamma, bool everywhere) {
  const auto& ctx = b.context();
  const double p = ctx.prime();
  const int limit = ctx.shell_limit();
  int bottom = std::min(b.j_min(), gamma);
  int top = everywhere ? std::max(b.j_max(), gamma) : gamma;

  auto resolve = [&](const PowerTail& t, int& edge, int step) -> PowerTail {
    if (t.is_zero()) return {-c, 0.0};
    if (t.rate == 0.0 || c == 0.0) return {t.amplitude - (t.rate == 0.0 ? c : 0.0), t.rate};
    // Power law decays toward the edge when rate * step < 0; the constant then dominates.
    const bool constant_dominates = t.rate * step < 0.0;
    for (int guard = 0; guard < 400 && std::abs(edge + step) <= limit; ++guard) {
      const double power = std::abs(t.at(p, edge));
      const bool settled = constant_dominates ? power <= 1e-17 * std::abs(c) : std::abs(c) <= 1e-17 * power;
      if (settled) break;
      edge += step;
    }
    return constant_dominates ? PowerTail{-c, 0.0} : t;
  };

  const PowerTail inner = resolve(b.inner_tail(), bottom, -1);
  PowerTail outer{};
  if (everywhere) outer = resolve(b.outer_tail(), top, +1);

  std::vector<double> coeffs;
  coeffs.reserve(static_cast<std::size_t>(top - bottom + 1));
  for (int k = bottom; k <= top; ++k) coeffs.push_back(b(k) - c);
  return {ctx, bottom, std::move(coeffs), inner, outer};
}

}  // namespace

NormResult NormResult::divergent(int lo, int hi) { return {kInf, false, 0.0, lo, hi}; }

NormResult modular(const RadialStepFunction& f, const ExponentFunction& u) {
  require_same_context(f, u);
  const ShellSeries s = modular_series(f, u, 1.0);
  if (!s.inner_converges() || !s.outer_converges()) return NormResult::divergent(s.lo, s.hi);
  return {s.inner_sum() + s.window_sum() + s.outer_sum(), true, 0.0, s.lo, s.hi};
}

NormResult luxemburg_norm(const RadialStepFunction& f, const ExponentFunction& u, double rel_tol) {
  require_same_context(f, u);
  if (!(rel_tol > 1e-14 && rel_tol < 1e-3)) throw std::invalid_argument("luxemburg_norm: rel_tol must lie in (1e-14, 1e-3)");
  const int lo = std::min(f.j_min(), u.j_min());
  const int hi = std::max(f.j_max(), u.j_max());
  if (f.is_zero()) return {0.0, true, 0.0, lo, hi};
  // Tail convergence of the modular does not depend on lambda.
  if (!std::isfinite(modular_value(f, u, 1.0))) return NormResult::divergent(lo, hi);
  const auto root =
      bisect_decreasing([&](double lambda) { return modular_value(f, u, 1.0 / lambda); }, 1.0, rel_tol, 200);
  if (!root.converged) throw std::runtime_error("luxemburg_norm: bisection did not converge");
  return {0.5 * (root.lo + root.hi), true, root.hi - root.lo, lo, hi};
}

double shell_indicator_norm(const ExponentFunction& u, int k) {
  return std::pow(sphere_measure_value(k, u.context()), 1.0 / u(k));
}

double ball_indicator_norm(const ExponentFunction& u, int gamma, double rel_tol) {
  if (u.constant_on_ball(gamma)) return std::pow(ball_measure_value(gamma, u.context()), 1.0 / u(gamma));
  return luxemburg_norm(RadialStepFunction::ball_indicator(u.context(), gamma), u, rel_tol).value;
}

NormResult herz_norm(const RadialStepFunction& f, const ExponentFunction& u, const HerzParams& params) {
  require_same_context(f, u);
  if (!(params.m > 0.0)) throw std::invalid_argument("herz_norm: m must be > 0");
  const ShellSeries s = herz_series(f, u, params.beta, params.m);
  if (!s.inner_converges() || !s.outer_converges()) return NormResult::divergent(s.lo, s.hi);
  const double total = s.inner_sum() + s.window_sum() + s.outer_sum();
  return {std::pow(total, 1.0 / params.m), true, 0.0, s.lo, s.hi};
}

NormResult morrey_herz_norm(const RadialStepFunction& f, const ExponentFunction& u, const MorreyHerzParams& params) {
  require_same_context(f, u);
  if (!(params.m > 0.0)) throw std::invalid_argument("morrey_herz_norm: m must be > 0");
  if (!(params.lambda >= 0.0)) throw std::invalid_argument("morrey_herz_norm: lambda must be >= 0");
  const double base = params.prefactor_base.value_or(f.context().prime());
  if (!(base > 1.0)) throw std::invalid_argument("morrey_herz_norm: prefactor base must be > 1");

  // With lambda = 0 the partial sums increase to the full Herz sum.
  if (params.lambda == 0.0) return herz_norm(f, u, {params.beta, params.m});

  const ShellSeries s = herz_series(f, u, params.beta, params.m);
  const double m = params.m;
  // Work with G(k0) = F(k0)^m = t^{k0} S(k0), S the partial Herz sum.
  const double t = std::pow(base, -params.lambda * m);
  if (f.is_zero()) return {0.0, true, 0.0, s.lo, s.hi};

  double partial = 0.0;
  double best = 0.0;
  if (s.inner_first != 0.0) {
    if (!s.inner_converges()) return NormResult::divergent(s.lo, s.hi);
    // Below the window G(k0 - 1) = G(k0) * inner_ratio / t.
    if (s.inner_ratio / t > 1.0 + 1e-12) return NormResult::divergent(s.lo, s.hi);
    partial = s.inner_sum();
    best = std::pow(t, s.lo - 1) * partial;
  }
  double g = 0.0;
  for (int k = s.lo; k <= s.hi; ++k) {
    partial += s.window[static_cast<std::size_t>(k - s.lo)];
    g = std::pow(t, k) * partial;
    best = std::max(best, g);
  }

  int top = s.hi;
  double remainder_m = 0.0;
  if (s.outer_first != 0.0) {
    // Above the window G(k) = t G(k-1) + inc(k), inc(k) = t^k term(k) = inc(hi+1) (t r)^{k-hi-1}.
    const double ts = t * s.outer_ratio;
    if (ts > 1.0 + 1e-12) return NormResult::divergent(s.lo, s.hi);
    double inc = std::pow(t, s.hi + 1) * s.outer_first;
    if (ts >= 1.0 - 1e-12) {
      // G(k) = t^{k-hi} G(hi) + inc (1 - t^{k-hi}) / (1 - t) -> inc / (1 - t).
      const double limit = inc / (1.0 - t);
      double decay = g;
      while (decay > kSupRelTol * std::max(best, limit) && top < s.hi + 100000) {
        ++top;
        g = t * g + inc;
        decay *= t;
        best = std::max(best, g);
      }
      best = std::max(best, limit);
      remainder_m = decay;
    } else {
      for (;;) {
        ++top;
        g = t * g + inc;
        best = std::max(best, g);
        // sup_{k > top} G(k) <= G(top) + sum_{i > top} inc(i).
        remainder_m = inc * ts / (1.0 - ts);
        if (remainder_m <= kSupRelTol * best || top >= s.hi + 100000) break;
        inc *= ts;
      }
    }
  }
  const double value = std::pow(best, 1.0 / m);
  return {value, true, std::pow(best + remainder_m, 1.0 / m) - value, s.lo - 1, top};
}

NormResult cmo_norm(const RadialStepFunction& b, const ExponentFunction& u, const CmoOptions& options) {
  require_same_context(b, u);
  if (!b.inner_integrable()) throw DomainError("cmo_norm: symbol is not locally integrable");
  const int limit = b.context().shell_limit();
  const int lo = std::max(b.j_min() - options.scan_margin, -limit);
  const int hi = std::min(b.j_max() + options.scan_margin, limit);

  std::vector<double> ratios;
  ratios.reserve(static_cast<std::size_t>(hi - lo + 1));
  double best = 0.0;
  for (int gamma = lo; gamma <= hi; ++gamma) {
    const double mean = ball_mean(b, gamma);
    const RadialStepFunction diff = shifted_difference(b, mean, gamma, options.literal);
    const NormResult num = luxemburg_norm(diff, u, options.rel_tol);
    if (!num.convergent) return NormResult::divergent(lo, hi);
    const double ratio = num.value / ball_indicator_norm(u, gamma);
    ratios.push_back(ratio);
    best = std::max(best, ratio);
  }

  // The candidates must decay toward both scan edges for the supremum to be certified.
  double remainder = 0.0;
  const std::size_t count = ratios.size();
  if (count >= 3) {
    const bool left_ok = ratios[0] <= ratios[1] && ratios[1] <= ratios[2];
    const bool right_ok = ratios[count - 1] <= ratios[count - 2] && ratios[count - 2] <= ratios[count - 3];
    if (!left_ok || !right_ok) remainder = std::max(ratios.front(), ratios.back());
  }
  return {best, true, remainder, lo, hi};
}

}  // namespace ultraherz
