// Brute-force Haar sampling. Nothing here calls the shell-sum code of the norms or
// operators modules: integrands are evaluated pointwise on sampled points, and
// the only measure used is the Haar normalization |B_j| = p^{nj} of the region
// a point is drawn from.

#include "ultraherz/oracle.hpp"

#include "ultraherz/root_finding.hpp"
#include "ultraherz/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>

namespace ultraherz {

namespace {

using ShellIntegrand = std::function<double(std::optional<int>)>;

constexpr std::int64_t kMinPerStratum = 16;

/// Draws from B_index; annulus strata keep only the draws on S_index.
struct Stratum {
  int index;
  bool annulus;
  std::int64_t draws = 0;
  std::map<std::optional<int>, std::int64_t> shell_counts;
};

/**
 * Stratified sample of the region {lower < shell <= upper}. With no lower
 * bound the shells at or below `core` form one stratum sampled from B_core.
 * Samples are allocated proportionally to |B_j| * |g(j)| with a floor per stratum.
 */
class StratifiedSample {
 public:
  StratifiedSample(const PadicContext& ctx, std::optional<int> lower, int upper, int core, const ShellIntegrand& pilot,
                   const OracleConfig& cfg, std::uint64_t stream)
      : ctx_(ctx) {
    if (lower) {
      for (int j = *lower + 1; j <= upper; ++j) strata_.push_back({j, true, 0, {}});
    } else {
      const int c = std::min(core, upper);
      strata_.push_back({c, false, 0, {}});
      for (int j = c + 1; j <= upper; ++j) strata_.push_back({j, true, 0, {}});
    }
    allocate(pilot, cfg.samples);
    for (std::size_t s = 0; s < strata_.size(); ++s) {
      auto& st = strata_[s];
      std::mt19937_64 rng(derive_seed(cfg.seed, stream, s));
      for (std::int64_t i = 0; i < st.draws; ++i) {
        const auto shell = sample_uniform(Region::ball(st.index), cfg.resolution, rng, ctx_).shell();
        if (st.annulus && shell != st.index) continue;
        ++st.shell_counts[shell];
      }
    }
  }

  bool empty() const { return strata_.empty(); }

  /// Estimate of the integral of g over the region and its standard error.
  OracleEstimate integrate(const ShellIntegrand& g) const {
    double total = 0.0;
    double variance = 0.0;
    for (const auto& st : strata_) {
      const double n = static_cast<double>(st.draws);
      double sum = 0.0;
      double sum_sq = 0.0;
      for (const auto& [shell, count] : st.shell_counts) {
        const double v = g(shell);
        sum += count * v;
        sum_sq += count * v * v;
      }
      const double mean = sum / n;
      const double var = std::max(0.0, sum_sq / n - mean * mean) * n / std::max(1.0, n - 1.0);
      const double measure = ball_measure_value(st.index, ctx_);
      total += measure * mean;
      variance += measure * measure * var / n;
    }
    return {total, std::sqrt(variance), 0.0};
  }

 private:
  void allocate(const ShellIntegrand& pilot, std::int64_t samples) {
    const std::size_t count = strata_.size();
    if (count == 0) return;
    std::vector<double> weight(count, 0.0);
    double total_weight = 0.0;
    for (std::size_t s = 0; s < count; ++s) {
      const auto& st = strata_[s];
      double magnitude = std::abs(pilot(st.index));
      if (!st.annulus) {
        // Core ball: look a few shells deeper for the integrand's size.
        for (int d = 1; d <= 8; ++d) magnitude = std::max(magnitude, std::abs(pilot(st.index - d)));
      }
      weight[s] = ball_measure_value(st.index, ctx_) * (std::isfinite(magnitude) ? magnitude : 0.0);
      total_weight += weight[s];
    }
    const std::int64_t floor_total = kMinPerStratum * static_cast<std::int64_t>(count);
    const std::int64_t spare = std::max<std::int64_t>(0, samples - floor_total);
    std::int64_t assigned = 0;
    for (std::size_t s = 0; s < count; ++s) {
      const double share = total_weight > 0.0 ? weight[s] / total_weight : 1.0 / static_cast<double>(count);
      strata_[s].draws = kMinPerStratum + static_cast<std::int64_t>(std::floor(share * static_cast<double>(spare)));
      assigned += strata_[s].draws;
    }
    // Rounding leftovers go to the heaviest stratum.
    const auto heaviest = std::max_element(weight.begin(), weight.end()) - weight.begin();
    strata_[static_cast<std::size_t>(heaviest)].draws += std::max<std::int64_t>(0, samples - assigned);
  }

  PadicContext ctx_;
  std::vector<Stratum> strata_;
};

double value_on(const RadialStepFunction& f, std::optional<int> shell) {
  return shell ? f(*shell) : f.value_at_zero();
}

// Geometric bound on sum_{j > upper} |g(j)| |B_j| from the first two omitted shells.
double truncation_bias(const ShellIntegrand& g, int upper, const PadicContext& ctx) {
  const double first = std::abs(g(upper + 1)) * ball_measure_value(upper + 1, ctx);
  if (first == 0.0) return 0.0;
  const double second = std::abs(g(upper + 2)) * ball_measure_value(upper + 2, ctx);
  const double ratio = second / first;
  if (!(ratio < 1.0)) return std::numeric_limits<double>::infinity();
  return first / (1.0 - ratio);
}

}  // namespace

void OracleConfig::validate() const {
  if (samples < 1000) throw std::invalid_argument("oracle: samples must be >= 1000");
  if (resolution < 1) throw std::invalid_argument("oracle: resolution must be >= 1");
  if (truncation < 1) throw std::invalid_argument("oracle: truncation window must be >= 1");
}

OracleEstimate mc_integrate(const RadialStepFunction& f, int gamma, const OracleConfig& cfg) {
  cfg.validate();
  if (gamma > cfg.truncation) throw std::invalid_argument("mc_integrate: region outside the truncation window");
  const ShellIntegrand g = [&f](std::optional<int> s) { return value_on(f, s); };
  const StratifiedSample sample(f.context(), std::nullopt, gamma, -cfg.truncation, g, cfg, 0);
  return sample.integrate(g);
}

OracleEstimate mc_operator_probe(const RadialStepFunction& f, const OperatorSpec& spec, int probe_shell,
                                 const OracleConfig& cfg) {
  cfg.validate();
  spec.validate(f.context());
  if (probe_shell < -cfg.truncation || probe_shell > cfg.truncation) {
    throw std::invalid_argument("mc_operator_probe: probe shell outside the truncation window");
  }
  const auto& ctx = f.context();
  const double p = ctx.prime();
  const double n = ctx.n();
  std::mt19937_64 probe_rng(derive_seed(cfg.seed, 99, 0));
  const PadicPoint x = sample_uniform(Region::sphere(probe_shell), cfg.resolution, probe_rng, ctx);
  const int kx = x.shell().value();
  const double weight_at_x = std::pow(p, kx * (spec.alpha - n));
  const double b_at_x = spec.symbol ? (*spec.symbol)(kx) : 0.0;

  auto symbol_gap = [&](std::optional<int> s) { return b_at_x - value_on(*spec.symbol, s); };
  auto adjoint_kernel = [&](std::optional<int> s) { return std::pow(p, s.value_or(0) * (spec.alpha - n)); };

  switch (spec.kind) {
    case OperatorKind::hardy:
    case OperatorKind::commutator: {
      const ShellIntegrand g = [&](std::optional<int> s) {
        const double v = value_on(f, s);
        return spec.kind == OperatorKind::hardy ? v : symbol_gap(s) * v;
      };
      const StratifiedSample sample(ctx, std::nullopt, kx, -cfg.truncation, g, cfg, 1);
      auto est = sample.integrate(g);
      return {weight_at_x * est.estimate, weight_at_x * est.sigma, 0.0};
    }
    case OperatorKind::hardy_adjoint:
    case OperatorKind::commutator_adjoint: {
      const ShellIntegrand g = [&](std::optional<int> s) {
        if (!s) return 0.0;
        const double v = value_on(f, s) * adjoint_kernel(s);
        return spec.kind == OperatorKind::hardy_adjoint ? v : symbol_gap(s) * v;
      };
      const StratifiedSample sample(ctx, kx, cfg.truncation, cfg.truncation, g, cfg, 2);
      auto est = sample.empty() ? OracleEstimate{} : sample.integrate(g);
      est.truncation_bias_bound = truncation_bias(g, cfg.truncation, ctx);
      return est;
    }
    case OperatorKind::maximal: {
      const ShellIntegrand g = [&](std::optional<int> s) { return std::abs(value_on(f, s)); };
      OracleEstimate best{std::abs(f(kx)), 0.0, 0.0};
      const int levels = cfg.truncation - kx + 1;
      OracleConfig per_level = cfg;
      per_level.samples = std::max<std::int64_t>(1000, cfg.samples / levels);
      for (int gamma = kx; gamma <= cfg.truncation; ++gamma) {
        per_level.seed = derive_seed(cfg.seed, 3, static_cast<std::uint64_t>(gamma - kx));
        const StratifiedSample sample(ctx, std::nullopt, gamma, -cfg.truncation, g, per_level, 3);
        const auto est = sample.integrate(g);
        const double measure = ball_measure_value(gamma, ctx);
        if (est.estimate / measure > best.estimate) best = {est.estimate / measure, est.sigma / measure, 0.0};
      }
      return best;
    }
  }
  throw std::logic_error("mc_operator_probe: unhandled operator kind");
}

OracleEstimate mc_luxemburg(const RadialStepFunction& f, const ExponentFunction& u, const OracleConfig& cfg) {
  cfg.validate();
  if (f.is_zero()) return {};
  const auto& ctx = f.context();
  const int top = cfg.truncation;
  auto modular_integrand = [&](double lambda) {
    return ShellIntegrand([&f, &u, lambda](std::optional<int> s) {
      const double ex = s ? u(*s) : u.inner();
      return std::pow(std::abs(value_on(f, s)) / lambda, ex);
    });
  };
  const StratifiedSample sample(ctx, std::nullopt, top, -cfg.truncation, modular_integrand(1.0), cfg, 4);
  auto modular_at = [&](double lambda) { return sample.integrate(modular_integrand(lambda)).estimate; };
  const auto root = bisect_decreasing(modular_at, 1.0, 1e-12, 400);
  if (!root.converged) throw std::runtime_error("mc_luxemburg: sampled modular has no unit crossing");
  const double lambda = 0.5 * (root.lo + root.hi);

  const auto at_root = sample.integrate(modular_integrand(lambda));
  const auto slope = sample.integrate([&](std::optional<int> s) {
    const double ex = s ? u(*s) : u.inner();
    return ex * std::pow(std::abs(value_on(f, s)) / lambda, ex) / lambda;
  });
  OracleEstimate out{lambda, at_root.sigma / slope.estimate, 0.0};
  out.truncation_bias_bound = truncation_bias(modular_integrand(lambda), top, ctx);
  return out;
}

}  // namespace ultraherz
