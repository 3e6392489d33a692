#include "ultraherz/harness.hpp"

#include "ultraherz/real_format.hpp"
#include "ultraherz/seeding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ultraherz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct TheoremName {
  TheoremId id;
  std::string_view name;
};

constexpr TheoremName kTheoremNames[] = {
    {TheoremId::T31, "T31"}, {TheoremId::T32, "T32"}, {TheoremId::T41, "T41"}, {TheoremId::T42, "T42"},
    {TheoremId::C31, "C31"}, {TheoremId::C32, "C32"}, {TheoremId::C41, "C41"}, {TheoremId::C42, "C42"},
};

bool maps_into_conjugate(TheoremId id) { return id == TheoremId::C32 || id == TheoremId::C42; }

/// Source and target spaces of a statement, resolved once per sweep.
struct Spaces {
  ExponentFunction source_u;
  double source_m;
  ExponentFunction target_u;
  double target_m;
  OperatorSpec op;
};

Spaces resolve_spaces(const TheoremConfig& tc) {
  const bool corollary = is_corollary(tc.theorem);
  ExponentFunction v = corollary ? tc.u : sobolev_shift(tc.u, tc.alpha);
  ExponentFunction target = maps_into_conjugate(tc.theorem) ? conjugate(tc.u) : tc.u;
  OperatorSpec spec{tc.operator_kind(), corollary ? 0.0 : tc.alpha, std::nullopt};
  if (is_commutator_theorem(tc.theorem)) spec.symbol = tc.symbol_or_default();
  Spaces s{std::move(v), tc.m2, std::move(target), tc.m1, std::move(spec)};
  if (tc.spaces == SpaceOrder::standard) {
    std::swap(s.source_u, s.target_u);
    std::swap(s.source_m, s.target_m);
  }
  return s;
}

NormResult space_norm(const TheoremConfig& tc, const RadialStepFunction& f, const ExponentFunction& u, double m) {
  if (is_morrey_herz_theorem(tc.theorem)) return morrey_herz_norm(f, u, {tc.beta, m, tc.lambda, tc.mh_base});
  return herz_norm(f, u, {tc.beta, m});
}

RatioOutcome ratio_in(const TheoremConfig& tc, const Spaces& s, const RadialStepFunction& f) {
  RatioOutcome out;
  const auto source = space_norm(tc, f, s.source_u, s.source_m);
  out.source_norm = source.value;
  if (!source.convergent || !std::isfinite(source.value) || source.value == 0.0) {
    out.target_norm = std::nan("");
    return out;
  }
  const auto target = space_norm(tc, apply(s.op, f), s.target_u, s.target_m);
  out.target_norm = target.convergent ? target.value : kInf;
  out.ratio = out.target_norm / out.source_norm;
  return out;
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t stream, int trial) {
  return std::mt19937_64(derive_seed(seed, stream, static_cast<std::uint64_t>(trial)));
}

PadicContext random_context(std::mt19937_64& rng) {
  static constexpr int primes[] = {2, 3, 5};
  const int p = primes[std::uniform_int_distribution<int>(0, 2)(rng)];
  const int n = std::uniform_int_distribution<int>(1, 2)(rng);
  return PadicContext(p, n);
}

}  // namespace

std::string_view to_string(TheoremId id) noexcept {
  for (const auto& t : kTheoremNames)
    if (t.id == id) return t.name;
  return "?";
}

TheoremId parse_theorem_id(std::string_view name) {
  for (const auto& t : kTheoremNames)
    if (t.name == name) return t.id;
  throw std::invalid_argument("unknown theorem id '" + std::string(name) + "'");
}

bool is_commutator_theorem(TheoremId id) noexcept {
  return id == TheoremId::T32 || id == TheoremId::T42 || id == TheoremId::C32 || id == TheoremId::C42;
}

bool is_morrey_herz_theorem(TheoremId id) noexcept {
  return id == TheoremId::T41 || id == TheoremId::T42 || id == TheoremId::C41 || id == TheoremId::C42;
}

bool is_corollary(TheoremId id) noexcept {
  return id == TheoremId::C31 || id == TheoremId::C32 || id == TheoremId::C41 || id == TheoremId::C42;
}

OperatorKind TheoremConfig::operator_kind() const {
  const bool commutator = is_commutator_theorem(theorem);
  if (!op) return commutator ? OperatorKind::commutator : OperatorKind::hardy;
  const bool op_is_commutator = *op == OperatorKind::commutator || *op == OperatorKind::commutator_adjoint;
  if (*op == OperatorKind::maximal || op_is_commutator != commutator) {
    throw std::invalid_argument("operator '" + std::string(to_string(*op)) + "' does not belong to " +
                                std::string(to_string(theorem)));
  }
  return *op;
}

RadialStepFunction TheoremConfig::symbol_or_default() const { return symbol ? *symbol : valuation_profile(ctx); }

RadialStepFunction valuation_profile(const PadicContext& ctx, int radius) {
  std::vector<double> coeffs;
  for (int j = -radius; j <= radius; ++j) coeffs.push_back(j);
  return RadialStepFunction(ctx, -radius, std::move(coeffs), {static_cast<double>(-radius), 0.0},
                            {static_cast<double>(radius), 0.0});
}

HypothesisReport validate_hypotheses(const TheoremConfig& tc) {
  HypothesisReport rep;
  auto violate = [&rep](std::string hypothesis, std::string relation, double lhs, double rhs) {
    rep.ok = false;
    rep.violations.push_back({std::move(hypothesis), std::move(relation), lhs, rhs});
  };
  const double n = tc.ctx.n();
  const auto& u = tc.u;
  auto& d = rep.derived;
  d.u_minus = u.minus();
  d.u_plus = u.plus();

  if (!(u.context() == tc.ctx)) violate("u is defined over ctx", "p, n of u == p, n of ctx", u.context().p(), tc.ctx.p());
  if (!(tc.m1 > 0.0)) violate("0 < m1", "m1 > 0", tc.m1, 0.0);
  if (!(tc.m1 <= tc.m2)) violate("m1 <= m2", "m1 <= m2", tc.m1, tc.m2);
  if (!(tc.m2 < kInf)) violate("m2 < infinity", "m2 < inf", tc.m2, kInf);

  std::optional<ExponentFunction> u_conj;
  if (d.u_minus > 1.0) {
    u_conj = conjugate(u);
    d.u_conj_minus = u_conj->minus();
    d.u_conj_plus = u_conj->plus();
  } else {
    violate("u' exists", "u_- > 1", d.u_minus, 1.0);
  }

  std::optional<ExponentFunction> v;
  if (is_corollary(tc.theorem)) {
    if (tc.alpha != 0.0) violate("alpha = 0", "alpha == 0", tc.alpha, 0.0);
    v = u;
  } else {
    if (!(tc.alpha > 0.0)) violate("0 < alpha", "alpha > 0", tc.alpha, 0.0);
    const double bound_u = n / d.u_plus;
    d.alpha_bound = bound_u;
    if (!(tc.alpha < bound_u)) {
      violate("alpha < n/u_+", "alpha < n/u_+", tc.alpha, bound_u);
    } else if (tc.alpha >= 0.0) {
      v = sobolev_shift(u, tc.alpha);
      if (v->minus() > 1.0) {
        const auto v_conj = conjugate(*v);
        d.v_conj_minus = v_conj.minus();
        d.v_conj_plus = v_conj.plus();
        const double bound_v = n / *d.v_conj_plus;
        d.alpha_bound = std::min(bound_u, bound_v);
        if (!(tc.alpha < bound_v)) violate("alpha < n/v'_+", "alpha < n/v'_+", tc.alpha, bound_v);
      } else {
        violate("v' exists", "v_- > 1", v->minus(), 1.0);
      }
    }
  }
  if (v) {
    d.v_minus = v->minus();
    d.v_plus = v->plus();
  }

  const bool mh = is_morrey_herz_theorem(tc.theorem);
  if (mh) {
    if (!(tc.lambda >= 0.0)) violate("lambda >= 0", "lambda >= 0", tc.lambda, 0.0);
    if (tc.mh_base && !(*tc.mh_base > 0.0)) violate("Morrey-Herz base > 0", "base > 0", *tc.mh_base, 0.0);
  }

  // Beta window of each statement, as printed.
  if (d.u_conj_minus && d.v_plus) {
    const double hi_herz = n / *d.u_conj_minus;
    switch (tc.theorem) {
      case TheoremId::T31:
      case TheoremId::T32:
        d.beta_lo = -n / *d.v_plus;
        d.beta_hi = hi_herz;
        break;
      case TheoremId::C31:
      case TheoremId::C32:
      case TheoremId::C41:
        d.beta_lo = -n / d.u_plus;
        d.beta_hi = hi_herz;
        break;
      case TheoremId::T41:
      case TheoremId::T42:
        d.beta_lo = tc.lambda - n / *d.v_minus;
        d.beta_hi = hi_herz + tc.lambda;
        break;
      case TheoremId::C42:
        d.beta_lo = tc.lambda - n / d.u_minus;
        d.beta_hi = hi_herz + tc.lambda;
        break;
    }
    if (!(tc.beta > *d.beta_lo)) violate("beta above the lower bound", "beta > beta_lo", tc.beta, *d.beta_lo);
    if (!(tc.beta < *d.beta_hi)) violate("beta below the upper bound", "beta < beta_hi", tc.beta, *d.beta_hi);
  }

  try {
    (void)tc.operator_kind();
  } catch (const std::invalid_argument& e) {
    rep.ok = false;
    rep.violations.push_back({e.what(), "operator matches statement", 0.0, 0.0});
  }

  if (is_commutator_theorem(tc.theorem)) {
    const auto b = tc.symbol_or_default();
    if (!(b.context() == tc.ctx)) violate("b is defined over ctx", "p of b == p of ctx", b.context().p(), tc.ctx.p());
    auto require_cmo = [&](const ExponentFunction& e, const std::string& name) {
      const auto r = cmo_norm(b, e);
      if (!r.convergent || !std::isfinite(r.value)) violate("b in CMO^{" + name + "}", "||b||_CMO < inf", r.value, kInf);
      rep.notes.push_back("||b||_CMO^{" + name + "} = " + format_real(r.value));
    };
    if (u_conj) require_cmo(*u_conj, "u'");
    if (v) require_cmo(*v, is_corollary(tc.theorem) ? "u" : "v");
    if (tc.theorem == TheoremId::T32 && v) {
      for (const auto mode : {RegularityMode::w0, RegularityMode::w_infinity}) {
        const auto r = check_regularity(*v, mode, 1 << 20);
        if (!r.satisfied || !std::isfinite(r.constant)) {
          violate(mode == RegularityMode::w0 ? "v in W_0" : "v in W^infinity", "constant < inf", r.constant, kInf);
        }
        rep.notes.push_back(r.verdict);
      }
    }
  }

  if (maps_into_conjugate(tc.theorem)) {
    rep.notes.push_back("target space uses the conjugate exponent u' as in the statement, unlike the theorems");
  }
  if (tc.spaces == SpaceOrder::standard) {
    rep.notes.push_back("diagnostic run: source and target spaces swapped relative to the statement");
  }
  return rep;
}

RatioOutcome boundedness_ratio(const TheoremConfig& tc, const RadialStepFunction& f) {
  return ratio_in(tc, resolve_spaces(tc), f);
}

RadialStepFunction family_member(const TheoremConfig& tc, int support_bound, int sample_index) {
  const auto& fam = tc.family;
  if (fam.kind == FamilySpec::Kind::single_shell) {
    return RadialStepFunction::shell_indicator(tc.ctx, fam.shells.at(static_cast<std::size_t>(sample_index)));
  }
  std::mt19937_64 rng(derive_seed(fam.seed, static_cast<std::uint64_t>(support_bound) + (1ULL << 32),
                                  static_cast<std::uint64_t>(sample_index)));
  std::uniform_int_distribution<int> end(-support_bound, support_bound);
  int a = end(rng);
  int b = end(rng);
  if (a > b) std::swap(a, b);
  std::uniform_real_distribution<double> log_mag(-3.0, 3.0);
  std::bernoulli_distribution negative(0.5);
  const double p = tc.ctx.prime();
  std::vector<double> coeffs;
  for (int j = a; j <= b; ++j) {
    const double mag = std::pow(p, log_mag(rng));
    coeffs.push_back(negative(rng) ? -mag : mag);
  }
  return RadialStepFunction(tc.ctx, a, std::move(coeffs));
}

RatioReport sweep(const TheoremConfig& tc, unsigned threads) {
  RatioReport report{tc, validate_hypotheses(tc), {}, {}, std::nullopt, {}};
  if (!report.hypotheses.ok) {
    std::string msg = std::string(to_string(tc.theorem)) + " hypotheses fail:";
    for (const auto& v : report.hypotheses.violations) msg += " [" + v.hypothesis + "]";
    throw HypothesisViolation(msg);
  }
  const Spaces spaces = resolve_spaces(tc);

  struct Job {
    int bound;
    int index;
  };
  std::vector<Job> jobs;
  const auto& fam = tc.family;
  if (fam.kind == FamilySpec::Kind::single_shell) {
    for (std::size_t i = 0; i < fam.shells.size(); ++i) jobs.push_back({fam.shells[i], static_cast<int>(i)});
  } else {
    for (const int bound : fam.support_bounds)
      for (int i = 0; i < fam.count; ++i) jobs.push_back({bound, i});
  }

  std::vector<RatioOutcome> outcomes(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      try {
        outcomes[k] = ratio_in(tc, spaces, family_member(tc, jobs[k].bound, jobs[k].index));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t k = 0; k < jobs.size(); ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    report.rows.push_back({static_cast<int>(k), jobs[k].bound, outcomes[k]});
  }

  for (const auto& row : report.rows) {
    auto it = std::find_if(report.sup_by_bound.begin(), report.sup_by_bound.end(),
                           [&](const auto& e) { return e.first == row.support_bound; });
    if (it == report.sup_by_bound.end()) {
      report.sup_by_bound.push_back({row.support_bound, std::nullopt});
      it = std::prev(report.sup_by_bound.end());
    }
    if (!row.outcome.ratio) continue;
    const double r = *row.outcome.ratio;
    if (!it->second || r > *it->second) it->second = r;
    if (!report.sup || r > *report.sup) report.sup = r;
  }
  return report;
}

std::string ratio_csv(const RatioReport& report) {
  std::string out = "sample_id,N,source_norm,target_norm,ratio\n";
  for (const auto& row : report.rows) {
    out += std::to_string(row.sample_id) + ',' + std::to_string(row.support_bound) + ',' +
           format_real(row.outcome.source_norm) + ',' + format_real(row.outcome.target_norm) + ',' +
           (row.outcome.ratio ? format_real(*row.outcome.ratio) : std::string("skip")) + '\n';
  }
  return out;
}

void write_ratio_csv(RatioReport& report, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << ratio_csv(report);
  os.flush();
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
  report.csv_path = path;
}

std::string_view to_string(LemmaId id) noexcept {
  switch (id) {
    case LemmaId::L1: return "L1";
    case LemmaId::L3: return "L3";
    case LemmaId::L5: return "L5";
  }
  return "?";
}

LemmaId parse_lemma_id(std::string_view name) {
  if (name == "L1") return LemmaId::L1;
  if (name == "L3") return LemmaId::L3;
  if (name == "L5") return LemmaId::L5;
  throw std::invalid_argument("unknown lemma id '" + std::string(name) + "'");
}

ExponentFunction random_exponent(const PadicContext& ctx, std::mt19937_64& rng, double lo, double hi, int width) {
  std::uniform_int_distribution<int> start(-width, width);
  const int a = start(rng);
  const int b = std::uniform_int_distribution<int>(a, width)(rng);
  std::uniform_real_distribution<double> value(lo, hi);
  std::vector<double> values;
  for (int j = a; j <= b; ++j) values.push_back(value(rng));
  const double inner = value(rng);
  const double outer = value(rng);
  return ExponentFunction(ctx, a, std::move(values), inner, outer);
}

BallShiftInstance ball_shift(const RadialStepFunction& g, const ExponentFunction& u, int l, int m, int x_shell) {
  const double gx = g(x_shell);
  const auto cmo = cmo_norm(g, u);
  if (!cmo.convergent) return {std::abs(gx - ball_mean(g, m)), kInf, kInf};
  const double pn = std::pow(g.context().prime(), g.context().n());
  const double lhs = std::abs(gx - ball_mean(g, m));
  const double rhs = std::abs(gx - ball_mean(g, l)) + pn * std::abs(l - m) * cmo.value;
  return {lhs, rhs, cmo.value};
}

double ball_indicator_ratio_sup(const ExponentFunction& u, int radius) {
  const double p = u.context().prime();
  const double n = u.context().n();
  double sup = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double scale = std::pow(p, k * n / exponent_at(u, k, k));
    sup = std::max(sup, ball_indicator_norm(u, k) / scale);
  }
  return sup;
}

LemmaReport check_lemmas(LemmaId which, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("check_lemmas: trials must be >= 1");
  LemmaReport rep{which, trials, 0, 0.0, {}};
  const auto stream = static_cast<std::uint64_t>(which) + 17;
  for (int t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed, stream, t);
    const auto ctx = random_context(rng);
    std::ostringstream witness;
    bool pass = false;
    switch (which) {
      case LemmaId::L1: {
        const auto u = random_exponent(ctx, rng, 1.1, 4.0, 4);
        const auto lip = check_regularity(u, RegularityMode::lipschitz, 1 << 16);
        const auto w0 = check_regularity(u, RegularityMode::w0, 1 << 16);
        pass = lip.satisfied && w0.satisfied && std::isfinite(w0.constant);
        rep.worst = std::max(rep.worst, w0.constant);
        witness << "p=" << ctx.p() << " n=" << ctx.n() << " L=" << lip.constant << " W0 constant=" << w0.constant
                << " (" << w0.verdict << ")";
        break;
      }
      case LemmaId::L3: {
        const auto u = random_exponent(ctx, rng, 1.5, 4.0, 3);
        std::uniform_int_distribution<int> start(-4, 4);
        const int a = start(rng);
        const int b = std::uniform_int_distribution<int>(a, 4)(rng);
        std::uniform_real_distribution<double> coeff(-2.0, 2.0);
        std::vector<double> coeffs;
        for (int j = a; j <= b; ++j) coeffs.push_back(coeff(rng));
        const RadialStepFunction g(ctx, a, std::move(coeffs));
        std::uniform_int_distribution<int> ball(-6, 6);
        const int l = ball(rng);
        const int m = ball(rng);
        const int x = std::uniform_int_distribution<int>(-8, 8)(rng);
        const auto inst = ball_shift(g, u, l, m, x);
        pass = inst.lhs <= inst.rhs * (1.0 + 1e-12) + 1e-12;
        if (inst.rhs > 0.0) rep.worst = std::max(rep.worst, inst.lhs / inst.rhs);
        witness << "p=" << ctx.p() << " n=" << ctx.n() << " l=" << l << " m=" << m << " x shell=" << x
                << " lhs=" << format_real(inst.lhs) << " rhs=" << format_real(inst.rhs)
                << " cmo=" << format_real(inst.cmo);
        break;
      }
      case LemmaId::L5: {
        const auto u = random_exponent(ctx, rng, 1.2, 5.0, 4);
        const double narrow = ball_indicator_ratio_sup(u, 12);
        const double wide = ball_indicator_ratio_sup(u, 16);
        const double change = std::abs(wide - narrow) / narrow;
        pass = std::isfinite(wide) && change < 0.01;
        rep.worst = std::max(rep.worst, change);
        witness << "p=" << ctx.p() << " n=" << ctx.n() << " sup[-12,12]=" << format_real(narrow)
                << " sup[-16,16]=" << format_real(wide) << " change=" << format_real(change);
        break;
      }
    }
    if (pass) {
      ++rep.passed;
    } else {
      rep.failures.push_back({t, witness.str()});
    }
  }
  return rep;
}

}  // namespace ultraherz
