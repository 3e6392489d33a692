// Acceptance run: one PASS/FAIL line per criterion, INFO lines for diagnostics.
// Exit status is nonzero when any criterion fails.

#include "support/generators.hpp"
#include "ultraherz/cli.hpp"
#include "ultraherz/harness.hpp"
#include "ultraherz/json_io.hpp"
#include "ultraherz/norms.hpp"
#include "ultraherz/operators.hpp"
#include "ultraherz/oracle.hpp"
#include "ultraherz/padic.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace ultraherz;

namespace {

const std::string kConfigs = ULTRAHERZ_CONFIG_DIR;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s  %d  %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

void info(const std::string& text) {
  std::printf("INFO     %s\n", text.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome measures() {
  int cases = 0, bad = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (const int p : {2, 3, 5, 7})
    for (const int n : {1, 2, 3}) {
      const PadicContext ctx(p, n);
      // Sum over j <= gamma: the shells below -30 form a geometric series
      // with first term |S_{-31}| and ratio p^{-n}.
      const Rational below = geometric_series(sphere_measure(-31, ctx), prime_power(ctx, -n));
      Rational partial = below;
      for (int gamma = -30; gamma <= 30; ++gamma) {
        partial += sphere_measure(gamma, ctx);
        ++cases;
        if (partial != ball_measure(gamma, ctx)) ++bad;
      }
    }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 1.0, fmt("%d exact rational identities, %d mismatches, %.3f s (limit 1 s)", cases, bad, secs)};
}

Outcome luxemburg() {
  const auto t0 = std::chrono::steady_clock::now();
  int shell_bad = 0, modular_bad = 0;
  double worst_shell = 0.0, worst_modular = 0.0;
  for (int t = 0; t < 1000; ++t) {
    auto rng = testing::rng_for(1001, t);
    const auto ctx = testing::random_ctx(rng);
    const auto u = testing::random_u(ctx, rng);
    const int k = std::uniform_int_distribution<int>(-8, 8)(rng);
    const double c = std::uniform_real_distribution<double>(0.05, 20.0)(rng);
    const double closed = c * std::pow(sphere_measure_value(k, ctx), 1.0 / u(k));
    const double bis = luxemburg_norm(RadialStepFunction::shell_indicator(ctx, k, c), u, 1e-12).value;
    const double rel = std::abs(bis - closed) / closed;
    worst_shell = std::max(worst_shell, rel);
    if (rel > 1e-9) ++shell_bad;

    const auto f = t % 2 ? testing::random_with_tails(u, rng) : testing::random_compact(ctx, rng);
    if (f.is_zero()) continue;
    const double nf = luxemburg_norm(f, u).value;
    const double dev = std::abs(modular(scale(f, 1.0 / nf), u).value - 1.0);
    worst_modular = std::max(worst_modular, dev);
    if (dev > 1e-8) ++modular_bad;
  }
  const double secs = seconds_since(t0);
  return {shell_bad == 0 && modular_bad == 0 && secs < 30.0,
          fmt("single-shell closed form: 1000 cases, worst rel err %.2e (tol 1e-9); unit modular: 1000 functions, "
              "worst |rho-1| %.2e (tol 1e-8); %.2f s (limit 30 s)",
              worst_shell, worst_modular, secs)};
}

Outcome modular_inequalities() {
  int bad14 = 0, bad15 = 0, bad16 = 0;
  double worst16 = 0.0;
  for (int t = 0; t < 1000; ++t) {
    auto rng = testing::rng_for(1002, t);
    const auto ctx = testing::random_ctx(rng);
    const auto u = testing::random_u(ctx, rng);
    const auto f = t % 2 ? testing::random_with_tails(u, rng) : testing::random_compact(ctx, rng);
    const double rho = modular(f, u).value;
    const double nf = luxemburg_norm(f, u).value;
    if (!(nf <= rho + 1.0)) ++bad14;
    if (!(rho <= std::pow(1.0 + nf, u.plus()) * (1.0 + 1e-12))) ++bad15;
    // s drawn from (0, u_-]: 1 - U[0,1) lies in (0, 1].
    const double s = (1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng)) * u.minus();
    const double via_power = std::pow(luxemburg_norm(abs_pow(f, s), divide(u, s), 1e-12).value, 1.0 / s);
    const double rel = nf == 0.0 ? via_power : std::abs(via_power - nf) / nf;
    worst16 = std::max(worst16, rel);
    if (rel > 1e-8) ++bad16;
  }
  return {bad14 + bad15 + bad16 == 0,
          fmt("1000 (f,u) pairs: norm<=modular+1 violations %d, modular<=(1+norm)^u+ violations %d, power rule "
              "violations %d (worst rel %.2e, tol 1e-8)",
              bad14, bad15, bad16, worst16)};
}

Outcome hoelder() {
  int bad = 0;
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    auto rng = testing::rng_for(1003, t);
    const auto ctx = testing::random_ctx(rng);
    const auto u = testing::random_u(ctx, rng);
    const auto f = testing::random_compact(ctx, rng);
    const auto g = testing::random_compact(ctx, rng);
    const double lhs = total_integral(abs(f * g)).value();
    const double rhs = luxemburg_norm(f, u).value * luxemburg_norm(g, conjugate(u)).value;
    if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
    if (!(lhs <= 2.0 * rhs)) ++bad;
  }
  return {bad == 0, fmt("1000 pairs, %d violations of the constant-2 bound, worst int|fg| / (|f| |g|') = %.4f", bad, worst)};
}

Outcome operators_vs_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  int outside[2] = {0, 0};
  double worst_z[2] = {0.0, 0.0};
  const OperatorKind kinds[2] = {OperatorKind::hardy, OperatorKind::hardy_adjoint};
  for (int which = 0; which < 2; ++which) {
    for (int t = 0; t < 50; ++t) {
      auto rng = testing::rng_for(1004 + static_cast<std::uint64_t>(which), t);
      const auto ctx = testing::random_ctx(rng);
      const auto f = testing::random_compact(ctx, rng);
      const double alpha = std::uniform_real_distribution<double>(0.0, 0.9 * ctx.n())(rng);
      const int k = std::uniform_int_distribution<int>(-6, 6)(rng);
      OracleConfig cfg;
      cfg.samples = 100000;
      cfg.seed = derive_seed(2026, 5, static_cast<std::uint64_t>(100 * which + t));
      const auto e = mc_operator_probe(f, {kinds[which], alpha, std::nullopt}, k, cfg);
      const double closed = which == 0 ? hardy_value(f, alpha, k) : hardy_adjoint_value(f, alpha, k);
      const double diff = std::abs(e.estimate - closed);
      // Absolute slack at rounding level only, for the sigma = 0 cases where both sides are 0.
      if (diff > 3.0 * e.sigma + 1e-12 * std::max(1.0, std::abs(closed))) ++outside[which];
      if (e.sigma > 0.0) worst_z[which] = std::max(worst_z[which], diff / e.sigma);
    }
  }

  int duality_bad = 0;
  double worst_gap = 0.0, worst_corrected = 0.0;
  for (int t = 0; t < 200; ++t) {
    auto rng = testing::rng_for(1006, t);
    const auto ctx = testing::random_ctx(rng);
    const auto f = testing::random_compact(ctx, rng);
    const auto g = testing::random_compact(ctx, rng);
    const double lhs = total_integral(g * hardy(f, 0.0)).value();
    const double rhs = total_integral(f * hardy_adjoint(g, 0.0)).value();
    const double scale_ = std::max(1.0, total_integral(abs(g) * hardy(abs(f), 0.0)).value());
    const double gap = std::abs(lhs - rhs) / scale_;
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-9) ++duality_bad;
    const double diagonal = (1.0 - std::pow(ctx.prime(), -ctx.n())) * total_integral(f * g).value();
    worst_corrected = std::max(worst_corrected, std::abs(lhs - rhs - diagonal) / scale_);
  }
  info(fmt("duality: int g Hf - int f H*g - (1 - p^-n) int fg has worst scaled size %.2e over the same 200 pairs "
           "(H* integrates over |t| > |x| while H includes |t| = |x|)",
           worst_corrected));

  const double secs = seconds_since(t0);
  const bool pass = outside[0] == 0 && outside[1] == 0 && duality_bad == 0 && secs < 120.0;
  return {pass, fmt("hardy: %d/50 outside 3 sigma (worst %.2f sigma); hardy-adjoint: %d/50 outside 3 sigma (worst "
                    "%.2f sigma); literal duality int g Hf = int f H*g: %d/200 pairs off by > 1e-9 (worst %.2e); "
                    "%.1f s (limit 120 s)",
                    outside[0], worst_z[0], outside[1], worst_z[1], duality_bad, worst_gap, secs)};
}

Outcome space_identities() {
  int mh_bad = 0, leb_bad = 0;
  double worst_leb = 0.0;
  for (int t = 0; t < 100; ++t) {
    auto rng = testing::rng_for(1007, t);
    const auto ctx = testing::random_ctx(rng);
    const auto u = testing::random_u(ctx, rng);
    const auto f = t % 2 ? testing::random_with_tails(u, rng) : testing::random_compact(ctx, rng);
    const double beta = std::uniform_real_distribution<double>(-0.3, 0.3)(rng);
    const double m = std::uniform_real_distribution<double>(0.5, 3.0)(rng);
    const auto h = herz_norm(f, u, {beta, m});
    const auto mh = morrey_herz_norm(f, u, {beta, m, 0.0, std::nullopt});
    if (mh.convergent != h.convergent || (h.convergent && mh.value != h.value)) ++mh_bad;

    const double u0 = std::uniform_real_distribution<double>(1.2, 4.0)(rng);
    const auto uc = ExponentFunction::constant(ctx, u0);
    const auto g = testing::random_compact(ctx, rng);
    const double herz = herz_norm(g, uc, {0.0, u0}).value;
    const double leb = luxemburg_norm(g, uc, 1e-12).value;
    const double rel = leb == 0.0 ? herz : std::abs(herz - leb) / leb;
    worst_leb = std::max(worst_leb, rel);
    if (rel > 1e-8) ++leb_bad;
  }
  return {mh_bad == 0 && leb_bad == 0,
          fmt("morrey-herz(lambda=0) != herz on %d/100 inputs (exact comparison); herz(beta=0, m=u) vs Lebesgue: %d/100 "
              "off by > 1e-8 (worst rel %.2e)",
              mh_bad, leb_bad, worst_leb)};
}

Outcome lemmas() {
  const auto l3 = check_lemmas(LemmaId::L3, 500, 2026);
  const auto l5 = check_lemmas(LemmaId::L5, 20, 2026);
  return {l3.ok() && l5.ok(),
          fmt("ball-shift inequality: %d/%d instances hold (worst lhs/rhs %.4f); ball-indicator ratio sup: %d/%d "
              "exponents change < 1%% from [-12,12] to [-16,16] (worst change %.2e)",
              l3.passed, l3.trials, l3.worst, l5.passed, l5.trials, l5.worst)};
}

TheoremConfig load_config(const std::string& name) { return theorem_config_from_json(read_json_file(kConfigs + "/" + name)); }

std::string sup_text(const std::optional<double>& s) { return s ? fmt("%.6g", *s) : std::string("undefined"); }

Outcome sweeps() {
  bool pass = true;
  std::string detail;
  for (const char* name : {"t31.json", "t32.json", "t41.json", "t42.json"}) {
    const auto tc = load_config(name);
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = sweep(tc);
    const double secs = seconds_since(t0);
    std::optional<double> s10, s20;
    for (const auto& [bound, s] : report.sup_by_bound) {
      if (bound == 10) s10 = s;
      if (bound == 20) s20 = s;
    }
    const bool stable = s10 && s20 && *s20 < 1.1 * *s10;
    const bool fast = secs < 300.0;
    pass = pass && report.hypotheses.ok && stable && fast;
    detail += fmt("%s: sup N=5/10/20 = %s/%s/%s, N=20 over N=10 = %s (%s, limit 1.1), %.1f s; ",
                  std::string(to_string(tc.theorem)).c_str(), sup_text(report.sup_by_bound.at(0).second).c_str(),
                  sup_text(s10).c_str(), sup_text(s20).c_str(),
                  s10 && s20 ? fmt("%.4g", *s20 / *s10).c_str() : "n/a", stable ? "stable" : "unstable", secs);
  }

  // Out-of-range beta on the T31 configuration, single-shell family k = 1..15.
  auto probe = load_config("t31.json");
  const auto derived = validate_hypotheses(probe).derived;
  probe.beta = probe.ctx.n() / *derived.u_conj_minus + 0.5;
  const auto ratios = [&](const TheoremConfig& tc) {
    std::vector<double> r;
    for (int k = 1; k <= 15; ++k) {
      const auto out = boundedness_ratio(tc, RadialStepFunction::shell_indicator(tc.ctx, k));
      r.push_back(out.ratio.value_or(std::nan("")));
    }
    return r;
  };
  const auto increasing = [](const std::vector<double>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!std::isfinite(r[i])) return false;
      if (i > 0 && !(r[i] > r[i - 1])) return false;
    }
    return true;
  };
  const auto show = [](const std::vector<double>& r) {
    std::string s;
    for (const double x : r) s += (s.empty() ? "" : " ") + fmt("%.4g", x);
    return s;
  };
  const auto hardy_ratios = ratios(probe);
  const bool probe_ok = increasing(hardy_ratios);
  pass = pass && probe_ok;
  detail += fmt("beta probe (beta = %.3g, hardy): ratios [%s] %s", probe.beta, show(hardy_ratios).c_str(),
                probe_ok ? "strictly increasing" : "not strictly increasing");

  auto adjoint_probe = probe;
  adjoint_probe.op = OperatorKind::hardy_adjoint;
  info("beta probe with hardy-adjoint in place of hardy: ratios [" + show(ratios(adjoint_probe)) + "]");

  auto standard = load_config("t31.json");
  standard.spaces = SpaceOrder::standard;
  const auto sr = sweep(standard);
  std::string by_n;
  for (const auto& [bound, s] : sr.sup_by_bound) by_n += fmt(" N=%d: %s", bound, sup_text(s).c_str());
  info("T31 with source and target spaces swapped (u -> v, the Sobolev direction), empirical sup by N:" + by_n);
  return {pass, detail};
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream s;
  s << is.rdbuf();
  return s.str();
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string a = (dir / "ultraherz_acceptance_a.csv").string();
  const std::string b = (dir / "ultraherz_acceptance_b.csv").string();
  const auto run = [](const std::string& out) {
    const std::string cfg = kConfigs + "/t32.json";
    const char* argv[] = {"ultraherz", "sweep", "--config", cfg.c_str(), "--seed", "7", "-o", out.c_str()};
    std::ostringstream sink, err;
    return cli_main(8, argv, sink, err);
  };
  const int ca = run(a), cb = run(b);
  const auto ta = slurp(a), tb = slurp(b);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
  const bool same = ca == 0 && cb == 0 && !ta.empty() && ta == tb;
  return {same, fmt("two sweeps with --seed 7: exit codes %d/%d, %zu and %zu bytes, %s", ca, cb, ta.size(), tb.size(),
                    ta == tb ? "byte-identical" : "different")};
}

}  // namespace

int main() {
  criterion(1, "exact measure identities", measures);
  criterion(2, "Luxemburg correctness", luxemburg);
  criterion(3, "modular inequalities and power rule", modular_inequalities);
  criterion(4, "Hoelder inequality, constant 2", hoelder);
  criterion(5, "operator closed forms vs oracle, duality", operators_vs_oracle);
  criterion(6, "space identities", space_identities);
  criterion(7, "ball-shift and ball-indicator lemmas", lemmas);
  criterion(8, "theorem sweeps and beta probe", sweeps);
  criterion(9, "sweep determinism", determinism);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
