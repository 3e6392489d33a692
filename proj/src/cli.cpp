#include "ultraherz/cli.hpp"

#include "ultraherz/harness.hpp"
#include "ultraherz/json_io.hpp"
#include "ultraherz/norms.hpp"
#include "ultraherz/operators.hpp"
#include "ultraherz/oracle.hpp"
#include "ultraherz/real_format.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <optional>
#include <string>

namespace ultraherz {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitViolation = 2;

struct Common {
  std::optional<std::uint64_t> seed;
  int p = 2;
  int n = 1;
  std::string output;

  PadicContext ctx() const { return PadicContext(p, n); }
};

/// --seed wins, then ULTRAHERZ_SEED, then the fallback.
std::uint64_t resolve_seed(const Common& c, std::uint64_t fallback) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("ULTRAHERZ_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(std::string("ULTRAHERZ_SEED='") + env + "' is not a nonnegative integer");
  }
  return fallback;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Random seed (overrides ULTRAHERZ_SEED)");
  sub->add_option("--p", c.p, "Prime p when an input file carries no ctx")->capture_default_str();
  sub->add_option("--n", c.n, "Dimension n when an input file carries no ctx")->capture_default_str();
}

void emit(const Json& j, const Common& c, std::ostream& out) {
  if (c.output.empty()) {
    out << j.dump(2) << '\n';
  } else {
    write_json_file(c.output, j);
  }
}

struct NormArgs {
  std::string space;
  std::string f_path, u_path;
  double beta = 0.0, m = 1.0, lambda = 0.0, rel_tol = 1e-10;
  std::optional<double> mh_base;
  bool cmo_literal = false;
};

struct ApplyArgs {
  std::string op;
  double alpha = 0.0;
  std::string f_path, symbol_path;
};

struct OracleArgs {
  std::string target;
  std::string f_path, u_path, symbol_path;
  std::string op = "hardy";
  double alpha = 0.0;
  int gamma = 0;
  int probe_shell = 0;
  OracleConfig cfg;
};

struct TheoremArgs {
  std::string theorem;
  std::string config_path;
  unsigned threads = 0;
};

struct CheckArgs {
  std::string lemma;
  int trials = 100;
};

std::optional<RadialStepFunction> read_symbol(const std::string& path, const PadicContext& ctx) {
  if (path.empty()) return std::nullopt;
  return function_from_json(read_json_file(path), ctx);
}

int run_norm(const NormArgs& a, const Common& c, std::ostream& out) {
  const auto ctx = c.ctx();
  const auto f = function_from_json(read_json_file(a.f_path), ctx);
  const auto u = exponent_from_json(read_json_file(a.u_path), f.context());
  NormResult r;
  if (a.space == "lebesgue") r = luxemburg_norm(f, u, a.rel_tol);
  else if (a.space == "herz") r = herz_norm(f, u, {a.beta, a.m});
  else if (a.space == "morrey-herz") r = morrey_herz_norm(f, u, {a.beta, a.m, a.lambda, a.mh_base});
  else r = cmo_norm(f, u, {a.cmo_literal, 40, a.rel_tol});
  emit(to_json(r), c, out);
  return kExitOk;
}

int run_apply(const ApplyArgs& a, const Common& c, std::ostream& out) {
  const auto f = function_from_json(read_json_file(a.f_path), c.ctx());
  const OperatorSpec spec{parse_operator_kind(a.op), a.alpha, read_symbol(a.symbol_path, f.context())};
  emit(to_json(apply(spec, f)), c, out);
  return kExitOk;
}

int run_oracle(OracleArgs a, const Common& c, std::ostream& out) {
  a.cfg.seed = resolve_seed(c, a.cfg.seed);
  const auto f = function_from_json(read_json_file(a.f_path), c.ctx());
  OracleEstimate est;
  double closed = 0.0;
  if (a.target == "integral") {
    est = mc_integrate(f, a.gamma, a.cfg);
    closed = cumulative_integral(f, a.gamma);
  } else if (a.target == "operator") {
    const OperatorSpec spec{parse_operator_kind(a.op), a.alpha, read_symbol(a.symbol_path, f.context())};
    est = mc_operator_probe(f, spec, a.probe_shell, a.cfg);
    closed = apply(spec, f)(a.probe_shell);
  } else {
    if (a.u_path.empty()) throw std::invalid_argument("oracle --target norm needs -u");
    const auto u = exponent_from_json(read_json_file(a.u_path), f.context());
    est = mc_luxemburg(f, u, a.cfg);
    closed = luxemburg_norm(f, u).value;
  }
  auto j = to_json(est);
  j["closed_form"] = real_to_json(closed);
  j["seed"] = a.cfg.seed;
  emit(j, c, out);
  return kExitOk;
}

TheoremConfig load_theorem_config(const TheoremArgs& a) {
  auto tc = theorem_config_from_json(read_json_file(a.config_path));
  if (!a.theorem.empty()) tc.theorem = parse_theorem_id(a.theorem);
  return tc;
}

int run_validate(const TheoremArgs& a, const Common& c, std::ostream& out) {
  const auto tc = load_theorem_config(a);
  const auto rep = validate_hypotheses(tc);
  auto j = to_json(rep);
  j["theorem"] = std::string(to_string(tc.theorem));
  emit(j, c, out);
  return rep.ok ? kExitOk : kExitViolation;
}

int run_sweep(const TheoremArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  auto tc = load_theorem_config(a);
  tc.family.seed = resolve_seed(c, tc.family.seed);
  const auto rep = validate_hypotheses(tc);
  if (!rep.ok) {
    err << "hypotheses fail; sweep not run\n" << to_json(rep).dump(2) << '\n';
    return kExitViolation;
  }
  auto report = sweep(tc, a.threads);
  write_ratio_csv(report, c.output);
  auto j = to_json(report);
  j["label"] = "empirical sup (not a proven constant)";
  out << j.dump(2) << '\n';
  return kExitOk;
}

int run_check(const CheckArgs& a, const Common& c, std::ostream& out) {
  const auto rep = check_lemmas(parse_lemma_id(a.lemma), a.trials, resolve_seed(c, 1));
  emit(to_json(rep), c, out);
  return rep.ok() ? kExitOk : kExitViolation;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-adic variable-exponent Herz space toolkit", "ultraherz"};
  app.require_subcommand(1);

  Common common;
  NormArgs norm;
  ApplyArgs apply_args;
  OracleArgs oracle;
  TheoremArgs validate_args, sweep_args;
  CheckArgs check;
  const std::vector<std::string> operators{"hardy", "hardy-adjoint", "commutator", "commutator-adjoint", "maximal"};

  auto* norm_cmd = app.add_subcommand("norm", "Norm of a radial function");
  add_common(norm_cmd, common);
  norm_cmd->add_option("--space", norm.space)->required()->check(
      CLI::IsMember({"lebesgue", "herz", "morrey-herz", "cmo"}));
  norm_cmd->add_option("-i,--input", norm.f_path, "Function JSON")->required()->check(CLI::ExistingFile);
  norm_cmd->add_option("-u,--exponent", norm.u_path, "Exponent JSON")->required()->check(CLI::ExistingFile);
  norm_cmd->add_option("--beta", norm.beta)->capture_default_str();
  norm_cmd->add_option("--m", norm.m)->capture_default_str();
  norm_cmd->add_option("--lambda", norm.lambda)->capture_default_str();
  norm_cmd->add_option("--mh-base", norm.mh_base, "Base of the Morrey-Herz discount (default p)");
  norm_cmd->add_flag("--cmo-literal", norm.cmo_literal, "Unrestricted CMO form ||b - b_B|| over Q_p^n");
  norm_cmd->add_option("--rel-tol", norm.rel_tol)->capture_default_str();
  norm_cmd->add_option("-o,--output", common.output, "Write JSON here instead of stdout");

  auto* apply_cmd = app.add_subcommand("apply", "Apply an operator to a radial function");
  add_common(apply_cmd, common);
  apply_cmd->add_option("--op", apply_args.op)->required()->check(CLI::IsMember(operators));
  apply_cmd->add_option("--alpha", apply_args.alpha)->capture_default_str();
  apply_cmd->add_option("--symbol", apply_args.symbol_path, "Commutator symbol JSON")->check(CLI::ExistingFile);
  apply_cmd->add_option("-i,--input", apply_args.f_path)->required()->check(CLI::ExistingFile);
  apply_cmd->add_option("-o,--output", common.output);

  auto* cmo_cmd = app.add_subcommand("cmo", "Central mean oscillation norm");
  add_common(cmo_cmd, common);
  cmo_cmd->add_option("-i,--input", norm.f_path)->required()->check(CLI::ExistingFile);
  cmo_cmd->add_option("-u,--exponent", norm.u_path)->required()->check(CLI::ExistingFile);
  cmo_cmd->add_flag("--cmo-literal", norm.cmo_literal);
  cmo_cmd->add_option("--rel-tol", norm.rel_tol)->capture_default_str();
  cmo_cmd->add_option("-o,--output", common.output);

  auto* oracle_cmd = app.add_subcommand("oracle", "Monte-Carlo cross-check of a closed form");
  add_common(oracle_cmd, common);
  oracle_cmd->add_option("--target", oracle.target)->required()->check(
      CLI::IsMember({"integral", "operator", "norm"}));
  oracle_cmd->add_option("-i,--input", oracle.f_path)->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("-u,--exponent", oracle.u_path)->check(CLI::ExistingFile);
  oracle_cmd->add_option("--gamma", oracle.gamma, "Ball index for --target integral")->capture_default_str();
  oracle_cmd->add_option("--op", oracle.op)->check(CLI::IsMember(operators))->capture_default_str();
  oracle_cmd->add_option("--alpha", oracle.alpha)->capture_default_str();
  oracle_cmd->add_option("--symbol", oracle.symbol_path)->check(CLI::ExistingFile);
  oracle_cmd->add_option("--probe-shell", oracle.probe_shell)->capture_default_str();
  oracle_cmd->add_option("--samples", oracle.cfg.samples)->capture_default_str();
  oracle_cmd->add_option("--resolution", oracle.cfg.resolution)->capture_default_str();
  oracle_cmd->add_option("--truncation", oracle.cfg.truncation, "Shell window [-N, N]")->capture_default_str();
  oracle_cmd->add_option("-o,--output", common.output);

  auto* validate_cmd = app.add_subcommand("validate", "Check a theorem's hypotheses for a config");
  add_common(validate_cmd, common);
  validate_cmd->add_option("--theorem", validate_args.theorem, "Overrides the config's theorem");
  validate_cmd->add_option("--config", validate_args.config_path)->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("-o,--output", common.output);

  auto* sweep_cmd = app.add_subcommand("sweep", "Boundedness-ratio sweep over a random family");
  add_common(sweep_cmd, common);
  sweep_cmd->add_option("--theorem", sweep_args.theorem, "Overrides the config's theorem");
  sweep_cmd->add_option("--config", sweep_args.config_path)->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("-o,--output", common.output, "CSV path")->required();
  sweep_cmd->add_option("--threads", sweep_args.threads, "0 = hardware concurrency")->capture_default_str();

  auto* check_cmd = app.add_subcommand("check", "Randomized lemma checks");
  add_common(check_cmd, common);
  check_cmd->add_option("--lemma", check.lemma)->required()->check(CLI::IsMember({"L1", "L3", "L5"}));
  check_cmd->add_option("--trials", check.trials)->check(CLI::PositiveNumber)->capture_default_str();
  check_cmd->add_option("-o,--output", common.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*norm_cmd) return run_norm(norm, common, out);
    if (*apply_cmd) return run_apply(apply_args, common, out);
    if (*cmo_cmd) {
      norm.space = "cmo";
      return run_norm(norm, common, out);
    }
    if (*oracle_cmd) return run_oracle(oracle, common, out);
    if (*validate_cmd) return run_validate(validate_args, common, out);
    if (*sweep_cmd) return run_sweep(sweep_args, common, out, err);
    if (*check_cmd) return run_check(check, common, out);
  } catch (const HypothesisViolation& e) {
    err << "hypothesis violation: " << e.what() << '\n';
    return kExitViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace ultraherz
