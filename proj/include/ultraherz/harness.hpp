#pragma once

#include "ultraherz/norms.hpp"
#include "ultraherz/operators.hpp"
#include "ultraherz/radial.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ultraherz {

/// T31/T32: Herz estimates for the Hardy operators and their commutators;
/// T41/T42: the Morrey-Herz versions; Cxx: the alpha = 0 corollaries.
enum class TheoremId { T31, T32, T41, T42, C31, C32, C41, C42 };

std::string_view to_string(TheoremId id) noexcept;
TheoremId parse_theorem_id(std::string_view name);

bool is_commutator_theorem(TheoremId id) noexcept;
bool is_morrey_herz_theorem(TheoremId id) noexcept;
bool is_corollary(TheoremId id) noexcept;

/// Which functions a sweep draws.
struct FamilySpec {
  enum class Kind { random, single_shell };
  Kind kind = Kind::random;
  /// Support bounds: supports are drawn inside [-N, N] for each listed N.
  std::vector<int> support_bounds{5, 10, 20};
  int count = 200;
  std::uint64_t seed = 1;
  /// Shells k for the single-shell family f_k = chi_{S_k}.
  std::vector<int> shells;
};

/// Diagnostic switch: `standard` measures T f in the space of v(.) and m2
/// against f in the space of u(.) and m1, the reverse of the stated direction.
enum class SpaceOrder { as_stated, standard };

struct TheoremConfig {
  TheoremId theorem = TheoremId::T31;
  PadicContext ctx{2, 1};
  ExponentFunction u = ExponentFunction::constant(PadicContext{2, 1}, 2.0);
  double alpha = 0.0;
  double beta = 0.0;
  double m1 = 1.0;
  double m2 = 1.0;
  double lambda = 0.0;
  std::optional<double> mh_base;
  /// hardy / hardy_adjoint for T31, T41 and their corollaries; the commutator
  /// kinds for T32, T42 and theirs. nullopt picks the non-adjoint one.
  std::optional<OperatorKind> op;
  std::optional<RadialStepFunction> symbol;
  FamilySpec family;
  SpaceOrder spaces = SpaceOrder::as_stated;

  OperatorKind operator_kind() const;
  /// The configured symbol or the default valuation profile.
  RadialStepFunction symbol_or_default() const;
};

/// b_j = j on [-radius, radius], frozen at the end values outside.
RadialStepFunction valuation_profile(const PadicContext& ctx, int radius = 3);

struct Violation {
  std::string hypothesis;
  std::string relation;
  double lhs;
  double rhs;
};

struct DerivedExponents {
  double u_minus, u_plus;
  std::optional<double> u_conj_minus, u_conj_plus;
  std::optional<double> v_minus, v_plus;
  std::optional<double> v_conj_minus, v_conj_plus;
  std::optional<double> alpha_bound;
  std::optional<double> beta_lo, beta_hi;
};

struct HypothesisReport {
  bool ok = true;
  std::vector<Violation> violations;
  DerivedExponents derived{};
  std::vector<std::string> notes;
};

/// Checks every hypothesis of the selected statement. Violations are data, never exceptions.
HypothesisReport validate_hypotheses(const TheoremConfig& tc);

struct RatioOutcome {
  double source_norm = 0.0;
  double target_norm = 0.0;
  /// nullopt: skipped (zero or infinite source norm).
  std::optional<double> ratio;
};

/// Target-space norm of T f over source-space norm of f for the statement's spaces.
RatioOutcome boundedness_ratio(const TheoremConfig& tc, const RadialStepFunction& f);

/// The sample_id-th member of the family for support bound N.
RadialStepFunction family_member(const TheoremConfig& tc, int support_bound, int sample_index);

struct RatioRow {
  int sample_id;
  int support_bound;
  RatioOutcome outcome;
};

struct RatioReport {
  TheoremConfig config;
  HypothesisReport hypotheses;
  std::vector<RatioRow> rows;
  /// Empirical sup of the ratio per support bound, in family order; nullopt when no row had a ratio.
  std::vector<std::pair<int, std::optional<double>>> sup_by_bound;
  std::optional<double> sup;
  std::string csv_path;
};

/// Evaluates the family concurrently; rows are merged in sample_id order.
/// Throws HypothesisViolation if validation fails.
RatioReport sweep(const TheoremConfig& tc, unsigned threads = 0);

/// `sample_id,N,source_norm,target_norm,ratio` plus one line per row.
std::string ratio_csv(const RatioReport& report);
/// Writes ratio_csv to path; I/O failures throw std::runtime_error naming the path.
void write_ratio_csv(RatioReport& report, const std::string& path);

enum class LemmaId { L1, L3, L5 };

std::string_view to_string(LemmaId id) noexcept;
LemmaId parse_lemma_id(std::string_view name);

struct LemmaFailure {
  int trial;
  std::string witness;
};

struct LemmaReport {
  LemmaId lemma;
  int trials = 0;
  int passed = 0;
  /// Largest lhs/rhs (L3), largest W0 constant (L1), largest relative sup change (L5).
  double worst = 0.0;
  std::vector<LemmaFailure> failures;

  bool ok() const noexcept { return failures.empty(); }
};

LemmaReport check_lemmas(LemmaId which, int trials, std::uint64_t seed);

/// One instance of the ball-shift inequality |g(x) - g_{B_m}| <= |g(x) - g_{B_l}| + p^n |l - m| ||g||_CMO.
struct BallShiftInstance {
  double lhs;
  double rhs;
  double cmo;
};
BallShiftInstance ball_shift(const RadialStepFunction& g, const ExponentFunction& u, int l, int m, int x_shell);

/// sup over k in [-radius, radius] of ||chi_{B_k}|| / p^{kn / u(x,k)}, with x on S_k.
double ball_indicator_ratio_sup(const ExponentFunction& u, int radius);

/// Random exponent with values in [lo, hi] on a window inside [-width, width], constant tails.
ExponentFunction random_exponent(const PadicContext& ctx, std::mt19937_64& rng, double lo, double hi, int width);

}  // namespace ultraherz
