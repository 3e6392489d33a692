#pragma once

#include "ultraherz/radial.hpp"

#include <optional>
#include <string_view>

namespace ultraherz {

enum class OperatorKind { hardy, hardy_adjoint, commutator, commutator_adjoint, maximal };

std::string_view to_string(OperatorKind kind) noexcept;
/// Accepts the CLI spellings ("hardy-adjoint", ...). Throws std::invalid_argument.
OperatorKind parse_operator_kind(std::string_view name);

struct OperatorSpec {
  OperatorKind kind = OperatorKind::hardy;
  double alpha = 0.0;
  /// Required for the commutator kinds, absent otherwise.
  std::optional<RadialStepFunction> symbol;

  /// Throws HypothesisViolation when alpha or the symbol do not fit the kind.
  void validate(const PadicContext& ctx) const;
};

/// H_alpha f on shell k: p^{k(alpha - n)} times the integral of f over B_k.
double hardy_value(const RadialStepFunction& f, double alpha, int k);
/// H*_alpha f on shell k: (1 - p^{-n}) sum_{j > k} f_j p^{j alpha}.
double hardy_adjoint_value(const RadialStepFunction& f, double alpha, int k);
/// M f on shell k.
double maximal_value(const RadialStepFunction& f, int k);

/// Fractional p-adic Hardy operator; 0 <= alpha < n.
RadialStepFunction hardy(const RadialStepFunction& f, double alpha);
/// Its adjoint, integrating f(t) / |t|_p^{n - alpha} outside the ball of radius |x|_p.
RadialStepFunction hardy_adjoint(const RadialStepFunction& f, double alpha);
/// b H f - H(b f), or b H* f - H*(b f) when adjoint is set.
RadialStepFunction commutator(const RadialStepFunction& f, const RadialStepFunction& b, double alpha, bool adjoint);
/// Centered Hardy-Littlewood maximal operator.
RadialStepFunction maximal(const RadialStepFunction& f);

RadialStepFunction apply(const OperatorSpec& spec, const RadialStepFunction& f);

}  // namespace ultraherz
