#pragma once

#include "ultraherz/harness.hpp"
#include "ultraherz/norms.hpp"
#include "ultraherz/oracle.hpp"
#include "ultraherz/radial.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace ultraherz {

using Json = nlohmann::ordered_json;

/// Malformed input; the message names the source line or the field path ("/u/values/2").
class JsonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses text, reporting syntax errors as "<source>:<line>:<column>: ...".
Json parse_json_text(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& value);

// Reals are written as shortest round-trip decimal strings; reading also accepts JSON numbers.
Json real_to_json(double x);
double real_from_json(const Json& j, const std::string& path);

Json to_json(const PadicContext& ctx);
PadicContext context_from_json(const Json& j, const std::string& path = "");

/// {"window":[j_min,j_max],"coeffs":[...],"inner_tail":{"A":..,"e":..},"outer_tail":{...}}
/// plus optional "value_at_zero" and "ctx"; without "ctx" the fallback context is used.
Json to_json(const RadialStepFunction& f);
RadialStepFunction function_from_json(const Json& j, const PadicContext& fallback, const std::string& path = "");

/// {"window":[j_min,j_max],"values":[...],"u_inner":..,"u_infinity":..} plus optional "ctx".
Json to_json(const ExponentFunction& u);
ExponentFunction exponent_from_json(const Json& j, const PadicContext& fallback, const std::string& path = "");

Json to_json(const NormResult& r);
Json to_json(const OracleEstimate& e);
Json to_json(const HypothesisReport& r);
Json to_json(const LemmaReport& r);

Json to_json(const TheoremConfig& tc);
/// Every field except "u" is optional; see the README for the schema.
TheoremConfig theorem_config_from_json(const Json& j);

/// Summary of a sweep: parameters, hypothesis record, empirical sup per N (rows go to CSV).
Json to_json(const RatioReport& r);

}  // namespace ultraherz
