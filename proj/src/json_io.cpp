#include "ultraherz/json_io.hpp"

#include "ultraherz/real_format.hpp"

#include <fstream>
#include <sstream>

namespace ultraherz {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw JsonError((path.empty() ? std::string("/") : path) + ": " + what);
}

const Json& field(const Json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "/" + key, "missing field");
  return *it;
}

const Json* optional_field(const Json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

int int_from_json(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail(path, "integer out of range");
  return static_cast<int>(v);
}

std::uint64_t seed_from_json(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  fail(path, "expected a nonnegative integer seed");
}

std::string string_from_json(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::pair<int, int> window_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [j_min, j_max]");
  const int lo = int_from_json(j[0], path + "/0");
  const int hi = int_from_json(j[1], path + "/1");
  if (hi < lo) fail(path, "j_max < j_min");
  return {lo, hi};
}

std::vector<double> reals_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(real_from_json(j[i], path + "/" + std::to_string(i)));
  return out;
}

Json reals_to_json(std::span<const double> xs) {
  Json arr = Json::array();
  for (const double x : xs) arr.push_back(real_to_json(x));
  return arr;
}

Json tail_to_json(const PowerTail& t) { return Json{{"A", real_to_json(t.amplitude)}, {"e", real_to_json(t.rate)}}; }

PowerTail tail_from_json(const Json& j, const std::string& path) {
  return {real_from_json(field(j, path, "A"), path + "/A"), real_from_json(field(j, path, "e"), path + "/e")};
}

PadicContext resolve_context(const Json& j, const PadicContext& fallback, const std::string& path) {
  if (!j.is_object()) return fallback;
  if (const auto* c = optional_field(j, path, "ctx")) return context_from_json(*c, path + "/ctx");
  return fallback;
}

Json optional_real(const std::optional<double>& x) { return x ? real_to_json(*x) : Json(nullptr); }

// Converts library exceptions raised while building a value into path-tagged JSON errors.
template <class F>
auto guarded(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const JsonError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw JsonError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": malformed JSON (" +
                    e.what() + ")");
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw JsonError(path + ": cannot open file");
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_json_text(buf.str(), path);
}

void write_json_file(const std::string& path, const Json& value) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << value.dump(2) << '\n';
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

Json real_to_json(double x) { return format_real(x); }

double real_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    if (const auto v = parse_real(j.get<std::string>())) return *v;
    fail(path, "'" + j.get<std::string>() + "' is not a real number");
  }
  fail(path, "expected a real number (decimal string or number)");
}

Json to_json(const PadicContext& ctx) { return Json{{"p", ctx.p()}, {"n", ctx.n()}}; }

PadicContext context_from_json(const Json& j, const std::string& path) {
  const int p = int_from_json(field(j, path, "p"), path + "/p");
  const int n = int_from_json(field(j, path, "n"), path + "/n");
  return guarded(path, [&] { return PadicContext(p, n); });
}

Json to_json(const RadialStepFunction& f) {
  Json j;
  j["ctx"] = to_json(f.context());
  j["window"] = Json::array({f.j_min(), f.j_max()});
  j["coeffs"] = reals_to_json(f.coeffs());
  j["inner_tail"] = tail_to_json(f.inner_tail());
  j["outer_tail"] = tail_to_json(f.outer_tail());
  j["value_at_zero"] = real_to_json(f.value_at_zero());
  return j;
}

RadialStepFunction function_from_json(const Json& j, const PadicContext& fallback, const std::string& path) {
  const auto ctx = resolve_context(j, fallback, path);
  const auto [lo, hi] = window_from_json(field(j, path, "window"), path + "/window");
  auto coeffs = reals_from_json(field(j, path, "coeffs"), path + "/coeffs");
  if (static_cast<int>(coeffs.size()) != hi - lo + 1) {
    fail(path + "/coeffs", "expected " + std::to_string(hi - lo + 1) + " coefficients for the window");
  }
  PowerTail inner, outer;
  if (const auto* t = optional_field(j, path, "inner_tail")) inner = tail_from_json(*t, path + "/inner_tail");
  if (const auto* t = optional_field(j, path, "outer_tail")) outer = tail_from_json(*t, path + "/outer_tail");
  std::optional<double> at_zero;
  if (const auto* z = optional_field(j, path, "value_at_zero")) at_zero = real_from_json(*z, path + "/value_at_zero");
  return guarded(path, [&] { return RadialStepFunction(ctx, lo, std::move(coeffs), inner, outer, at_zero); });
}

Json to_json(const ExponentFunction& u) {
  Json j;
  j["ctx"] = to_json(u.context());
  j["window"] = Json::array({u.j_min(), u.j_max()});
  j["values"] = reals_to_json(u.values());
  j["u_inner"] = real_to_json(u.inner());
  j["u_infinity"] = real_to_json(u.infinity());
  return j;
}

ExponentFunction exponent_from_json(const Json& j, const PadicContext& fallback, const std::string& path) {
  const auto ctx = resolve_context(j, fallback, path);
  if (j.is_number() || j.is_string()) {
    const double u = real_from_json(j, path);
    return guarded(path, [&] { return ExponentFunction::constant(ctx, u); });
  }
  const auto [lo, hi] = window_from_json(field(j, path, "window"), path + "/window");
  auto values = reals_from_json(field(j, path, "values"), path + "/values");
  if (static_cast<int>(values.size()) != hi - lo + 1) {
    fail(path + "/values", "expected " + std::to_string(hi - lo + 1) + " values for the window");
  }
  const double inner = real_from_json(field(j, path, "u_inner"), path + "/u_inner");
  const double outer = real_from_json(field(j, path, "u_infinity"), path + "/u_infinity");
  return guarded(path, [&] { return ExponentFunction(ctx, lo, std::move(values), inner, outer); });
}

Json to_json(const NormResult& r) {
  return Json{{"value", real_to_json(r.value)},
              {"convergent", r.convergent},
              {"tail_remainder_bound", real_to_json(r.tail_remainder_bound)}};
}

Json to_json(const OracleEstimate& e) {
  return Json{{"estimate", real_to_json(e.estimate)},
              {"sigma", real_to_json(e.sigma)},
              {"truncation_bias_bound", real_to_json(e.truncation_bias_bound)}};
}

Json to_json(const HypothesisReport& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"hypothesis", v.hypothesis},
                          {"relation", v.relation},
                          {"lhs", real_to_json(v.lhs)},
                          {"rhs", real_to_json(v.rhs)}});
  }
  const auto& d = r.derived;
  Json derived{{"u_minus", real_to_json(d.u_minus)},
               {"u_plus", real_to_json(d.u_plus)},
               {"u_conj_minus", optional_real(d.u_conj_minus)},
               {"u_conj_plus", optional_real(d.u_conj_plus)},
               {"v_minus", optional_real(d.v_minus)},
               {"v_plus", optional_real(d.v_plus)},
               {"v_conj_minus", optional_real(d.v_conj_minus)},
               {"v_conj_plus", optional_real(d.v_conj_plus)},
               {"alpha_bound", optional_real(d.alpha_bound)},
               {"beta_lo", optional_real(d.beta_lo)},
               {"beta_hi", optional_real(d.beta_hi)}};
  return Json{{"ok", r.ok}, {"violations", violations}, {"derived", derived}, {"notes", r.notes}};
}

Json to_json(const LemmaReport& r) {
  Json failures = Json::array();
  for (const auto& f : r.failures) failures.push_back({{"trial", f.trial}, {"witness", f.witness}});
  return Json{{"lemma", std::string(to_string(r.lemma))},
              {"trials", r.trials},
              {"passed", r.passed},
              {"worst", real_to_json(r.worst)},
              {"ok", r.ok()},
              {"failures", failures}};
}

Json to_json(const TheoremConfig& tc) {
  Json j;
  j["theorem"] = std::string(to_string(tc.theorem));
  j["ctx"] = to_json(tc.ctx);
  j["u"] = to_json(tc.u);
  j["alpha"] = real_to_json(tc.alpha);
  j["beta"] = real_to_json(tc.beta);
  j["m1"] = real_to_json(tc.m1);
  j["m2"] = real_to_json(tc.m2);
  j["lambda"] = real_to_json(tc.lambda);
  if (tc.mh_base) j["mh_base"] = real_to_json(*tc.mh_base);
  if (tc.op) j["operator"] = std::string(to_string(*tc.op));
  if (tc.symbol) j["symbol"] = to_json(*tc.symbol);
  Json fam;
  fam["kind"] = tc.family.kind == FamilySpec::Kind::random ? "random" : "single-shell";
  fam["N"] = tc.family.support_bounds;
  fam["count"] = tc.family.count;
  fam["seed"] = tc.family.seed;
  if (!tc.family.shells.empty()) fam["shells"] = tc.family.shells;
  j["family"] = fam;
  j["spaces"] = tc.spaces == SpaceOrder::as_stated ? "as-stated" : "standard";
  return j;
}

TheoremConfig theorem_config_from_json(const Json& j) {
  TheoremConfig tc;
  if (!j.is_object()) fail("", "expected a theorem config object");
  if (const auto* t = optional_field(j, "", "theorem")) {
    tc.theorem = guarded("/theorem", [&] { return parse_theorem_id(string_from_json(*t, "/theorem")); });
  }
  if (const auto* c = optional_field(j, "", "ctx")) tc.ctx = context_from_json(*c, "/ctx");
  tc.u = exponent_from_json(field(j, "", "u"), tc.ctx, "/u");
  auto real_or = [&](const char* key, double fallback) {
    const auto* v = optional_field(j, "", key);
    return v ? real_from_json(*v, std::string("/") + key) : fallback;
  };
  tc.alpha = real_or("alpha", 0.0);
  tc.beta = real_or("beta", 0.0);
  tc.m1 = real_or("m1", 1.0);
  tc.m2 = real_or("m2", 1.0);
  tc.lambda = real_or("lambda", 0.0);
  if (const auto* b = optional_field(j, "", "mh_base")) tc.mh_base = real_from_json(*b, "/mh_base");
  if (const auto* o = optional_field(j, "", "operator")) {
    tc.op = guarded("/operator", [&] { return parse_operator_kind(string_from_json(*o, "/operator")); });
  }
  if (const auto* s = optional_field(j, "", "symbol")) tc.symbol = function_from_json(*s, tc.ctx, "/symbol");
  if (const auto* s = optional_field(j, "", "spaces")) {
    const auto name = string_from_json(*s, "/spaces");
    if (name == "as-stated") tc.spaces = SpaceOrder::as_stated;
    else if (name == "standard") tc.spaces = SpaceOrder::standard;
    else fail("/spaces", "expected \"as-stated\" or \"standard\"");
  }
  if (const auto* f = optional_field(j, "", "family")) {
    auto& fam = tc.family;
    if (const auto* k = optional_field(*f, "/family", "kind")) {
      const auto name = string_from_json(*k, "/family/kind");
      if (name == "random") fam.kind = FamilySpec::Kind::random;
      else if (name == "single-shell") fam.kind = FamilySpec::Kind::single_shell;
      else fail("/family/kind", "expected \"random\" or \"single-shell\"");
    }
    if (const auto* n = optional_field(*f, "/family", "N")) {
      if (!n->is_array()) fail("/family/N", "expected an array of support bounds");
      fam.support_bounds.clear();
      for (std::size_t i = 0; i < n->size(); ++i) {
        const int bound = int_from_json((*n)[i], "/family/N/" + std::to_string(i));
        if (bound < 0) fail("/family/N/" + std::to_string(i), "support bound must be >= 0");
        fam.support_bounds.push_back(bound);
      }
    }
    if (const auto* c = optional_field(*f, "/family", "count")) {
      fam.count = int_from_json(*c, "/family/count");
      if (fam.count < 0) fail("/family/count", "count must be >= 0");
    }
    if (const auto* s = optional_field(*f, "/family", "seed")) fam.seed = seed_from_json(*s, "/family/seed");
    if (const auto* s = optional_field(*f, "/family", "shells")) {
      if (!s->is_array()) fail("/family/shells", "expected an array of shells");
      for (std::size_t i = 0; i < s->size(); ++i) {
        fam.shells.push_back(int_from_json((*s)[i], "/family/shells/" + std::to_string(i)));
      }
    }
    if (fam.kind == FamilySpec::Kind::single_shell && fam.shells.empty()) {
      fail("/family/shells", "single-shell family needs a list of shells");
    }
  }
  return tc;
}

Json to_json(const RatioReport& r) {
  Json sups = Json::array();
  for (const auto& [bound, sup] : r.sup_by_bound) sups.push_back({{"N", bound}, {"empirical_sup", optional_real(sup)}});
  return Json{{"config", to_json(r.config)},
              {"hypotheses", to_json(r.hypotheses)},
              {"rows", r.rows.size()},
              {"empirical_sup", optional_real(r.sup)},
              {"sup_defined", r.sup.has_value()},
              {"empirical_sup_by_N", sups},
              {"csv", r.csv_path}};
}

}  // namespace ultraherz
