#include "support/generators.hpp"
#include "ultraherz/cli.hpp"
#include "ultraherz/json_io.hpp"
#include "ultraherz/real_format.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ultraherz;

namespace {

const std::string kData = ULTRAHERZ_TEST_DATA;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ultraherz");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream s;
  s << is.rdbuf();
  return s.str();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ultraherz_test_" + name)).string();
}

void write_text(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

}  // namespace

TEST_SUITE("json and cli") {
  TEST_CASE("reals round-trip bit-exactly") {
    for (const double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 5e-324, 0.0, -0.0}) {
      const auto back = parse_real(format_real(x));
      REQUIRE(back);
      REQUIRE(std::signbit(*back) == std::signbit(x));
      REQUIRE(*back == x);
    }
    CHECK(std::isinf(*parse_real("inf")));
    CHECK_FALSE(parse_real("1.5x"));
  }

  TEST_CASE("functions and exponents round-trip") {
    for (int t = 0; t < 100; ++t) {
      auto rng = testing::rng_for(40, t);
      const auto ctx = testing::random_ctx(rng);
      const auto u = testing::random_u(ctx, rng);
      const auto f = testing::random_with_tails(u, rng);
      const auto text = to_json(f).dump();
      const auto f2 = function_from_json(parse_json_text(text), PadicContext(2, 1));
      REQUIRE(to_json(f2).dump() == text);
      REQUIRE(f2.context() == ctx);
      for (int k = -10; k <= 10; ++k) REQUIRE(f2(k) == f(k));
      const auto u2 = exponent_from_json(parse_json_text(to_json(u).dump()), PadicContext(2, 1));
      for (int k = -10; k <= 10; ++k) REQUIRE(u2(k) == u(k));
    }
  }

  TEST_CASE("theorem configs round-trip") {
    TheoremConfig tc;
    tc.theorem = TheoremId::T42;
    tc.alpha = 0.2;
    tc.lambda = 0.1;
    tc.symbol = valuation_profile(tc.ctx, 2);
    tc.op = OperatorKind::commutator_adjoint;
    tc.family.seed = 99;
    const auto j = to_json(tc);
    CHECK(to_json(theorem_config_from_json(j)).dump() == j.dump());
  }

  TEST_CASE("errors carry a line or a field path") {
    try {
      (void)read_json_file(kData + "/malformed.json");
      FAIL("expected JsonError");
    } catch (const JsonError& e) {
      CHECK(std::string(e.what()).find("malformed.json:4:") != std::string::npos);
    }
    try {
      (void)function_from_json(parse_json_text(R"({"window":[0,1],"coeffs":["1","x"]})"), PadicContext(2, 1));
      FAIL("expected JsonError");
    } catch (const JsonError& e) {
      CHECK(std::string(e.what()).find("/coeffs/1") != std::string::npos);
    }
    try {
      (void)theorem_config_from_json(parse_json_text(R"({"u": {"window":[0,0],"values":["0.5"],"u_inner":2,"u_infinity":2}})"));
      FAIL("expected JsonError");
    } catch (const JsonError& e) {
      CHECK(std::string(e.what()).find("/u") != std::string::npos);
    }
    CHECK_THROWS_AS(theorem_config_from_json(parse_json_text(R"({"alpha": 1})")), JsonError);
  }

  TEST_CASE("norm command prints a NormResult") {
    const auto r = run({"norm", "--space", "herz", "--beta", "0", "--m", "2", "-u", kData + "/u_two.json", "-i",
                        kData + "/f_shell0.json"});
    REQUIRE(r.code == 0);
    const auto j = parse_json_text(r.out);
    CHECK(real_from_json(j["value"], "") == doctest::Approx(std::sqrt(0.5)));
    CHECK(j["convergent"] == true);
    CHECK(j.contains("tail_remainder_bound"));
  }

  TEST_CASE("validate exits 2 with the violation list") {
    const auto r = run({"validate", "--theorem", "T31", "--config", kData + "/t31_bad_alpha.json"});
    CHECK(r.code == 2);
    const auto j = parse_json_text(r.out);
    CHECK(j["ok"] == false);
    CHECK(j["violations"].size() >= 1);
  }

  TEST_CASE("malformed input exits 1") {
    const auto r = run({"norm", "--space", "lebesgue", "-u", kData + "/u_two.json", "-i", kData + "/malformed.json"});
    CHECK(r.code == 1);
    CHECK(r.err.find("malformed.json:") != std::string::npos);
    CHECK(run({"norm"}).code == 1);
  }

  TEST_CASE("apply, cmo, oracle and check commands") {
    const auto out = temp_path("apply.json");
    REQUIRE(run({"apply", "--op", "hardy", "--alpha", "0.5", "-i", kData + "/f_shell0.json", "-o", out}).code == 0);
    const auto h = function_from_json(read_json_file(out), PadicContext(2, 1));
    CHECK(h(2) == doctest::Approx(std::pow(2.0, 2 * -0.5) * 0.5));
    CHECK(run({"apply", "--op", "hardy", "--alpha", "3", "-i", kData + "/f_shell0.json"}).code == 2);

    const auto c = run({"cmo", "-i", kData + "/f_shell0.json", "-u", kData + "/u_two.json"});
    REQUIRE(c.code == 0);

    const auto o = run({"oracle", "--target", "operator", "--op", "hardy-adjoint", "--probe-shell", "-1", "-i",
                        kData + "/f_shell0.json", "--samples", "20000", "--seed", "5"});
    REQUIRE(o.code == 0);
    const auto oj = parse_json_text(o.out);
    CHECK(oj["seed"] == 5);
    CHECK(std::abs(real_from_json(oj["estimate"], "") - real_from_json(oj["closed_form"], "")) <=
          4.0 * real_from_json(oj["sigma"], ""));

    CHECK(run({"check", "--lemma", "L3", "--trials", "10"}).code == 0);
  }

  TEST_CASE("sweep writes the documented CSV and honours the seed precedence") {
    const auto cfg = temp_path("t41.json");
    write_text(cfg, R"({"theorem":"T31","ctx":{"p":2,"n":1},"u":"2","alpha":"0.25",
                        "family":{"N":[3],"count":5,"seed":3}})");
    const auto csv1 = temp_path("a.csv");
    const auto csv2 = temp_path("b.csv");
    const auto csv3 = temp_path("c.csv");
    REQUIRE(run({"sweep", "--theorem", "T41", "--config", cfg, "-o", csv1}).code == 0);
    REQUIRE(run({"sweep", "--theorem", "T41", "--config", cfg, "-o", csv2}).code == 0);
    const auto text = slurp(csv1);
    CHECK(text.rfind("sample_id,N,source_norm,target_norm,ratio\n", 0) == 0);
    CHECK(text == slurp(csv2));

    ::setenv("ULTRAHERZ_SEED", "11", 1);
    REQUIRE(run({"sweep", "--config", cfg, "-o", csv2}).code == 0);
    REQUIRE(run({"sweep", "--config", cfg, "-o", csv3, "--seed", "3"}).code == 0);
    ::unsetenv("ULTRAHERZ_SEED");
    CHECK(slurp(csv2) != text);
    CHECK(slurp(csv3) == text);

    write_text(cfg, R"({"theorem":"T31","u":"2","alpha":"0.9"})");
    CHECK(run({"sweep", "--config", cfg, "-o", csv1}).code == 2);
    CHECK(run({"sweep", "--config", cfg + ".missing", "-o", csv1}).code == 1);
  }
}
