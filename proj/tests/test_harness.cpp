#include "usym/harness.hpp"
#include "usym/json_io.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace usym;

namespace {

RunConfig small_config() {
  RunConfig c;
  c.schedule = {{1, 32}, {2, 64}, {4, 128}};
  return c;
}

} // namespace

TEST_CASE("threshold") {
  const auto r = quadratic_threshold();
  CHECK(r.lambda0 == doctest::Approx(2.7437072699922695).epsilon(1e-14));
  CHECK(r.t0 == doctest::Approx(1.8671613504191111).epsilon(1e-14));
  CHECK(std::abs(r.t0 - 1.867) < 1e-3);
  CHECK(r.residual <= 1e-12);
  CHECK(std::abs(r.t0 - (2 - 1 / (r.lambda0 * r.lambda0))) <= 1e-12);
}

TEST_CASE("equality on the default suite for x") {
  const auto reps = verify_equality(parse_symbol("x"), default_suite(), "x");
  REQUIRE(reps.size() == 7);
  for (const auto& r : reps) {
    CAPTURE(r.element_id);
    CHECK(r.passed);
    CHECK_FALSE(r.inconclusive);
    CHECK(r.gap >= -1e-7);
  }
}

TEST_CASE("non-Hermitian suite entries are skipped as inconclusive") {
  Eigen::MatrixXcd j(2, 2);
  j << 0, 1, 0, 0;
  const Suite s = {{"jordan", AlgebraElement::general(j, {NormTag::op_l2, 0})}};
  const auto reps = verify_equality(parse_symbol("x"), s, "x");
  REQUIRE(reps.size() == 1);
  CHECK(reps[0].inconclusive);
  CHECK_FALSE(reps[0].passed);
}

TEST_CASE("run_universality: accept, shape reject, fail-fast") {
  auto cfg = small_config();
  auto v = run_universality(parse_symbol("x^2+1"), cfg);
  CHECK(v.outcome == Outcome::accept_up_to);
  CHECK(exit_code(v.outcome) == 0);
  CHECK(v.accepted_up_to == Window{4, 128});

  cfg.fail_fast = true;
  v = run_universality(parse_symbol("x^2-1"), cfg);
  CHECK(v.outcome == Outcome::reject);
  CHECK(v.stage == "shape");
  CHECK_FALSE(v.pd);
  CHECK(v.equality.empty());
  CHECK(exit_code(v.outcome) == 2);

  cfg.fail_fast = false;
  v = run_universality(parse_symbol("x^2-1"), cfg);
  CHECK(v.outcome == Outcome::reject);
  CHECK(v.stage == "shape");
  CHECK(v.pd);
  CHECK_FALSE(v.equality.empty());
}

TEST_CASE("scale ranges") {
  const auto r = parse_scale_range("0.5:2:0.5");
  CHECK(r.values().size() == 4);
  CHECK_THROWS_AS(parse_scale_range("1:2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scale_range("1:a:2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scale_range("2:1:0.1"), std::invalid_argument);
}

TEST_CASE("witness scan never reports rho above the norm") {
  const auto w = witness_scan(parse_symbol("-x^2+2i*x+1.99"), 8, parse_scale_range("0.1:1:0.3"));
  CHECK(w.rows.size() == 4);
  for (const auto& r : w.rows) CHECK(r.gap >= -1e-7);
  CHECK_THROWS_AS(witness_scan(parse_symbol("x"), 3, {}), std::invalid_argument);
}

TEST_CASE("reports round trip and name bad paths") {
  auto cfg = small_config();
  const auto v = run_universality(parse_symbol("x"), cfg, "lin");
  const std::string line = report_jsonl({v});
  const Json j = Json::parse(line);
  CHECK(j["schema"] == "usym.report.v1");
  CHECK(j["symbol"] == "lin");
  CHECK(j["outcome"] == "accept_up_to");
  CHECK(j["certificate"].is_null());
  CHECK(report_csv({v}).rfind("symbol,expr,outcome", 0) == 0);
  try {
    report_emit({v}, "/nonexistent/dir/out.jsonl");
    FAIL("no throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/out.jsonl") != std::string::npos);
  }
}

TEST_CASE("certificate JSON round trip") {
  GramCertificate c;
  c.base = -0.5;
  c.direction = -1;
  c.points = {0, 0.1, 0.2};
  c.coeffs = {Complex(1, 0), Complex(0.2, -0.3), Complex(-1, 0.5)};
  c.form_value = -0.01;
  const auto d = certificate_from_json(Json::parse(certificate_to_json(c).dump()));
  CHECK(d.base == c.base);
  CHECK(d.direction == c.direction);
  CHECK(d.points == c.points);
  CHECK(d.coeffs == c.coeffs);
  CHECK(d.form_value == c.form_value);
}

TEST_CASE("suite from JSON") {
  const Json j = Json::parse(R"({"elements":[
    {"id":"d","kind":"diag_lp","p":"inf","re":[1,-2]},
    {"id":"m","kind":"multiplier","re":[-1,0,1]},
    {"id":"s","kind":"self_adjoint","re":[[1,0],[0,-1]]},
    {"id":"g","kind":"general","norm":"op_l1","re":[[1,2],[0,1]]}]})");
  const Suite s = suite_from_json(j);
  REQUIRE(s.size() == 4);
  CHECK(s[0].element.norm.tag == NormTag::op_linf);
  CHECK(s[1].element.degree() == 1);
  CHECK(s[3].element.norm.tag == NormTag::op_l1);
  CHECK_THROWS(suite_from_json(Json::parse(R"({"elements":[{"id":"x","kind":"bogus"}]})")));
  const auto back = element_from_json(element_to_json(s[2].element));
  CHECK((back.matrix - s[2].element.matrix).norm() == 0);
}
