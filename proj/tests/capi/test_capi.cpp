#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <thread>

#include "growthlab/growthlab.h"

namespace {

std::string take(char* s) {
  std::string out(s);
  gl_string_free(s);
  return out;
}

gl_scale* scale(const char* literal) {
  gl_scale* s = nullptr;
  REQUIRE(gl_scale_parse(literal, &s) == GL_OK);
  return s;
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(gl_status_name(GL_OK)) == "Ok");
  CHECK(std::string(gl_status_name(GL_ERR_PARSE)) == "ParseError");
  CHECK(std::string(gl_status_name(GL_ERR_BAD_BRACKET)) == "BadBracket");
  CHECK(std::string(gl_status_name(GL_ERR_INTERNAL)) == "InternalError");
  CHECK(std::strlen(gl_version()) > 0);
}

TEST_CASE("tower round trip through the boundary") {
  gl_tower x{};
  REQUIRE(gl_tower_from_double(std::exp(1.0), &x) == GL_OK);
  gl_tower big{};
  REQUIRE(gl_tower_iter_exp(x, 2, &big) == GL_OK);
  double v = 0.0;
  REQUIRE(gl_tower_to_double(big, &v) == GL_OK);
  CHECK(v == doctest::Approx(3814279.1).epsilon(1e-7));
  gl_tower huge{};
  REQUIRE(gl_tower_iter_exp(x, 4, &huge) == GL_OK);
  CHECK(huge.level >= 1);
  CHECK(gl_tower_to_double(huge, &v) == GL_ERR_OVERFLOW);
  CHECK(std::string(gl_last_error()).find("Overflow") != std::string::npos);
  gl_tower back{};
  REQUIRE(gl_tower_iter_log(huge, 4, &back) == GL_OK);
  REQUIRE(gl_tower_to_double(back, &v) == GL_OK);
  CHECK(v == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
  CHECK(gl_tower_iter_log(gl_tower{0, -1.0}, 1, &back) == GL_ERR_DOMAIN);
  CHECK(gl_tower_from_double(1.0, nullptr) == GL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("model handles") {
  gl_model* m = nullptr;
  CHECK(gl_model_parse("exppow(c=1,n=", &m) == GL_ERR_PARSE);
  CHECK(m == nullptr);
  CHECK(std::string(gl_last_error()).find("ParseError") != std::string::npos);
  REQUIRE(gl_model_parse("rat(zeros=[];poles=[1,3];scale=1)", &m) == GL_OK);
  char* lit = nullptr;
  REQUIRE(gl_model_literal(m, &lit) == GL_OK);
  CHECK(take(lit) == "rat(zeros=[];poles=[1,3];scale=1)");
  gl_nevanlinna_row row{};
  REQUIRE(gl_nevanlinna(m, 6.0, nullptr, 0, &row) == GL_OK);
  CHECK(std::abs(row.counting - (std::log(6.0) + std::log(2.0))) < 1e-12);
  const double a[2] = {0.0, 0.0};
  REQUIRE(gl_nevanlinna(m, 6.0, a, 0, &row) == GL_OK);
  CHECK(row.counting == 0.0);
  char* csv = nullptr;
  REQUIRE(gl_nevanlinna_render(&row, 1, GL_FORMAT_CSV, &csv) == GL_OK);
  CHECK(take(csv).rfind("r,m,N,T\n6,", 0) == 0);
  gl_model_free(m);

  REQUIRE(gl_model_parse("exppow(c=1,n=2)", &m) == GL_OK);
  gl_tower r{}, out{};
  gl_tower_from_double(20.0, &r);
  REQUIRE(gl_model_max_modulus(m, r, &out) == GL_OK);
  gl_tower expect{};
  gl_tower_from_double(400.0, &expect);
  gl_tower_iter_exp(expect, 1, &expect);
  CHECK(out.level == expect.level);
  CHECK(out.mantissa == expect.mantissa);
  gl_model_free(m);
  gl_model_free(nullptr);
}

TEST_CASE("scale evaluation and inversion") {
  gl_scale* s = scale("iter(m=1,n=0,a=2,c=3)");
  gl_tower x{}, y{}, back{};
  gl_tower_from_double(4.0, &x);
  REQUIRE(gl_scale_eval(s, x, &y) == GL_OK);
  double v = 0.0;
  gl_tower_log_to_double(y, &v);
  CHECK(v == doctest::Approx(48.0).epsilon(1e-12));
  REQUIRE(gl_scale_inverse(s, y, &back) == GL_OK);
  gl_tower_to_double(back, &v);
  CHECK(v == doctest::Approx(4.0).epsilon(1e-12));
  gl_tower_from_double(0.5, &x);
  CHECK(gl_scale_eval(s, x, &y) == GL_ERR_BELOW_DOMAIN);
  gl_scale_free(s);
}

TEST_CASE("indicator set") {
  gl_scale* a = scale("exp");
  gl_scale* b = scale("iter(m=1,n=0,a=2,c=3)");
  gl_indicators* set = nullptr;
  REQUIRE(gl_indicators_compute(a, b, 1, 1, nullptr, nullptr, &set) == GL_OK);
  gl_indicator ind{};
  REQUIRE(gl_indicators_get(set, GL_RHO, &ind) == GL_OK);
  CHECK(std::abs(ind.value - 2.0) < 1e-3);
  REQUIRE(gl_indicators_get(set, GL_TAU_BAR, &ind) == GL_OK);
  CHECK(std::abs(ind.value - 3.0) < 1e-2);
  char* series = nullptr;
  REQUIRE(gl_indicators_series(set, &series) == GL_OK);
  CHECK(take(series).rfind("indicator,t,ratio\nrho,", 0) == 0);
  gl_indicators_free(set);

  gl_grid bad = gl_default_order_grid(1);
  bad.J = 4;
  CHECK(gl_indicators_compute(a, b, 1, 1, &bad, nullptr, &set) == GL_ERR_DEGENERATE_GRID);
  CHECK(gl_indicators_compute(a, b, 0, 1, nullptr, nullptr, &set) == GL_ERR_INVALID_ARGUMENT);

  // exp vs exp(e^{2x}) at (1,1): order infinite, types skipped.
  gl_scale* fast = scale("iter(m=2,n=0,a=1,c=2)");
  REQUIRE(gl_indicators_compute(a, fast, 1, 1, nullptr, nullptr, &set) == GL_OK);
  REQUIRE(gl_indicators_get(set, GL_RHO, &ind) == GL_OK);
  CHECK(ind.divergent);
  CHECK(gl_indicators_get(set, GL_SIGMA, &ind) == GL_ERR_UNSUPPORTED);
  char* json = nullptr;
  REQUIRE(gl_indicators_render(set, GL_FORMAT_JSON, &json) == GL_OK);
  CHECK(take(json).find("\"sigma\": null") != std::string::npos);
  gl_indicators_free(set);
  gl_scale_free(fast);
  gl_scale_free(a);
  gl_scale_free(b);
}

TEST_CASE("integral classification and transition") {
  gl_scale* a = scale("exp");
  gl_scale* b = scale("iter(m=1,n=0,a=3,c=1)");
  gl_verdict v{};
  REQUIRE(gl_integral_classify(a, b, 2, 2, 1.0, 3.5, nullptr, &v) == GL_OK);
  CHECK(v.verdict == GL_CONVERGES);
  gl_transition* t = nullptr;
  REQUIRE(gl_integral_transition(a, b, 2, 2, 1.0, 1.0, 6.0, 0.05, nullptr, &t) == GL_OK);
  double lo = 0, hi = 0;
  int limited = 0;
  REQUIRE(gl_transition_bracket(t, &lo, &hi, &limited) == GL_OK);
  CHECK(lo <= 3.0);
  CHECK(hi >= 3.0);
  REQUIRE(gl_transition_size(t) > 2);
  REQUIRE(gl_transition_verdict(t, 0, &v) == GL_OK);
  CHECK(v.k == 1.0);
  CHECK(v.verdict == GL_DIVERGES);
  CHECK(gl_transition_verdict(t, gl_transition_size(t), &v) == GL_ERR_INVALID_ARGUMENT);
  gl_transition_free(t);
  CHECK(gl_integral_transition(a, b, 2, 2, 1.0, 4.0, 6.0, 0.05, nullptr, &t) ==
        GL_ERR_BAD_BRACKET);

  gl_scale* gap = scale("iter(m=2,n=0,a=1,c=2)");
  gl_lemma_behavior lb{};
  REQUIRE(gl_lemma_ratio(a, gap, 2, 1, 1.0, 1.5, nullptr, &lb) == GL_OK);
  CHECK(lb == GL_UNBOUNDED);
  gl_scale_free(gap);
  gl_scale_free(a);
  gl_scale_free(b);
}

TEST_CASE("verification suite through the C API") {
  gl_report* r = nullptr;
  REQUIRE(gl_verify_run("pairs=", &r) == GL_OK);
  CHECK(gl_report_rows(r) == 0);
  CHECK(gl_report_gates_pass(r) == 1);
  gl_report_free(r);
  CHECK(gl_verify_run("pairs=identity\nunknown.key=1\n", &r) == GL_ERR_PARSE);
  REQUIRE(gl_verify_run("pairs=identity,exp-gap", &r) == GL_OK);
  CHECK(gl_report_rows(r) == 2);
  char* text = nullptr;
  REQUIRE(gl_report_render(r, GL_FORMAT_TABLE, &text) == GL_OK);
  CHECK(take(text).find("exp-gap") != std::string::npos);
  CHECK(gl_report_render(r, static_cast<gl_format>(9), &text) == GL_ERR_INVALID_ARGUMENT);
  gl_report_free(r);
  REQUIRE(gl_catalog_render(GL_FORMAT_CSV, &text) == GL_OK);
  CHECK(take(text).find("charac-rational") != std::string::npos);
}

TEST_CASE("last error is per thread") {
  gl_model* m = nullptr;
  CHECK(gl_model_parse("nope(", &m) == GL_ERR_PARSE);
  std::string other;
  std::thread worker([&] {
    gl_tower x{};
    gl_tower_from_double(2.0, &x);
    other = gl_last_error();
  });
  worker.join();
  CHECK(other.empty());
  CHECK(std::string(gl_last_error()).find("ParseError") != std::string::npos);
}
