#include <doctest.h>

#include <cmath>
#include <random>

#include "growthlab/errors.hpp"
#include "growthlab/tower.hpp"

using namespace growthlab;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Unsupported;
}

}  // namespace

TEST_CASE("iterated logarithms") {
  CHECK(iter_log(5.0, 0) == TowerReal(5.0));
  CHECK(to_float(iter_log(std::exp(std::exp(1.0)), 2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(code_of([] { iter_log(0.5, 1); }) == ErrorCode::Domain);
  CHECK(to_float(iter_log(2.0, -1)) == doctest::Approx(std::exp(2.0)));
}

TEST_CASE("iterated exponentials") {
  CHECK(std::abs(to_float(iter_exp(1.0, 3)) - 3814279.10) < 0.5);
  CHECK(iter_exp(3.0, 0) == TowerReal(3.0));
  CHECK(to_float(iter_exp(2.0, 1)) == doctest::Approx(7.389056099).epsilon(1e-10));
  const TowerReal t = iter_exp(40.0, 2);
  CHECK(t.level() == 2);
  CHECK(t.mantissa() == 40.0);
}

TEST_CASE("power, product, comparison, sum") {
  const TowerReal e10 = TowerReal::exp_of(10.0);
  CHECK(log_to_float(t_pow(e10, 2.0)) == doctest::Approx(20.0).epsilon(1e-14));
  const TowerReal x(123.25);
  CHECK(t_pow(x, 1.0) == x);
  const TowerReal half = t_pow(TowerReal::from_parts(1, 50.0), 0.5);
  CHECK(log_to_float(half) == doctest::Approx(25.0).epsilon(1e-14));
  const TowerReal e300 = TowerReal::exp_of(300.0);
  CHECK(log_to_float(t_mul(e300, e300)) == doctest::Approx(600.0).epsilon(1e-14));
  CHECK(t_cmp(TowerReal::exp_of(50.0), TowerReal(1e20)) > 0);
  const TowerReal e100 = TowerReal::exp_of(100.0);
  CHECK(t_add(e100, 1.0) == e100);
  CHECK(code_of([] { to_float(iter_exp(40.0, 2)); }) == ErrorCode::Overflow);
}

TEST_CASE("roundtrip iter_exp / iter_log") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(std::log(2.0), std::log(1e6));
  for (int i = 0; i < 200; ++i) {
    const double x = std::exp(u(rng));
    for (int k = 0; k <= 4; ++k) {
      const double back = to_float(iter_log(iter_exp(x, k), k));
      CHECK(std::abs(back - x) / x < 1e-9);
    }
  }
}

TEST_CASE("agreement with plain floats") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-20.0, 300.0);
  for (int i = 0; i < 500; ++i) {
    const double a = std::exp(u(rng) / 2.1);
    const double b = std::exp(u(rng) / 2.1);
    CHECK(to_float(t_mul(a, b)) == doctest::Approx(a * b).epsilon(1e-12));
    CHECK(to_float(t_div(a, b)) == doctest::Approx(a / b).epsilon(1e-12));
    CHECK((t_cmp(a, b) < 0) == (a < b));
    if (std::log(a) * 0.7 < 690.0) {
      CHECK(to_float(t_pow(a, 0.7)) == doctest::Approx(std::pow(a, 0.7)).epsilon(1e-12));
    }
  }
}

TEST_CASE("monotonicity and normalization") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(1.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    double x = u(rng);
    double y = u(rng);
    if (x == y) {
      continue;
    }
    if (x > y) {
      std::swap(x, y);
    }
    for (int k = 0; k <= 4; ++k) {
      CHECK(t_cmp(iter_exp(x, k), iter_exp(y, k)) <= 0);
    }
    CHECK(t_cmp(iter_log(x, 1), iter_log(y, 1)) < 0);
    const TowerReal t = iter_exp(y, 3);
    CHECK(t.normalized() == t);
  }
}
