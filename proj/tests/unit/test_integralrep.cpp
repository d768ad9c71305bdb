#include <doctest.h>

#include <cmath>

#include "growthlab/errors.hpp"
#include "growthlab/integralrep.hpp"

using namespace growthlab;

namespace {

// F = e^{c r} at (p,q) = (2,1): integral of e^{(c-k-1) r}, critical k = c - 1.
IntegralSpec exp_family(double c) {
  return {GrowthScale::exp(), GrowthScale::iterated(2, 0, 1.0, c), 2, 1, 1.0};
}

// F = r^c at (p,q) = (2,2): integral of r^{c-k-1}, critical k = c.
IntegralSpec power_family(double c) {
  return {GrowthScale::exp(), GrowthScale::iterated(1, 0, c, 1.0), 2, 2, 1.0};
}

const GridSpec kGrid = default_integral_grid();

}  // namespace

TEST_CASE("integrand log") {
  CHECK(integrand_log(exp_family(2.0), 0.0, 10.0) == doctest::Approx(10.0).epsilon(1e-13));
  CHECK(integrand_log(power_family(3.0), 3.0, std::exp(5.0)) ==
        doctest::Approx(-5.0).epsilon(1e-12));
  for (double r : {2.0, 7.0, 30.0}) {
    CHECK(std::abs(integrand_log(exp_family(1.0), 0.0, r)) < 1e-12);
  }
}

TEST_CASE("classification examples") {
  CHECK(classify(exp_family(2.0), 0.5, kGrid).verdict == Verdict::Diverges);
  const auto c = classify(exp_family(2.0), 1.5, kGrid);
  CHECK(c.verdict == Verdict::Converges);
  CHECK(c.tail_bound.has_value());
  CHECK(classify(power_family(3.0), 3.5, kGrid).verdict == Verdict::Converges);
  CHECK(classify(power_family(3.0), 2.5, kGrid).verdict == Verdict::Diverges);
  CHECK(classify(power_family(3.0), 3.0, kGrid).verdict == Verdict::Indeterminate);
}

TEST_CASE("calculus oracle on both closed-form families") {
  for (double c : {1.0, 2.0, 3.0}) {
    for (int family = 0; family < 2; ++family) {
      const IntegralSpec spec = family == 0 ? exp_family(c) : power_family(c);
      const double k_star = family == 0 ? c - 1.0 : c;
      for (double k = k_star - 3.0; k <= k_star + 3.0 + 1e-9; k += 0.025) {
        CAPTURE(c);
        CAPTURE(family);
        CAPTURE(k);
        const Verdict v = classify(spec, k, kGrid).verdict;
        if (k <= k_star - 0.1) {
          CHECK(v == Verdict::Diverges);
        } else if (k >= k_star + 0.1) {
          CHECK(v == Verdict::Converges);
        } else if (v == Verdict::Indeterminate) {
          CHECK(std::abs(k - k_star) < 0.1);
        }
      }
    }
  }
}

TEST_CASE("transition brackets") {
  const auto poly = transition(power_family(3.0), {1.0, 6.0}, 0.05, kGrid);
  CHECK(poly.k_lo < 3.0);
  CHECK(poly.k_hi > 3.0);
  CHECK(poly.k_hi - poly.k_lo <= 0.1 + 1e-9);
  const auto gap = transition(exp_family(2.0), {0.0, 3.0}, 0.05, kGrid);
  CHECK(gap.k_lo < 1.0);
  CHECK(gap.k_hi > 1.0);
  CHECK(gap.k_hi - gap.k_lo <= 0.05);
  CHECK_FALSE(gap.indeterminate_limited);
  for (const auto* t : {&poly, &gap}) {
    // verdicts are monotone in k
    int stage = 0;
    for (const auto& row : t->verdict_table) {
      const int s = row.verdict == Verdict::Diverges ? 0 : row.verdict == Verdict::Indeterminate ? 1 : 2;
      CHECK(s >= stage);
      stage = s;
    }
  }
  CHECK_THROWS_AS(transition(power_family(3.0), {4.0, 6.0}, 0.05, kGrid), Error);
}

TEST_CASE("sine-log transition sits at k = 1") {
  // Oracle: the integrand r(2 + sin log r) / r^{k+1} integrated by brute
  // force over [e, e^X] grows without bound for k < 1 and settles for k > 1.
  auto partial = [](double k, double x_max) {
    double total = 0.0;
    const int n = 200000;
    const double h = (x_max - 1.0) / n;
    for (int i = 0; i <= n; ++i) {
      const double x = 1.0 + i * h;  // x = log r, dr = r dx
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      total += w * h * std::exp(x * (1.0 - k)) * (2.0 + std::sin(x));
    }
    return total;
  };
  CHECK(partial(0.9, 200.0) > 10.0 * partial(0.9, 100.0));
  CHECK(partial(1.1, 400.0) - partial(1.1, 200.0) < 1e-6);
  const IntegralSpec spec{GrowthScale::exp(), GrowthScale::sin_log(), 2, 2, 1.0};
  const auto t = transition(spec, {0.0, 3.0}, 0.05, default_integral_grid(true));
  CHECK(t.k_lo < 1.0);
  CHECK(t.k_hi > 1.0);
}

TEST_CASE("lemma ratio") {
  CHECK(lemma_ratio(power_family(3.0), 3.5, kGrid) == LemmaBehavior::TendsToZero);
  CHECK(lemma_ratio(exp_family(2.0), 1.5, kGrid) == LemmaBehavior::Unbounded);
  CHECK(classify(exp_family(2.0), 1.5, kGrid).verdict == Verdict::Converges);
  CHECK(lemma_ratio(exp_family(2.0), 2.0, kGrid) == LemmaBehavior::BoundedAway);
  for (double c : {1.0, 2.0, 3.0}) {
    for (double k : {c + 0.5, c + 1.0}) {
      CHECK(classify(power_family(c), k, kGrid).verdict == Verdict::Converges);
      CHECK(lemma_ratio(power_family(c), k, kGrid) == LemmaBehavior::TendsToZero);
    }
  }
  const IntegralSpec osc{GrowthScale::exp(), GrowthScale::sin_log(), 1, 2, 1.0};
  CHECK(lemma_ratio(osc, 1.0, default_integral_grid(true)) != LemmaBehavior::TendsToZero);
}
