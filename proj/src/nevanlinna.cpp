#include "growthlab/nevanlinna.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "growthlab/errors.hpp"

namespace growthlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kStartNodes = 256;
constexpr int kMaxNodes = 1 << 20;
constexpr double kTol = 1e-10;
const double kNearSingular = std::log(1e-6);

// Signed log|f| (a = infinity) or -log|f - a| at a node, before clipping.
struct Sample {
  double raw;
  bool near_singular;
};

class ProximityIntegrand {
 public:
  ProximityIntegrand(const FunctionModel& model, double r, Target a)
      : model_(model), r_(r), a_(a), poles_(model.listed_poles()) {}

  Sample operator()(double theta) const {
    const Complex z = std::polar(r_, theta);
    Complex lf;
    try {
      lf = eval_log(model_, z);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Pole) {
        throw Error(ErrorCode::SingularNode, "quadrature node on a pole");
      }
      throw;
    }
    if (!a_) {
      if (!std::isfinite(lf.real()) && lf.real() > 0) {
        throw Error(ErrorCode::SingularNode, "infinite modulus at a quadrature node");
      }
      return {lf.real(), -lf.real() < kNearSingular && near_listed_pole(z)};
    }
    double log_gap;
    if (*a_ == Complex{}) {
      log_gap = lf.real();
    } else if (lf.real() > 30.0) {
      log_gap = (lf + std::log(Complex{1.0, 0.0} - *a_ * std::exp(-lf))).real();
    } else {
      log_gap = std::log(std::abs(std::exp(lf) - *a_));
    }
    if (std::isnan(log_gap) || (std::isinf(log_gap) && log_gap < 0)) {
      throw Error(ErrorCode::SingularNode, "a-point at a quadrature node");
    }
    return {-log_gap, log_gap < kNearSingular};
  }

  double value(double theta) const { return std::max(0.0, (*this)(theta).raw); }

 private:
  bool near_listed_pole(Complex z) const {
    for (const Complex& p : poles_) {
      if (std::abs(z - p) < 1e-2 * std::max(1.0, r_)) {
        return true;
      }
    }
    return false;
  }

  const FunctionModel& model_;
  double r_;
  Target a_;
  std::vector<Complex> poles_;
};

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

double adaptive(const ProximityIntegrand& g, double lo, double hi) {
  if (!(hi > lo)) {
    return 0.0;
  }
  auto f = [&](double t) { return g.value(t); };
  const double fa = f(lo);
  const double fb = f(hi);
  const double fm = f(0.5 * (lo + hi));
  const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, lo, hi, fa, fm, fb, whole, std::max(1e-15, 1e-13 * std::abs(whole)), 30);
}

// 8-point Gauss-Legendre on [lo, hi].
double gauss8(const ProximityIntegrand& g, double lo, double hi) {
  static constexpr double kX[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                   0.9602898564975363};
  static constexpr double kW[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                   0.1012285362903763};
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    sum += kW[i] * (g.value(c - h * kX[i]) + g.value(c + h * kX[i]));
  }
  return sum * h;
}

// Cell whose integrand crosses zero: split at the crossing so the positive
// part is smooth.
double kink_cell(const ProximityIntegrand& g, double lo, double hi, double raw_lo) {
  double a = lo;
  double b = hi;
  for (int i = 0; i < 60 && b - a > 1e-16 * (1.0 + std::abs(a)); ++i) {
    const double m = 0.5 * (a + b);
    ((g(m).raw > 0.0) == (raw_lo > 0.0) ? a : b) = m;
  }
  const double cut = 0.5 * (a + b);
  return raw_lo > 0.0 ? gauss8(g, lo, cut) : gauss8(g, cut, hi);
}

}  // namespace

double proximity(const FunctionModel& model, double r, Target a) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error(ErrorCode::Domain, "proximity needs a finite r > 0");
  }
  const ProximityIntegrand g(model, r, a);
  int n = kStartNodes;
  std::vector<Sample> nodes(n);
  for (int j = 0; j < n; ++j) {
    nodes[j] = g(kTwoPi * j / n);
  }
  auto estimate = [&]() {
    const double h = kTwoPi / n;
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      const Sample& s0 = nodes[j];
      const Sample& s1 = nodes[(j + 1) % n];
      const double lo = h * j;
      if (s0.near_singular || s1.near_singular) {
        total += adaptive(g, lo, lo + h);
      } else if ((s0.raw > 0.0) != (s1.raw > 0.0)) {
        total += kink_cell(g, lo, lo + h, s0.raw);
      } else if (s0.raw > 0.0) {
        total += gauss8(g, lo, lo + h);
      }
    }
    return total / kTwoPi;
  };
  double prev = estimate();
  while (n < kMaxNodes) {
    std::vector<Sample> refined(2 * n);
    for (int j = 0; j < n; ++j) {
      refined[2 * j] = nodes[j];
      refined[2 * j + 1] = g(kTwoPi * (2 * j + 1) / (2.0 * n));
    }
    nodes = std::move(refined);
    n *= 2;
    const double cur = estimate();
    const double diff = std::abs(cur - prev);
    if (diff < kTol || diff < kTol * std::abs(cur)) {
      return std::max(0.0, cur);
    }
    prev = cur;
  }
  throw Error(ErrorCode::NonConvergent, "trapezoidal doubling reached its node cap");
}

namespace {

long count_nudged(const FunctionModel& model, double t, Target a) {
  try {
    return count_in_disk(model, t, a);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::OnCircle) {
      throw;
    }
    return count_in_disk(model, t * (1.0 + 1e-9), a);
  }
}

// Jump search for models without exact a-point enumeration.
double counting_by_jumps(const FunctionModel& model, double r, Target a) {
  const double t_min = 1e-9 * std::min(1.0, r);
  const long n0 = count_nudged(model, t_min, a);
  double total = static_cast<double>(n0) * std::log(r);
  std::function<void(double, long, double, long)> resolve = [&](double lo, long nlo, double hi,
                                                                long nhi) {
    if (nhi == nlo) {
      return;
    }
    if (hi / lo - 1.0 < 1e-12) {
      total += static_cast<double>(nhi - nlo) * std::log(r / std::sqrt(lo * hi));
      return;
    }
    const double mid = std::sqrt(lo * hi);
    const long nm = count_nudged(model, mid, a);
    resolve(lo, nlo, mid, nm);
    resolve(mid, nm, hi, nhi);
  };
  constexpr int kScan = 64;
  double lo = t_min;
  long nlo = n0;
  for (int i = 1; i <= kScan; ++i) {
    const double hi = t_min * std::pow(r / t_min, static_cast<double>(i) / kScan);
    const long nhi = count_nudged(model, hi, a);
    resolve(lo, nlo, hi, nhi);
    lo = hi;
    nlo = nhi;
  }
  return total;
}

}  // namespace

double counting(const FunctionModel& model, double r, Target a, bool distinct) {
  if (!(r > 0.0)) {
    throw Error(ErrorCode::Domain, "counting needs r > 0");
  }
  if (!a && model.is_entire()) {
    return 0.0;
  }
  if (auto pts = enumerate_a_points(model, a)) {
    double total = 0.0;
    for (const APoint& pt : *pts) {
      const double m = std::abs(pt.z);
      const double weight = distinct ? 1.0 : pt.multiplicity;
      if (m < 1e-14) {
        total += weight * std::log(r);
      } else if (m <= r) {
        total += weight * std::log(r / m);
      }
    }
    return total;
  }
  if (distinct) {
    throw Error(ErrorCode::Unsupported, "distinct counting needs an enumerable model");
  }
  return counting_by_jumps(model, r, a);
}

double characteristic(const FunctionModel& model, double r) {
  return nevanlinna(model, r).characteristic;
}

NevanlinnaBreakdown nevanlinna(const FunctionModel& model, double r, Target a, bool distinct) {
  NevanlinnaBreakdown out;
  out.r = r;
  out.a = a;
  out.proximity = proximity(model, r, a);
  out.counting = (!a && model.is_entire()) ? 0.0 : counting(model, r, a, distinct);
  out.characteristic = out.proximity + out.counting;
  return out;
}

}  // namespace growthlab
