#include "growthlab/tower.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "growthlab/errors.hpp"

namespace growthlab {

const double TowerReal::kLogBound = std::log(TowerReal::kBound);

namespace {

// Relative contribution below which a summand is dropped.
const double kLogAbsorb = std::log(1e-16);

[[noreturn]] void overflow(const char* what) { throw Error(ErrorCode::Overflow, what); }

bool is_zero(const TowerReal& x) { return x.level() == 0 && x.mantissa() == 0.0; }
bool is_negative(const TowerReal& x) { return x.level() == 0 && x.mantissa() < 0.0; }

// Adds a plain real `small` to a value known to exceed kBound.
TowerReal add_to_huge(const TowerReal& big, double small) {
  if (small == 0.0 || big.level() >= 2) {
    return big;
  }
  const double lb = big.mantissa();
  if (small > 0.0) {
    const double d = std::log(small) - lb;
    if (d < kLogAbsorb) {
      return big;
    }
    return TowerReal::from_parts(1, lb + std::log1p(std::exp(d)));
  }
  const double ratio = small * std::exp(-lb);
  if (std::abs(ratio) < 1e-16) {
    return big;
  }
  return TowerReal::from_parts(1, lb + std::log1p(ratio));
}

}  // namespace

TowerReal::TowerReal(double value) {
  *this = from_parts(0, value);
}

TowerReal TowerReal::from_parts(int level, double mantissa) {
  if (!std::isfinite(mantissa)) {
    overflow("non-finite mantissa");
  }
  if (level < 0) {
    throw Error(ErrorCode::InvalidArgument, "negative tower level");
  }
  for (;;) {
    if (level == 0) {
      if (mantissa > kBound) {
        level = 1;
        mantissa = std::log(mantissa);
        continue;
      }
      if (mantissa < -kBound) {
        overflow("negative value beyond the plain range");
      }
      break;
    }
    if (mantissa > kBound) {
      ++level;
      mantissa = std::log(mantissa);
      continue;
    }
    if (mantissa <= kLogBound) {
      --level;
      mantissa = std::exp(mantissa);
      continue;
    }
    break;
  }
  TowerReal out;
  out.level_ = level;
  out.mantissa_ = mantissa;
  return out;
}

TowerReal TowerReal::exp_of(double x) { return from_parts(1, x); }

TowerReal iter_exp(const TowerReal& x, int k) {
  if (k < 0) {
    return iter_log(x, -k);
  }
  return TowerReal::from_parts(x.level() + k, x.mantissa());
}

TowerReal iter_log(const TowerReal& x, int k) {
  if (k < 0) {
    return iter_exp(x, -k);
  }
  int level = x.level();
  double m = x.mantissa();
  for (int i = 0; i < k; ++i) {
    if (level >= 1) {
      --level;
      continue;
    }
    if (m <= 0.0) {
      throw Error(ErrorCode::Domain, "iterated log of a non-positive value");
    }
    m = std::log(m);
    if (m <= 0.0) {
      throw Error(ErrorCode::Domain, "iterated log reaches a non-positive intermediate");
    }
  }
  return TowerReal::from_parts(level, m);
}

TowerReal t_log(const TowerReal& x) {
  if (x.level() >= 1) {
    return TowerReal::from_parts(x.level() - 1, x.mantissa());
  }
  if (x.mantissa() <= 0.0) {
    throw Error(ErrorCode::Domain, "log of a non-positive value");
  }
  return TowerReal(std::log(x.mantissa()));
}

double log_to_float(const TowerReal& x) { return to_float(t_log(x)); }

TowerReal t_add(const TowerReal& x, const TowerReal& y) {
  if (x.level() == 0 && y.level() == 0) {
    return TowerReal(x.mantissa() + y.mantissa());
  }
  const bool x_big = t_cmp(x, y) != std::strong_ordering::less;
  const TowerReal& big = x_big ? x : y;
  const TowerReal& small = x_big ? y : x;
  if (small.level() == 0) {
    return add_to_huge(big, small.mantissa());
  }
  // Both exceed kBound.
  if (big == small) {
    return t_mul(big, TowerReal(2.0));
  }
  double lb = 0.0;
  double ls = 0.0;
  try {
    lb = log_to_float(big);
    ls = log_to_float(small);
  } catch (const Error&) {
    return big;
  }
  const double d = ls - lb;
  if (d < kLogAbsorb) {
    return big;
  }
  return TowerReal::from_parts(1, lb + std::log1p(std::exp(d)));
}

TowerReal t_mul(const TowerReal& x, const TowerReal& y) {
  if (x.level() == 0 && y.level() == 0) {
    return TowerReal(x.mantissa() * y.mantissa());
  }
  if (is_zero(x) || is_zero(y)) {
    return TowerReal(0.0);
  }
  if (is_negative(x) || is_negative(y)) {
    throw Error(ErrorCode::Domain, "product of a negative value with a huge value");
  }
  return iter_exp(t_add(t_log(x), t_log(y)), 1);
}

TowerReal t_div(const TowerReal& x, const TowerReal& y) {
  if (is_zero(y)) {
    throw Error(ErrorCode::Domain, "division by zero");
  }
  if (is_negative(y)) {
    throw Error(ErrorCode::Domain, "division by a negative value");
  }
  if (x.level() == 0 && y.level() == 0) {
    const double q = x.mantissa() / y.mantissa();
    if (std::isfinite(q)) {
      return TowerReal(q);
    }
  }
  if (is_zero(x)) {
    return TowerReal(0.0);
  }
  if (is_negative(x)) {
    const double ly = log_to_float(y);
    return TowerReal(-std::exp(std::log(-x.mantissa()) - ly));
  }
  const TowerReal lx = t_log(x);
  const TowerReal ly = t_log(y);
  if (ly.level() == 0) {
    return iter_exp(t_add(lx, TowerReal(-ly.mantissa())), 1);
  }
  if (lx.level() == 0) {
    // |log x| <= kBound < log y: quotient below double range.
    return TowerReal(0.0);
  }
  if (lx == ly) {
    return TowerReal(1.0);
  }
  double lxf = 0.0;
  double lyf = 0.0;
  try {
    lxf = to_float(lx);
    lyf = to_float(ly);
  } catch (const Error&) {
    overflow("quotient of two values beyond one exponential level");
  }
  return TowerReal::exp_of(lxf - lyf);
}

TowerReal t_pow(const TowerReal& x, double a) {
  if (x.level() == 0 && x.mantissa() <= 0.0) {
    throw Error(ErrorCode::Domain, "power of a non-positive value");
  }
  if (!std::isfinite(a)) {
    throw Error(ErrorCode::InvalidArgument, "non-finite exponent");
  }
  if (a == 0.0) {
    return TowerReal(1.0);
  }
  if (a == 1.0) {
    return x;
  }
  if (x.level() == 0) {
    const double p = std::pow(x.mantissa(), a);
    if (std::isfinite(p) && p <= TowerReal::kBound && p > 0.0) {
      return TowerReal(p);
    }
  }
  const TowerReal lx = t_log(x);
  if (a > 0.0) {
    return iter_exp(t_mul(lx, TowerReal(a)), 1);
  }
  if (lx.level() >= 1) {
    return TowerReal(0.0);
  }
  return TowerReal::exp_of(a * lx.mantissa());
}

std::strong_ordering t_cmp(const TowerReal& x, const TowerReal& y) {
  if (x.level() != y.level()) {
    return x.level() <=> y.level();
  }
  const double a = x.mantissa();
  const double b = y.mantissa();
  if (a < b) {
    return std::strong_ordering::less;
  }
  if (a > b) {
    return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

double to_float(const TowerReal& x) {
  if (x.level() == 0) {
    return x.mantissa();
  }
  if (x.level() == 1) {
    const double v = std::exp(x.mantissa());
    if (std::isfinite(v)) {
      return v;
    }
  }
  overflow("value exceeds double range");
}

std::ostream& operator<<(std::ostream& os, const TowerReal& x) {
  if (x.level() == 0) {
    return os << x.mantissa();
  }
  std::ostringstream s;
  s.precision(os.precision());
  s << "exp^[" << x.level() << "](" << x.mantissa() << ")";
  return os << s.str();
}

}  // namespace growthlab
