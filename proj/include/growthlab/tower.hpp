#pragma once

#include <compare>
#include <iosfwd>

namespace growthlab {

/// Extended-range positive real stored as exp applied `level` times to
/// `mantissa`.
///
/// Normal form: level 0 with |mantissa| <= kBound, or level >= 1 with
/// mantissa in (ln kBound, kBound]. Every level >= 1 value therefore exceeds
/// kBound and is strictly positive. All logarithms are natural.
class TowerReal {
 public:
  static constexpr double kBound = 1e15;
  static const double kLogBound;

  constexpr TowerReal() = default;
  /// Plain real. Throws Overflow for non-finite or huge negative input.
  TowerReal(double value);  // NOLINT(google-explicit-constructor)

  /// Builds exp^[level](mantissa) and normalizes it.
  static TowerReal from_parts(int level, double mantissa);
  /// e^x.
  static TowerReal exp_of(double x);

  int level() const noexcept { return level_; }
  double mantissa() const noexcept { return mantissa_; }

  bool is_plain() const noexcept { return level_ == 0; }

  /// Normalization is idempotent; exposed for the uniqueness property.
  TowerReal normalized() const { return from_parts(level_, mantissa_); }

 private:
  int level_ = 0;
  double mantissa_ = 0.0;
};

/// k-fold natural logarithm. Every intermediate value (including the result)
/// must be strictly positive, else Domain. k < 0 delegates to iter_exp(x, -k).
TowerReal iter_log(const TowerReal& x, int k);

/// k-fold exponential; exact level arithmetic once the argument is large.
TowerReal iter_exp(const TowerReal& x, int k);

/// Single natural log of a positive value. Unlike iter_log the result may be
/// negative or zero.
TowerReal t_log(const TowerReal& x);

/// x^a for x > 0.
TowerReal t_pow(const TowerReal& x, double a);

TowerReal t_mul(const TowerReal& x, const TowerReal& y);

/// x / y. Throws Overflow when the quotient cannot be formed (both operands
/// beyond one level of exponentiation with no dominant side).
TowerReal t_div(const TowerReal& x, const TowerReal& y);

/// Sum; a summand whose relative contribution is below 1e-16 is absorbed.
TowerReal t_add(const TowerReal& x, const TowerReal& y);

std::strong_ordering t_cmp(const TowerReal& x, const TowerReal& y);

/// Plain double, or Overflow when the magnitude exceeds double range.
double to_float(const TowerReal& x);

/// Natural log as a plain double (finite whenever x is at most level 1).
double log_to_float(const TowerReal& x);

inline bool operator==(const TowerReal& a, const TowerReal& b) {
  return a.level() == b.level() && a.mantissa() == b.mantissa();
}
inline std::strong_ordering operator<=>(const TowerReal& a, const TowerReal& b) {
  return t_cmp(a, b);
}

std::ostream& operator<<(std::ostream& os, const TowerReal& x);

}  // namespace growthlab
