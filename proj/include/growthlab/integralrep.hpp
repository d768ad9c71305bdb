#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "growthlab/indicators.hpp"
#include "growthlab/scales.hpp"

namespace growthlab {

/// Integrand of  int F(r) / [exp((log^[q-1] r)^A)]^(k+1) dr  with
/// F = log^[p-2] alpha^{-1}beta(r) (log^[-1] = exp).
struct IntegralSpec {
  GrowthScale alpha;
  GrowthScale beta;
  int p = 2;
  int q = 2;
  double A = 1.0;
};

enum class Verdict { Converges, Diverges, Indeterminate };

const char* verdict_name(Verdict v);

struct ConvergenceVerdict {
  double k = 0.0;
  Verdict verdict = Verdict::Indeterminate;
  /// Least-squares slope of the log-integrand against log r over the tail.
  double decay_slope = 0.0;
  /// Numerically summed integral beyond the last grid radius, present when
  /// superlinear decay was certified.
  std::optional<double> tail_bound;
};

struct TransitionResult {
  double k_lo = 0.0;
  double k_hi = 0.0;
  /// Bracket wider than the requested tolerance because Indeterminate
  /// verdicts fill the gap.
  bool indeterminate_limited = false;
  std::vector<ConvergenceVerdict> verdict_table;  // ascending k
};

enum class LemmaBehavior { TendsToZero, BoundedAway, Unbounded, Oscillatory };

const char* lemma_behavior_name(LemmaBehavior b);

/// Dead band around the critical log-decay rate of 1/r.
inline constexpr double kDeadBand = 0.05;

/// ln F(r) - (k+1) (log^[q-1] r)^A, evaluated in the log domain.
double integrand_log(const IntegralSpec& spec, double k, const TowerReal& r);

/// Default classification grid: r_j = exp(2 + 0.5 j), 64 points.
GridSpec default_integral_grid(bool oscillating = false);

ConvergenceVerdict classify(const IntegralSpec& spec, double k, const GridSpec& grid);

/// Brackets the critical exponent between a Diverges and a Converges verdict.
/// Throws BadBracket when the endpoints do not classify that way.
TransitionResult transition(const IntegralSpec& spec, std::pair<double, double> k_range,
                            double tol, const GridSpec& grid);

/// Tail behavior of ln F(r) - k (log^[q-1] r)^A, the log of
/// F / exp((log^[q-1] r)^A)^k.
LemmaBehavior lemma_ratio(const IntegralSpec& spec, double k, const GridSpec& grid);

}  // namespace growthlab
