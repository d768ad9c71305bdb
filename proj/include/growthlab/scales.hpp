#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "growthlab/models.hpp"
#include "growthlab/tower.hpp"

namespace growthlab {

/// alpha(x) = exp^[m](c * (log^[n] x)^a)
struct IteratedScale {
  int m = 1;
  int n = 0;
  double a = 1.0;
  double c = 1.0;
};

/// beta(x) = exp(x * (2 + sin(log x)))
struct SinLogScale {};

/// M_f as a scale.
struct DerivedMaxMod {
  ModelPtr model;
};

/// T_f as a scale.
struct DerivedCharacteristic {
  ModelPtr model;
};

/// Monotone piecewise-cubic (Fritsch-Carlson) through strictly increasing
/// samples, extended linearly past the last one.
struct TabulatedMonotone {
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {
struct InverseTable;
}

/// Positive continuous function increasing to +infinity on [x0, infinity).
class GrowthScale {
 public:
  using Node =
      std::variant<IteratedScale, SinLogScale, DerivedMaxMod, DerivedCharacteristic, TabulatedMonotone>;

  static GrowthScale iterated(int m, int n, double a, double c);
  static GrowthScale exp() { return iterated(1, 0, 1.0, 1.0); }
  static GrowthScale sin_log();
  static GrowthScale max_modulus_of(FunctionModel model);
  static GrowthScale characteristic_of(FunctionModel model);
  static GrowthScale tabulated(std::vector<double> x, std::vector<double> y);

  /// Same scale with a different domain start.
  GrowthScale with_domain_start(double x0) const;

  const Node& node() const noexcept { return node_; }
  const TowerReal& domain_start() const noexcept { return x0_; }
  bool has_custom_domain_start() const noexcept { return custom_x0_; }

  /// Iterated-family equivalent of a derived scale, when one is known in
  /// closed form (M of exppow/exptower/monomials, T of exppow and of unit
  /// monomials).
  const std::optional<IteratedScale>& closed_form() const noexcept { return closed_; }

  std::string literal() const;

  /// Shared lookup table used by numeric inversion of derived scales.
  detail::InverseTable& inverse_table() const { return *table_; }

 private:
  explicit GrowthScale(Node node, double x0);

  Node node_;
  TowerReal x0_;
  bool custom_x0_ = false;
  std::optional<IteratedScale> closed_;
  std::shared_ptr<detail::InverseTable> table_;
};

/// Auto uses closed forms wherever they exist; Numeric forces the generic
/// route (sampling / quadrature for derived scales, bisection for inverses).
enum class ScaleMethod { Auto, Numeric };

/// Throws BelowDomain for x < x0 and NonLevelZero when a numeric derived
/// scale is asked at a radius beyond double range.
TowerReal scale_eval(const GrowthScale& scale, const TowerReal& x,
                     ScaleMethod method = ScaleMethod::Auto);

/// Throws BelowRange for y < scale(x0).
TowerReal scale_inverse(const GrowthScale& scale, const TowerReal& y,
                        ScaleMethod method = ScaleMethod::Auto);

/// alpha^{-1}(beta(r)).
TowerReal compose_inverse(const GrowthScale& alpha, const GrowthScale& beta, const TowerReal& r);

/// log applied k times where only the final value may be non-positive.
TowerReal log_chain(const TowerReal& x, int k);

struct RatioParts {
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio() const { return numerator / denominator; }
};

/// (log^[p] alpha^{-1} beta(r), log^[q] r) reduced to plain doubles.
RatioParts composed_ratio(const GrowthScale& alpha, const GrowthScale& beta, const TowerReal& r,
                          int p, int q);

}  // namespace growthlab
