#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "growthlab/tower.hpp"

namespace growthlab {

using Complex = std::complex<double>;

/// The value whose preimages are counted; std::nullopt stands for infinity
/// (poles).
using Target = std::optional<Complex>;

class FunctionModel;
using ModelPtr = std::shared_ptr<const FunctionModel>;

struct Polynomial {
  std::vector<Complex> coefficients;  // ascending degree, no trailing zeros
};

/// exp(c * z^n)
struct ExpPower {
  double c = 1.0;
  int n = 1;
};

/// exp^[k](z)
struct ExpTower {
  int k = 1;
};

/// scale * prod(z - zeros) / prod(z - poles)
struct FactoredRational {
  std::vector<Complex> zeros;
  std::vector<Complex> poles;
  Complex scale{1.0, 0.0};
};

struct Sum {
  ModelPtr left;
  ModelPtr right;
};

struct Product {
  ModelPtr left;
  ModelPtr right;
};

/// Immutable symbolic entire or meromorphic function.
class FunctionModel {
 public:
  using Node = std::variant<Polynomial, ExpPower, ExpTower, FactoredRational, Sum, Product>;

  static FunctionModel polynomial(std::vector<Complex> coefficients);
  static FunctionModel exp_power(double c, int n);
  static FunctionModel exp_tower(int k);
  /// Throws InvalidArgument when a zero coincides with a pole or scale is 0.
  static FunctionModel rational(std::vector<Complex> zeros, std::vector<Complex> poles,
                                Complex scale = {1.0, 0.0});
  static FunctionModel sum(FunctionModel left, FunctionModel right);
  static FunctionModel product(FunctionModel left, FunctionModel right);

  const Node& node() const noexcept { return node_; }

  bool is_entire() const;
  /// Poles declared anywhere in the expression tree (a superset of the
  /// actual poles; products may cancel some).
  std::vector<Complex> listed_poles() const;
  /// Canonical literal, parseable by parse_model.
  std::string literal() const;

 private:
  explicit FunctionModel(Node node) : node_(std::move(node)) {}
  Node node_;
};

/// Throws Pole when z lies within 1e-14 of a listed pole.
Complex eval(const FunctionModel& model, Complex z);

/// A branch of log f(z). The real part is log|f(z)| and stays finite where
/// |f| itself would overflow; the imaginary part is only meaningful modulo 2pi.
Complex eval_log(const FunctionModel& model, Complex z);

enum class MaxModMethod { Auto, Sampling };

/// M_f(r) = max over |z| = r of |f(z)|. Closed forms for ExpPower and
/// ExpTower (any tower radius); everything else samples 4096 nodes on the
/// circle and refines the best one by golden-section search.
TowerReal max_modulus(const FunctionModel& model, const TowerReal& r,
                      MaxModMethod method = MaxModMethod::Auto);

struct APoint {
  Complex z;
  int multiplicity = 1;
};

/// All a-points with multiplicity when the model admits exact enumeration:
/// polynomials, factored rationals, and poles of any model. Returns
/// std::nullopt for transcendental a-point sets.
std::optional<std::vector<APoint>> enumerate_a_points(const FunctionModel& model, Target a);

/// n_f(r, a): a-points in |z| <= r with multiplicity (or distinct ones when
/// `distinct`). Throws OnCircle when an a-point lies on |z| = r.
long count_in_disk(const FunctionModel& model, double r, Target a, bool distinct = false);

/// Winding number of f - a along |z - center| = radius, by adaptive argument
/// tracking. Throws OnCircle / NonIntegralWinding.
long winding_number(const FunctionModel& model, Target a, Complex center, double radius);

}  // namespace growthlab
