#include "growthlab/models.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "growthlab/errors.hpp"
#include "text.hpp"

namespace growthlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPoleEps = 1e-14;
constexpr int kMaxModNodes = 4096;

std::vector<Complex> trimmed(std::vector<Complex> c) {
  while (!c.empty() && c.back() == Complex{}) {
    c.pop_back();
  }
  return c;
}

Complex horner(const std::vector<Complex>& c, Complex z) {
  Complex acc{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = acc * z + *it;
  }
  return acc;
}

void check_pole(const FactoredRational& f, Complex z) {
  for (const Complex& p : f.poles) {
    if (std::abs(z - p) < kPoleEps) {
      throw Error(ErrorCode::Pole, "evaluation at a pole");
    }
  }
}

// log(exp(a) + exp(b)) on complex logs.
Complex log_sum(Complex a, Complex b) {
  if (std::isinf(a.real()) && a.real() < 0) {
    return b;
  }
  if (std::isinf(b.real()) && b.real() < 0) {
    return a;
  }
  if (a.real() < b.real()) {
    std::swap(a, b);
  }
  return a + std::log(Complex{1.0, 0.0} + std::exp(b - a));
}

// Polynomial coefficient product of (z - r) factors, ascending.
std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots, Complex lead) {
  std::vector<Complex> c{lead};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  return c;
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
  const std::size_t d = coeffs.size() - 1;
  std::vector<Complex> roots;
  if (d == 1) {
    roots.push_back(-coeffs[0] / coeffs[1]);
    return roots;
  }
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                                      static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    if (i > 0) {
      companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    }
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) =
        -coeffs[i] / coeffs[d];
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  const auto& ev = solver.eigenvalues();
  std::vector<Complex> deriv(d);
  for (std::size_t i = 1; i <= d; ++i) {
    deriv[i - 1] = coeffs[i] * static_cast<double>(i);
  }
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    Complex z = ev[i];
    // Newton polish; kept only while the residual shrinks.
    for (int step = 0; step < 3; ++step) {
      const Complex p = horner(coeffs, z);
      const Complex dp = horner(deriv, z);
      if (dp == Complex{}) {
        break;
      }
      const Complex cand = z - p / dp;
      if (!(std::abs(horner(coeffs, cand)) < std::abs(p))) {
        break;
      }
      z = cand;
    }
    roots.push_back(z);
  }
  return roots;
}

// Groups numerically coincident roots; the center is the cluster mean.
std::vector<APoint> cluster(std::vector<Complex> pts) {
  std::vector<APoint> out;
  std::vector<int> count;
  std::vector<Complex> sum;
  for (const Complex& z : pts) {
    bool merged = false;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double tol = 1e-5 * std::max(1.0, std::abs(out[i].z));
      if (std::abs(z - out[i].z) <= tol) {
        ++count[i];
        sum[i] += z;
        out[i].z = sum[i] / static_cast<double>(count[i]);
        merged = true;
        break;
      }
    }
    if (!merged) {
      out.push_back({z, 1});
      count.push_back(1);
      sum.push_back(z);
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].multiplicity = count[i];
  }
  std::sort(out.begin(), out.end(), [](const APoint& a, const APoint& b) {
    if (std::abs(a.z) != std::abs(b.z)) {
      return std::abs(a.z) < std::abs(b.z);
    }
    return std::arg(a.z) < std::arg(b.z);
  });
  return out;
}

std::vector<APoint> roots_of(std::vector<Complex> coeffs) {
  coeffs = trimmed(std::move(coeffs));
  if (coeffs.empty()) {
    throw Error(ErrorCode::Domain, "model is identically equal to the target value");
  }
  if (coeffs.size() == 1) {
    return {};
  }
  return cluster(polynomial_roots(coeffs));
}

double on_circle_tol(double r) { return 1e-12 * std::max(1.0, r); }

void dedupe(std::vector<Complex>& v) {
  std::vector<Complex> out;
  for (const Complex& z : v) {
    if (std::none_of(out.begin(), out.end(), [&](const Complex& w) { return w == z; })) {
      out.push_back(z);
    }
  }
  v = std::move(out);
}

}  // namespace

// ---------------------------------------------------------------------------

FunctionModel FunctionModel::polynomial(std::vector<Complex> coefficients) {
  return FunctionModel(Polynomial{trimmed(std::move(coefficients))});
}

FunctionModel FunctionModel::exp_power(double c, int n) {
  if (!(c > 0.0) || n < 1) {
    throw Error(ErrorCode::InvalidArgument, "exppow requires c > 0 and n >= 1");
  }
  return FunctionModel(ExpPower{c, n});
}

FunctionModel FunctionModel::exp_tower(int k) {
  if (k < 1) {
    throw Error(ErrorCode::InvalidArgument, "exptower requires k >= 1");
  }
  return FunctionModel(ExpTower{k});
}

FunctionModel FunctionModel::rational(std::vector<Complex> zeros, std::vector<Complex> poles,
                                      Complex scale) {
  if (scale == Complex{}) {
    throw Error(ErrorCode::InvalidArgument, "rational scale must be non-zero");
  }
  for (const Complex& z : zeros) {
    for (const Complex& p : poles) {
      if (z == p) {
        throw Error(ErrorCode::InvalidArgument, "zero and pole lists must be disjoint");
      }
    }
  }
  return FunctionModel(FactoredRational{std::move(zeros), std::move(poles), scale});
}

FunctionModel FunctionModel::sum(FunctionModel left, FunctionModel right) {
  return FunctionModel(Sum{std::make_shared<const FunctionModel>(std::move(left)),
                           std::make_shared<const FunctionModel>(std::move(right))});
}

FunctionModel FunctionModel::product(FunctionModel left, FunctionModel right) {
  return FunctionModel(Product{std::make_shared<const FunctionModel>(std::move(left)),
                               std::make_shared<const FunctionModel>(std::move(right))});
}

bool FunctionModel::is_entire() const {
  if (const auto* f = std::get_if<FactoredRational>(&node_)) {
    return f->poles.empty();
  }
  if (const auto* s = std::get_if<Sum>(&node_)) {
    return s->left->is_entire() && s->right->is_entire();
  }
  if (const auto* p = std::get_if<Product>(&node_)) {
    return p->left->is_entire() && p->right->is_entire();
  }
  return true;
}

std::vector<Complex> FunctionModel::listed_poles() const {
  std::vector<Complex> out;
  if (const auto* f = std::get_if<FactoredRational>(&node_)) {
    out = f->poles;
  } else if (const auto* s = std::get_if<Sum>(&node_)) {
    out = s->left->listed_poles();
    auto r = s->right->listed_poles();
    out.insert(out.end(), r.begin(), r.end());
  } else if (const auto* p = std::get_if<Product>(&node_)) {
    out = p->left->listed_poles();
    auto r = p->right->listed_poles();
    out.insert(out.end(), r.begin(), r.end());
  }
  dedupe(out);
  return out;
}

std::string FunctionModel::literal() const {
  using detail::complex_literal;
  using detail::shortest;
  struct V {
    std::string operator()(const Polynomial& p) const {
      std::string s = "poly(";
      if (p.coefficients.empty()) {
        s += "0";
      }
      for (std::size_t i = 0; i < p.coefficients.size(); ++i) {
        s += (i ? "," : "") + complex_literal(p.coefficients[i]);
      }
      return s + ")";
    }
    std::string operator()(const ExpPower& e) const {
      return "exppow(c=" + shortest(e.c) + ",n=" + std::to_string(e.n) + ")";
    }
    std::string operator()(const ExpTower& e) const {
      return "exptower(k=" + std::to_string(e.k) + ")";
    }
    std::string operator()(const FactoredRational& f) const {
      auto list = [](const std::vector<Complex>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          s += (i ? "," : "") + complex_literal(v[i]);
        }
        return s + "]";
      };
      return "rat(zeros=" + list(f.zeros) + ";poles=" + list(f.poles) +
             ";scale=" + complex_literal(f.scale) + ")";
    }
    std::string operator()(const Sum& s) const {
      return "sum(" + s.left->literal() + "," + s.right->literal() + ")";
    }
    std::string operator()(const Product& p) const {
      return "prod(" + p.left->literal() + "," + p.right->literal() + ")";
    }
  };
  return std::visit(V{}, node_);
}

// ---------------------------------------------------------------------------

Complex eval(const FunctionModel& model, Complex z) {
  struct V {
    Complex z;
    Complex operator()(const Polynomial& p) const { return horner(p.coefficients, z); }
    Complex operator()(const ExpPower& e) const { return std::exp(e.c * std::pow(z, e.n)); }
    Complex operator()(const ExpTower& e) const {
      Complex w = z;
      for (int i = 0; i < e.k; ++i) {
        w = std::exp(w);
      }
      return w;
    }
    Complex operator()(const FactoredRational& f) const {
      check_pole(f, z);
      Complex num = f.scale;
      for (const Complex& a : f.zeros) {
        num *= z - a;
      }
      Complex den{1.0, 0.0};
      for (const Complex& b : f.poles) {
        den *= z - b;
      }
      return num / den;
    }
    Complex operator()(const Sum& s) const { return eval(*s.left, z) + eval(*s.right, z); }
    Complex operator()(const Product& p) const {
      return eval(*p.left, z) * eval(*p.right, z);
    }
  };
  return std::visit(V{z}, model.node());
}

Complex eval_log(const FunctionModel& model, Complex z) {
  struct V {
    Complex z;
    Complex operator()(const Polynomial& p) const { return std::log(horner(p.coefficients, z)); }
    Complex operator()(const ExpPower& e) const { return e.c * std::pow(z, e.n); }
    Complex operator()(const ExpTower& e) const {
      Complex w = z;
      for (int i = 0; i + 1 < e.k; ++i) {
        w = std::exp(w);
      }
      return w;
    }
    Complex operator()(const FactoredRational& f) const {
      check_pole(f, z);
      Complex acc = std::log(f.scale);
      for (const Complex& a : f.zeros) {
        acc += std::log(z - a);
      }
      for (const Complex& b : f.poles) {
        acc -= std::log(z - b);
      }
      return acc;
    }
    Complex operator()(const Sum& s) const {
      return log_sum(eval_log(*s.left, z), eval_log(*s.right, z));
    }
    Complex operator()(const Product& p) const {
      return eval_log(*p.left, z) + eval_log(*p.right, z);
    }
  };
  return std::visit(V{z}, model.node());
}

// ---------------------------------------------------------------------------

TowerReal max_modulus(const FunctionModel& model, const TowerReal& r, MaxModMethod method) {
  if (!(t_cmp(r, TowerReal(0.0)) == std::strong_ordering::greater)) {
    throw Error(ErrorCode::Domain, "max modulus needs r > 0");
  }
  if (method == MaxModMethod::Auto) {
    if (const auto* e = std::get_if<ExpPower>(&model.node())) {
      return iter_exp(t_mul(TowerReal(e->c), t_pow(r, e->n)), 1);
    }
    if (const auto* e = std::get_if<ExpTower>(&model.node())) {
      return iter_exp(r, e->k);
    }
  }
  double radius = 0.0;
  try {
    radius = to_float(r);
  } catch (const Error&) {
    throw Error(ErrorCode::NonLevelZero, "sampled max modulus needs a plain radius");
  }
  for (const Complex& p : model.listed_poles()) {
    if (std::abs(std::abs(p) - radius) <= on_circle_tol(radius)) {
      throw Error(ErrorCode::PoleOnCircle, "a pole lies on the circle");
    }
  }
  auto log_abs = [&](double theta) {
    return eval_log(model, std::polar(radius, theta)).real();
  };
  const double h = kTwoPi / kMaxModNodes;
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < kMaxModNodes; ++j) {
    const double v = log_abs(j * h);
    if (v > best_val) {
      best_val = v;
      best = j;
    }
  }
  // Golden-section refinement on [theta_best - h, theta_best + h].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best * h - h;
  double b = best * h + h;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = log_abs(c);
  double fd = log_abs(d);
  while (b - a > 1e-10 * kTwoPi) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = log_abs(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = log_abs(d);
    }
  }
  best_val = std::max({best_val, fc, fd});
  if (std::isinf(best_val) && best_val < 0) {
    return TowerReal(0.0);
  }
  return TowerReal::exp_of(best_val);
}

// ---------------------------------------------------------------------------

long winding_number(const FunctionModel& model, Target a, Complex center, double radius) {
  auto log_g = [&](double theta) -> Complex {
    const Complex z = center + std::polar(radius, theta);
    const Complex lf = eval_log(model, z);
    Complex lg;
    if (!a) {
      lg = -lf;
    } else if (*a == Complex{}) {
      lg = lf;
    } else if (lf.real() > 30.0) {
      lg = lf + std::log(Complex{1.0, 0.0} - *a * std::exp(-lf));
    } else {
      lg = std::log(std::exp(lf) - *a);
    }
    if (!std::isfinite(lg.real()) || !std::isfinite(lg.imag()) ||
        (a && lg.real() < std::log(1e-12))) {
      throw Error(ErrorCode::OnCircle, "an a-point lies on the contour");
    }
    return lg;
  };
  auto wrap = [](double d) {
    d = std::remainder(d, kTwoPi);
    return d;
  };
  constexpr int kInitial = 64;
  constexpr int kMaxDepth = 40;
  double total = 0.0;
  // Recursive refinement of a segment until the argument increment is small.
  struct Seg {
    double t0, t1;
    Complex l0, l1;
    int depth;
  };
  std::vector<Seg> stack;
  std::vector<Complex> nodes(kInitial + 1);
  for (int j = 0; j <= kInitial; ++j) {
    nodes[j] = j == kInitial ? nodes[0] : log_g(kTwoPi * j / kInitial);
  }
  for (int j = kInitial - 1; j >= 0; --j) {
    stack.push_back({kTwoPi * j / kInitial, kTwoPi * (j + 1) / kInitial, nodes[j], nodes[j + 1], 0});
  }
  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    const double d = wrap(s.l1.imag() - s.l0.imag());
    if (std::abs(d) < std::numbers::pi / 2) {
      total += d;
      continue;
    }
    if (s.depth >= kMaxDepth) {
      throw Error(ErrorCode::NonIntegralWinding, "argument tracking failed to resolve");
    }
    const double tm = 0.5 * (s.t0 + s.t1);
    const Complex lm = log_g(tm);
    stack.push_back({tm, s.t1, lm, s.l1, s.depth + 1});
    stack.push_back({s.t0, tm, s.l0, lm, s.depth + 1});
  }
  const double w = total / kTwoPi;
  const double n = std::round(w);
  if (std::abs(w - n) > 1e-6) {
    throw Error(ErrorCode::NonIntegralWinding, "winding number is not integral");
  }
  return static_cast<long>(n);
}

namespace {

// Poles of an arbitrary model: listed candidates whose small-circle
// winding reveals a genuine pole.
std::vector<APoint> pole_points(const FunctionModel& model) {
  if (const auto* f = std::get_if<FactoredRational>(&model.node())) {
    return cluster(f->poles);
  }
  std::vector<Complex> cand = model.listed_poles();
  std::vector<APoint> out;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    double sep = 1.0;
    for (std::size_t j = 0; j < cand.size(); ++j) {
      if (i != j) {
        sep = std::min(sep, std::abs(cand[i] - cand[j]) / 2.0);
      }
    }
    const long order = winding_number(model, std::nullopt, cand[i], 1e-4 * sep);
    if (order > 0) {
      out.push_back({cand[i], static_cast<int>(order)});
    }
  }
  return out;
}

}  // namespace

std::optional<std::vector<APoint>> enumerate_a_points(const FunctionModel& model, Target a) {
  if (!a) {
    if (model.is_entire()) {
      return std::vector<APoint>{};
    }
    return pole_points(model);
  }
  if (const auto* p = std::get_if<Polynomial>(&model.node())) {
    std::vector<Complex> c = p->coefficients;
    if (c.empty()) {
      c.push_back(0.0);
    }
    c[0] -= *a;
    return roots_of(std::move(c));
  }
  if (const auto* f = std::get_if<FactoredRational>(&model.node())) {
    if (*a == Complex{}) {
      return cluster(f->zeros);
    }
    // Zeros of f - a are the roots of scale*prod(z - zeros) - a*prod(z - poles).
    std::vector<Complex> num = poly_from_roots(f->zeros, f->scale);
    std::vector<Complex> den = poly_from_roots(f->poles, *a);
    num.resize(std::max(num.size(), den.size()));
    for (std::size_t i = 0; i < den.size(); ++i) {
      num[i] -= den[i];
    }
    return roots_of(std::move(num));
  }
  return std::nullopt;
}

long count_in_disk(const FunctionModel& model, double r, Target a, bool distinct) {
  if (!(r > 0.0)) {
    throw Error(ErrorCode::Domain, "count_in_disk needs r > 0");
  }
  if (auto pts = enumerate_a_points(model, a)) {
    long n = 0;
    for (const APoint& pt : *pts) {
      const double m = std::abs(pt.z);
      if (std::abs(m - r) <= on_circle_tol(r)) {
        throw Error(ErrorCode::OnCircle, "an a-point lies on |z| = r");
      }
      if (m < r) {
        n += distinct ? 1 : pt.multiplicity;
      }
    }
    return n;
  }
  if (distinct) {
    throw Error(ErrorCode::Unsupported, "distinct counting needs an enumerable model");
  }
  // Argument principle: winding = zeros - poles inside the disk.
  const long w = winding_number(model, a, Complex{}, r);
  long poles = 0;
  for (const APoint& pt : pole_points(model)) {
    if (std::abs(pt.z) < r) {
      poles += pt.multiplicity;
    }
  }
  return w + poles;
}

}  // namespace growthlab
