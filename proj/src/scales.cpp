#include "growthlab/scales.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "growthlab/errors.hpp"
#include "growthlab/nevanlinna.hpp"
#include "text.hpp"

namespace growthlab {

namespace detail {

// Geometric (r, scale(r)) samples used to bracket numeric inverses of derived
// scales. Appended under the mutex; entries are never modified afterwards.
struct InverseTable {
  std::mutex mu;
  std::vector<double> r;
  std::vector<TowerReal> v;
};

}  // namespace detail

namespace {

constexpr double kTableRatio = 1.0905077326652577;  // 2^(1/8)
constexpr std::size_t kTableBase = 256;
constexpr double kTableMaxRadius = 1e300;

std::optional<IteratedScale> closed_max_modulus(const FunctionModel& f) {
  if (const auto* e = std::get_if<ExpPower>(&f.node())) {
    return IteratedScale{1, 0, static_cast<double>(e->n), e->c};
  }
  if (const auto* t = std::get_if<ExpTower>(&f.node())) {
    return IteratedScale{t->k, 0, 1.0, 1.0};
  }
  if (const auto* p = std::get_if<Polynomial>(&f.node())) {
    const auto& cs = p->coefficients;
    if (cs.size() >= 2 &&
        std::all_of(cs.begin(), cs.end() - 1, [](Complex c) { return c == Complex{}; })) {
      return IteratedScale{0, 0, static_cast<double>(cs.size() - 1), std::abs(cs.back())};
    }
  }
  return std::nullopt;
}

std::optional<IteratedScale> closed_characteristic(const FunctionModel& f) {
  if (const auto* e = std::get_if<ExpPower>(&f.node())) {
    return IteratedScale{0, 0, static_cast<double>(e->n), e->c / std::numbers::pi};
  }
  if (const auto* p = std::get_if<Polynomial>(&f.node())) {
    const auto& cs = p->coefficients;
    // T of z^d with unit leading coefficient is d log r for r >= 1.
    if (cs.size() >= 2 && std::abs(cs.back()) == 1.0 &&
        std::all_of(cs.begin(), cs.end() - 1, [](Complex c) { return c == Complex{}; })) {
      return IteratedScale{0, 1, 1.0, static_cast<double>(cs.size() - 1)};
    }
  }
  return std::nullopt;
}

TowerReal eval_iterated(const IteratedScale& s, const TowerReal& x) {
  TowerReal v = x;
  if (s.n > 0) {
    v = t_log(iter_log(x, s.n - 1));
  }
  if (s.a != 1.0) {
    if (t_cmp(v, TowerReal(0.0)) <= 0) {
      throw Error(ErrorCode::Domain, "iterated log is not positive at this argument");
    }
    v = t_pow(v, s.a);
  }
  v = t_mul(v, TowerReal(s.c));
  return iter_exp(v, s.m);
}

TowerReal invert_iterated(const IteratedScale& s, const TowerReal& y) {
  TowerReal v = iter_log(y, s.m);
  v = t_div(v, TowerReal(s.c));
  if (s.a != 1.0) {
    v = t_pow(v, 1.0 / s.a);
  }
  return iter_exp(v, s.n);
}

TowerReal eval_sin_log(const TowerReal& x) {
  const double lx = log_to_float(x);
  return iter_exp(t_mul(x, TowerReal(2.0 + std::sin(lx))), 1);
}

// Solves u + log(2 + sin u) = log log y for u = log x.
TowerReal invert_sin_log(const TowerReal& y) {
  const TowerReal ly = t_log(y);
  if (t_cmp(ly, TowerReal(0.0)) <= 0) {
    throw Error(ErrorCode::BelowRange, "value below the sine-log scale's range");
  }
  const double target = log_to_float(ly);
  auto g = [](double u) { return u + std::log(2.0 + std::sin(u)); };
  if (target < g(1.0)) {
    throw Error(ErrorCode::BelowRange, "value below the sine-log scale's range");
  }
  double lo = std::max(1.0, target - std::log(3.0));
  double hi = std::max(lo, target);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    (g(mid) < target ? lo : hi) = mid;
  }
  return TowerReal::exp_of(0.5 * (lo + hi));
}

double eval_tabulated(const TabulatedMonotone& t, double x) {
  const auto& xs = t.x;
  const auto& ys = t.y;
  const std::size_t n = xs.size();
  if (x >= xs.back()) {
    const double slope = (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
    return ys.back() + slope * (x - xs.back());
  }
  const std::size_t i =
      static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
  // Fritsch-Carlson slopes at the interval ends.
  auto secant = [&](std::size_t k) { return (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]); };
  auto slope_at = [&](std::size_t k) {
    if (k == 0) {
      return secant(0);
    }
    if (k == n - 1) {
      return secant(n - 2);
    }
    const double d0 = secant(k - 1);
    const double d1 = secant(k);
    if (d0 * d1 <= 0.0) {
      return 0.0;
    }
    const double h0 = xs[k] - xs[k - 1];
    const double h1 = xs[k + 1] - xs[k];
    const double w1 = 2.0 * h1 + h0;
    const double w2 = h1 + 2.0 * h0;
    return (w1 + w2) / (w1 / d0 + w2 / d1);
  };
  const double h = xs[i + 1] - xs[i];
  const double s = (x - xs[i]) / h;
  const double m0 = slope_at(i);
  const double m1 = slope_at(i + 1);
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * ys[i] + h10 * h * m0 + h01 * ys[i + 1] + h11 * h * m1;
}

// Monotone coordinate on the tower line: linear in x below kBound, then one
// unit per level, geometric in the mantissa within a level.
double phi(const TowerReal& x) {
  if (x.is_plain()) {
    return x.mantissa() / TowerReal::kBound;
  }
  const double lb = TowerReal::kLogBound;
  return x.level() + std::log(x.mantissa() / lb) / std::log(TowerReal::kBound / lb);
}

TowerReal phi_inverse(double u) {
  if (u <= 1.0) {
    return TowerReal(u * TowerReal::kBound);
  }
  const double level = std::floor(u);
  const double lb = TowerReal::kLogBound;
  const double m = lb * std::exp((u - level) * std::log(TowerReal::kBound / lb));
  return TowerReal::from_parts(static_cast<int>(level), m);
}

template <class F>
TowerReal bisect_inverse(F&& f, const TowerReal& y, const TowerReal& x0) {
  const auto c0 = t_cmp(f(x0), y);
  if (c0 > 0) {
    throw Error(ErrorCode::BelowRange, "value below the scale's range");
  }
  if (c0 == 0) {
    return x0;
  }
  double lo = phi(x0);
  double hi = lo;
  for (int i = 0;; ++i) {
    if (i > 400) {
      throw Error(ErrorCode::NonConvergent, "could not bracket the inverse");
    }
    hi = hi < 1.0 ? std::min(2.0 * hi, 1.0) : hi + 0.5;
    if (t_cmp(f(phi_inverse(hi)), y) >= 0) {
      break;
    }
    lo = hi;
  }
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    (t_cmp(f(phi_inverse(mid)), y) < 0 ? lo : hi) = mid;
  }
  return phi_inverse(0.5 * (lo + hi));
}

double plain_radius(const TowerReal& x) {
  try {
    return to_float(x);
  } catch (const Error&) {
    throw Error(ErrorCode::NonLevelZero, "numeric or tabulated scale needs a radius in double range");
  }
}

TowerReal eval_derived_numeric(const GrowthScale::Node& node, const TowerReal& x) {
  if (const auto* d = std::get_if<DerivedMaxMod>(&node)) {
    return max_modulus(*d->model, x, MaxModMethod::Sampling);
  }
  const auto& d = std::get<DerivedCharacteristic>(node);
  return TowerReal(characteristic(*d.model, plain_radius(x)));
}

// Brackets y in the cached table, then bisects on exact evaluations.
TowerReal invert_derived_numeric(const GrowthScale& scale, const TowerReal& y) {
  auto& table = scale.inverse_table();
  const double x0 = plain_radius(scale.domain_start());
  auto f = [&](double r) { return eval_derived_numeric(scale.node(), TowerReal(r)); };
  double lo = 0.0;
  double hi = 0.0;
  {
    std::lock_guard<std::mutex> lock(table.mu);
    if (table.r.empty()) {
      table.r.push_back(x0);
      table.v.push_back(f(x0));
    }
    if (t_cmp(y, table.v.front()) < 0) {
      throw Error(ErrorCode::BelowRange, "value below the scale's range");
    }
    while (t_cmp(table.v.back(), y) < 0) {
      const double next = table.r.back() * kTableRatio;
      if (next > kTableMaxRadius) {
        throw Error(ErrorCode::NonLevelZero, "inverse lies beyond double radii");
      }
      table.r.push_back(next);
      table.v.push_back(f(next));
    }
    // Fill the base grid once so later lookups are cheap.
    while (table.r.size() < kTableBase && table.r.back() * kTableRatio <= kTableMaxRadius) {
      const double next = table.r.back() * kTableRatio;
      table.r.push_back(next);
      table.v.push_back(f(next));
    }
    const auto it = std::lower_bound(table.v.begin(), table.v.end(), y,
                                     [](const TowerReal& a, const TowerReal& b) { return a < b; });
    const auto i = static_cast<std::size_t>(it - table.v.begin());
    if (*it == y) {
      return TowerReal(table.r[i]);
    }
    lo = table.r[i - 1];
    hi = table.r[i];
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (t_cmp(f(mid), y) < 0 ? lo : hi) = mid;
  }
  return TowerReal(0.5 * (lo + hi));
}

}  // namespace

GrowthScale::GrowthScale(Node node, double x0)
    : node_(std::move(node)), x0_(x0), table_(std::make_shared<detail::InverseTable>()) {}

GrowthScale GrowthScale::iterated(int m, int n, double a, double c) {
  if (m < 0 || n < 0 || !(a > 0.0) || !(c > 0.0) || !std::isfinite(a) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidArgument, "iterated scale needs m, n >= 0 and a, c > 0");
  }
  return GrowthScale(IteratedScale{m, n, a, c}, n >= 1 ? 3.0 : 1.0);
}

GrowthScale GrowthScale::sin_log() { return GrowthScale(SinLogScale{}, std::numbers::e); }

GrowthScale GrowthScale::max_modulus_of(FunctionModel model) {
  auto closed = closed_max_modulus(model);
  GrowthScale s(DerivedMaxMod{std::make_shared<const FunctionModel>(std::move(model))}, 1.0);
  s.closed_ = closed;
  return s;
}

GrowthScale GrowthScale::characteristic_of(FunctionModel model) {
  auto closed = closed_characteristic(model);
  GrowthScale s(DerivedCharacteristic{std::make_shared<const FunctionModel>(std::move(model))},
                1.0);
  s.closed_ = closed;
  return s;
}

GrowthScale GrowthScale::tabulated(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "tabulated scale needs at least two samples");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]) || !(y[i] > 0.0) || !(x[i] > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "tabulated samples must be positive and finite");
    }
    if (i > 0 && !(x[i] > x[i - 1] && y[i] > y[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "tabulated samples must be strictly increasing");
    }
  }
  const double x0 = x.front();
  return GrowthScale(TabulatedMonotone{std::move(x), std::move(y)}, x0);
}

GrowthScale GrowthScale::with_domain_start(double x0) const {
  if (!(x0 > 0.0) || !std::isfinite(x0)) {
    throw Error(ErrorCode::InvalidArgument, "domain start must be positive");
  }
  if (std::holds_alternative<TabulatedMonotone>(node_)) {
    throw Error(ErrorCode::InvalidArgument, "tabulated scales start at their first sample");
  }
  GrowthScale s = *this;
  s.x0_ = TowerReal(x0);
  s.custom_x0_ = true;
  s.table_ = std::make_shared<detail::InverseTable>();
  return s;
}

std::string GrowthScale::literal() const {
  using detail::shortest;
  const std::string x0 = custom_x0_ ? ",x0=" + shortest(x0_.mantissa()) : "";
  return std::visit(
      [&](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IteratedScale>) {
          return "iter(m=" + std::to_string(s.m) + ",n=" + std::to_string(s.n) +
                 ",a=" + shortest(s.a) + ",c=" + shortest(s.c) + x0 + ")";
        } else if constexpr (std::is_same_v<T, SinLogScale>) {
          return custom_x0_ ? "sinlog(" + x0.substr(1) + ")" : "sinlog";
        } else if constexpr (std::is_same_v<T, DerivedMaxMod>) {
          return "maxmod(" + s.model->literal() + x0 + ")";
        } else if constexpr (std::is_same_v<T, DerivedCharacteristic>) {
          return "charac(" + s.model->literal() + x0 + ")";
        } else {
          std::string out = "tab(";
          for (std::size_t i = 0; i < s.x.size(); ++i) {
            out += (i ? "," : "") + shortest(s.x[i]) + ":" + shortest(s.y[i]);
          }
          return out + ")";
        }
      },
      node_);
}

TowerReal scale_eval(const GrowthScale& scale, const TowerReal& x, ScaleMethod method) {
  if (t_cmp(x, scale.domain_start()) < 0) {
    throw Error(ErrorCode::BelowDomain, "argument below the scale's domain start");
  }
  const auto& node = scale.node();
  if (const auto* it = std::get_if<IteratedScale>(&node)) {
    return eval_iterated(*it, x);
  }
  if (std::holds_alternative<SinLogScale>(node)) {
    return eval_sin_log(x);
  }
  if (const auto* t = std::get_if<TabulatedMonotone>(&node)) {
    return TowerReal(eval_tabulated(*t, plain_radius(x)));
  }
  if (method == ScaleMethod::Auto && scale.closed_form()) {
    return eval_iterated(*scale.closed_form(), x);
  }
  if (method == ScaleMethod::Auto) {
    if (const auto* d = std::get_if<DerivedMaxMod>(&node)) {
      return max_modulus(*d->model, x, MaxModMethod::Auto);
    }
  }
  return eval_derived_numeric(node, x);
}

TowerReal scale_inverse(const GrowthScale& scale, const TowerReal& y, ScaleMethod method) {
  const auto& node = scale.node();
  const TowerReal& x0 = scale.domain_start();
  auto generic = [&]() {
    return bisect_inverse([&](const TowerReal& x) { return scale_eval(scale, x, method); }, y, x0);
  };
  const IteratedScale* closed = std::get_if<IteratedScale>(&node);
  if (!closed && scale.closed_form()) {
    closed = &*scale.closed_form();
  }
  if (method == ScaleMethod::Auto && closed) {
    if (t_cmp(y, eval_iterated(*closed, x0)) < 0) {
      throw Error(ErrorCode::BelowRange, "value below the scale's range");
    }
    return invert_iterated(*closed, y);
  }
  if (std::holds_alternative<SinLogScale>(node)) {
    if (method == ScaleMethod::Numeric) {
      return generic();
    }
    if (t_cmp(y, eval_sin_log(x0)) < 0) {
      throw Error(ErrorCode::BelowRange, "value below the scale's range");
    }
    return invert_sin_log(y);
  }
  if (std::holds_alternative<DerivedMaxMod>(node) ||
      std::holds_alternative<DerivedCharacteristic>(node)) {
    return invert_derived_numeric(scale, y);
  }
  return generic();
}

TowerReal compose_inverse(const GrowthScale& alpha, const GrowthScale& beta, const TowerReal& r) {
  return scale_inverse(alpha, scale_eval(beta, r));
}

TowerReal log_chain(const TowerReal& x, int k) {
  if (k <= 0) {
    return x;
  }
  return t_log(iter_log(x, k - 1));
}

RatioParts composed_ratio(const GrowthScale& alpha, const GrowthScale& beta, const TowerReal& r,
                          int p, int q) {
  if (p < 1 || q < 1) {
    throw Error(ErrorCode::InvalidArgument, "p and q must be positive");
  }
  RatioParts out;
  out.numerator = to_float(log_chain(compose_inverse(alpha, beta, r), p));
  out.denominator = to_float(log_chain(r, q));
  if (!(out.denominator > 0.0)) {
    throw Error(ErrorCode::Domain, "log^[q] r is not positive at this radius");
  }
  return out;
}

}  // namespace growthlab
