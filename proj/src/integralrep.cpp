#include "growthlab/integralrep.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "growthlab/errors.hpp"
#include "parallel.hpp"

namespace growthlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ln F(r): log^[p-1] alpha^{-1}beta(r), with alpha^{-1}beta itself for p = 1.
TowerReal log_f(const IntegralSpec& spec, const TowerReal& r) {
  const TowerReal inner = compose_inverse(spec.alpha, spec.beta, r);
  return spec.p == 1 ? inner : log_chain(inner, spec.p - 1);
}

double denominator_log(const IntegralSpec& spec, const TowerReal& r) {
  const TowerReal base = log_chain(r, spec.q - 1);
  if (t_cmp(base, TowerReal(0.0)) <= 0) {
    throw Error(ErrorCode::Domain, "log^[q-1] r is not positive at this radius");
  }
  return to_float(t_pow(base, spec.A));
}

double reduce(const TowerReal& x) {
  try {
    return to_float(x);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Overflow) {
      return kInf;
    }
    throw;
  }
}

void check_spec(const IntegralSpec& spec) {
  if (spec.p < 1 || spec.q < 1) {
    throw Error(ErrorCode::InvalidArgument, "p and q must be positive");
  }
  if (!(spec.A > 0.0) || !std::isfinite(spec.A)) {
    throw Error(ErrorCode::InvalidArgument, "A must be positive and finite");
  }
}

// ln F, the denominator exponent and ln r on the grid; shared by every k.
struct IntegrandTable {
  std::vector<double> t;
  std::vector<double> radius;
  std::vector<double> ln_f;
  std::vector<double> u;
  std::vector<double> ln_r;

  IntegrandTable(const IntegralSpec& spec, const GridSpec& grid) {
    check_spec(spec);
    t = grid.t_values();
    const auto radii = grid.radii();
    for (const auto& r : radii) {
      try {
        radius.push_back(to_float(r));
      } catch (const Error&) {
        throw Error(ErrorCode::NonLevelZero, "classification grid radii must fit in a double");
      }
      ln_r.push_back(log_to_float(r));
    }
    struct Pair {
      double lf, u;
    };
    const auto rows = detail::parallel_map<Pair>(radii.size(), [&](std::size_t i) {
      return Pair{reduce(log_f(spec, radii[i])), denominator_log(spec, radii[i])};
    });
    for (const auto& row : rows) {
      ln_f.push_back(row.lf);
      u.push_back(row.u);
    }
  }

  double at(std::size_t j, double k) const {
    if (std::isinf(ln_f[j])) {
      return ln_f[j];
    }
    return ln_f[j] - (k + 1.0) * u[j];
  }
};

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double d = n * sxx - sx * sx;
  return d != 0.0 ? (n * sxy - sx * sy) / d : 0.0;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double flm = f(0.5 * (a + m));
  const double frm = f(0.5 * (m + b));
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

// Integral of exp(L(r) - L(a)) over [a, infinity) by adaptive Simpson on
// doubling intervals; stops once an interval adds < 1e-12 of the total.
std::optional<double> sum_tail(const IntegralSpec& spec, double k, double a) {
  const double l_ref = integrand_log(spec, k, a);
  std::function<double(double)> f = [&](double r) {
    return std::exp(integrand_log(spec, k, r) - l_ref);
  };
  double total = 0.0;
  double lo = a;
  double width = a;
  for (int i = 0; i < 200; ++i) {
    const double hi = lo + width;
    if (!std::isfinite(hi) || hi > 1e300) {
      return std::nullopt;
    }
    const double fa = f(lo);
    const double fb = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    const double piece = adaptive_simpson(f, lo, hi, fa, fm, fb, whole,
                                          1e-13 * std::max(total, std::abs(whole)) + 1e-300, 60);
    total += piece;
    if (!std::isfinite(total)) {
      return std::nullopt;
    }
    if (piece < 1e-12 * total) {
      return std::exp(l_ref) * total;
    }
    lo = hi;
    width *= 2.0;
  }
  return std::nullopt;
}

ConvergenceVerdict classify_on(const IntegralSpec& spec, const IntegrandTable& table, double k) {
  ConvergenceVerdict out;
  out.k = k;
  const std::size_t n = table.t.size();
  const std::size_t w = std::min<std::size_t>(tail_window(static_cast<int>(n)), n);
  std::vector<double> lx;
  std::vector<double> ly;
  std::vector<double> d;
  for (std::size_t j = n - w; j < n; ++j) {
    const double l = table.at(j, k);
    lx.push_back(table.ln_r[j]);
    ly.push_back(l);
    d.push_back(l / table.ln_r[j]);
  }
  const bool finite = std::all_of(ly.begin(), ly.end(), [](double v) { return std::isfinite(v); });
  out.decay_slope = finite ? slope(lx, ly) : (ly.back() > 0 ? kInf : -kInf);

  int above = 0;
  for (std::size_t i = 0; i < w; ++i) {
    above += ly[i] >= -(1.0 - kDeadBand) * lx[i];
  }
  const bool diverge_evidence = above >= 3;

  bool converge_evidence =
      finite && out.decay_slope <= -(1.0 + kDeadBand) &&
      std::all_of(d.begin(), d.end(), [](double v) { return v <= -(1.0 + kDeadBand); });

  // Superlinear decay: d_j strictly decreasing, well past the band, and at
  // least doubling in magnitude across the tail.
  bool superlinear = finite && d.back() < -(1.0 + kDeadBand) &&
                     std::abs(d.back()) >= 2.0 * std::abs(d.front());
  for (std::size_t i = 1; superlinear && i < d.size(); ++i) {
    superlinear = d[i] < d[i - 1];
  }
  if (superlinear) {
    out.tail_bound = sum_tail(spec, k, table.radius.back());
    converge_evidence = converge_evidence || out.tail_bound.has_value();
  }

  if (converge_evidence && !diverge_evidence) {
    out.verdict = Verdict::Converges;
  } else if (diverge_evidence && !converge_evidence) {
    out.verdict = Verdict::Diverges;
  } else {
    out.verdict = Verdict::Indeterminate;
  }
  return out;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Converges:
      return "Converges";
    case Verdict::Diverges:
      return "Diverges";
    case Verdict::Indeterminate:
      return "Indeterminate";
  }
  return "unknown";
}

const char* lemma_behavior_name(LemmaBehavior b) {
  switch (b) {
    case LemmaBehavior::TendsToZero:
      return "TendsToZero";
    case LemmaBehavior::BoundedAway:
      return "BoundedAway";
    case LemmaBehavior::Unbounded:
      return "Unbounded";
    case LemmaBehavior::Oscillatory:
      return "Oscillatory";
  }
  return "unknown";
}

double integrand_log(const IntegralSpec& spec, double k, const TowerReal& r) {
  check_spec(spec);
  const double lf = reduce(log_f(spec, r));
  if (std::isinf(lf)) {
    throw Error(ErrorCode::Overflow, "ln F exceeds double range at this radius");
  }
  return lf - (k + 1.0) * denominator_log(spec, r);
}

GridSpec default_integral_grid(bool oscillating) { return {1, 2.0, 0.5, oscillating ? 256 : 64}; }

ConvergenceVerdict classify(const IntegralSpec& spec, double k, const GridSpec& grid) {
  const IntegrandTable table(spec, grid);
  return classify_on(spec, table, k);
}

TransitionResult transition(const IntegralSpec& spec, std::pair<double, double> k_range,
                            double tol, const GridSpec& grid) {
  auto [lo, hi] = k_range;
  if (!(lo < hi) || !(tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "k range must be increasing and tol positive");
  }
  const IntegrandTable table(spec, grid);
  std::map<double, ConvergenceVerdict> seen;
  auto at = [&](double k) {
    auto it = seen.find(k);
    if (it == seen.end()) {
      it = seen.emplace(k, classify_on(spec, table, k)).first;
    }
    return it->second.verdict;
  };
  if (at(lo) != Verdict::Diverges || at(hi) != Verdict::Converges) {
    throw Error(ErrorCode::BadBracket, std::string("k range endpoints classify as ") +
                                           verdict_name(at(lo)) + " / " + verdict_name(at(hi)) +
                                           ", need Diverges / Converges");
  }
  constexpr int kMaxIter = 40;
  std::optional<double> gap;  // some k classified Indeterminate inside (lo, hi)
  for (int i = 0; i < kMaxIter && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const Verdict v = at(mid);
    if (v == Verdict::Diverges) {
      lo = mid;
    } else if (v == Verdict::Converges) {
      hi = mid;
    } else {
      gap = mid;
      break;
    }
  }
  if (gap) {
    // Shrink each edge toward the Indeterminate region separately.
    double inner = *gap;
    for (int i = 0; i < kMaxIter && hi - lo > tol; ++i) {
      const double mid = 0.5 * (lo + inner);
      (at(mid) == Verdict::Diverges ? lo : inner) = mid;
    }
    inner = *gap;
    for (int i = 0; i < kMaxIter && hi - lo > tol; ++i) {
      const double mid = 0.5 * (inner + hi);
      (at(mid) == Verdict::Converges ? hi : inner) = mid;
    }
  }
  TransitionResult out;
  out.k_lo = lo;
  out.k_hi = hi;
  out.indeterminate_limited = hi - lo > tol;
  for (const auto& [k, v] : seen) {
    out.verdict_table.push_back(v);
  }
  return out;
}

LemmaBehavior lemma_ratio(const IntegralSpec& spec, double k, const GridSpec& grid) {
  const IntegrandTable table(spec, grid);
  const std::size_t n = table.t.size();
  const std::size_t w = std::min<std::size_t>(tail_window(static_cast<int>(n)), n);
  std::vector<double> rho;
  for (std::size_t j = n - w; j < n; ++j) {
    // integrand_log carries (k+1); the Lemma's ratio carries k.
    rho.push_back(table.at(j, k - 1.0));
  }
  if (std::any_of(rho.begin(), rho.end(), [](double v) { return std::isnan(v); })) {
    return LemmaBehavior::Oscillatory;
  }
  if (std::isinf(rho.back())) {
    return rho.back() > 0 ? LemmaBehavior::Unbounded : LemmaBehavior::TendsToZero;
  }
  auto monotone = [&](bool up) {
    for (std::size_t i = 1; i < w; ++i) {
      if (up ? !(rho[i] > rho[i - 1]) : !(rho[i] < rho[i - 1])) {
        return false;
      }
    }
    return true;
  };
  const std::size_t half = w / 2;
  const double first_half = rho[half] - rho.front();
  const double second_half = rho.back() - rho[half];
  const double total = rho.back() - rho.front();
  if (monotone(false) && total <= -1.0 && second_half <= 0.25 * first_half) {
    return LemmaBehavior::TendsToZero;
  }
  if (monotone(true) && total >= 1.0 && second_half >= 0.25 * first_half) {
    return LemmaBehavior::Unbounded;
  }
  const auto [mn, mx] = std::minmax_element(rho.begin(), rho.end());
  const bool same_sign = *mn >= -1e-9 || *mx <= 1e-9;
  if (*mx - *mn <= 1.0 && same_sign) {
    return LemmaBehavior::BoundedAway;
  }
  return LemmaBehavior::Oscillatory;
}

}  // namespace growthlab
