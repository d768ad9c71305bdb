#include "growthlab/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "growthlab/errors.hpp"
#include "parallel.hpp"

namespace growthlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A quotient beyond double range means the ratio has run off to infinity.
double quotient(const TowerReal& num, const TowerReal& den) {
  if (t_cmp(den, TowerReal(0.0)) <= 0) {
    throw Error(ErrorCode::Domain, "comparison function is not positive at this radius");
  }
  try {
    return to_float(t_div(num, den));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Overflow) {
      return t_cmp(num, den) > 0 ? kInf : 0.0;
    }
    throw;
  }
}

bool strictly_monotone(const std::vector<double>& v, bool increasing) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (increasing ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) {
      return false;
    }
  }
  return v.size() >= 2;
}

template <class F>
std::vector<double> ratios_on(const std::vector<TowerReal>& radii, F&& f) {
  return detail::parallel_map<double>(radii.size(), [&](std::size_t i) { return f(radii[i]); });
}

}  // namespace

void GridSpec::validate() const {
  if (J < 16 || !(h > 0.0) || !std::isfinite(h) || !std::isfinite(t0)) {
    throw Error(ErrorCode::DegenerateGrid, "grid needs J >= 16 and a positive finite step");
  }
  if (q_anchor < 0) {
    throw Error(ErrorCode::DegenerateGrid, "grid anchor must be non-negative");
  }
}

std::vector<double> GridSpec::t_values() const {
  validate();
  std::vector<double> t(J);
  for (int j = 0; j < J; ++j) {
    t[j] = t0 + j * h;
  }
  return t;
}

std::vector<TowerReal> GridSpec::radii() const {
  std::vector<TowerReal> r;
  for (double t : t_values()) {
    r.push_back(iter_exp(TowerReal(t), q_anchor));
  }
  return r;
}

GridSpec default_order_grid(int q) { return {q + 1, 2.0, 0.5, 64}; }

GridSpec default_type_grid(int q, bool oscillating) { return {q, 2.0, 0.5, oscillating ? 256 : 64}; }

GridSpec default_inverse_grid(bool oscillating) { return {2, 3.0, 0.5, oscillating ? 256 : 64}; }

const char* indicator_kind_name(IndicatorKind kind) {
  switch (kind) {
    case IndicatorKind::Rho:
      return "rho";
    case IndicatorKind::Lambda:
      return "lambda";
    case IndicatorKind::Sigma:
      return "sigma";
    case IndicatorKind::SigmaBar:
      return "sigma_bar";
    case IndicatorKind::Tau:
      return "tau";
    case IndicatorKind::TauBar:
      return "tau_bar";
    case IndicatorKind::InverseLimsup:
      return "inverse_limsup";
    case IndicatorKind::InverseLiminf:
      return "inverse_liminf";
  }
  return "unknown";
}

bool is_limsup(IndicatorKind kind) {
  return kind == IndicatorKind::Rho || kind == IndicatorKind::Sigma ||
         kind == IndicatorKind::TauBar || kind == IndicatorKind::InverseLimsup;
}

int tail_window(int J) { return std::max(8, J / 4); }

IndicatorEstimate summarize(IndicatorKind kind, const std::vector<double>& t,
                            const std::vector<double>& ratios) {
  IndicatorEstimate est;
  est.kind = kind;
  const std::size_t w = std::min<std::size_t>(tail_window(static_cast<int>(ratios.size())),
                                              ratios.size());
  est.tail_values.assign(ratios.end() - static_cast<long>(w), ratios.end());
  const auto& tail = est.tail_values;
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  est.value = is_limsup(kind) ? *hi : *lo;
  est.spread = *hi - *lo;

  // Least-squares slope of ratio against 1/t over the tail.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < w; ++i) {
    const double x = 1.0 / t[t.size() - w + i];
    sx += x;
    sy += tail[i];
    sxx += x * x;
    sxy += x * tail[i];
  }
  const double denom = w * sxx - sx * sx;
  est.envelope_slope = denom != 0.0 ? (w * sxy - sx * sy) / denom : 0.0;

  const bool finite = std::all_of(tail.begin(), tail.end(), [](double v) { return std::isfinite(v); });
  bool divergent = !finite;
  if (finite) {
    const double first = tail.front();
    const double last = tail.back();
    if (first > 0.0 && strictly_monotone(tail, true) && last >= 2.0 * first) {
      divergent = true;
    }
    if (first > 0.0 && strictly_monotone(tail, false) && last <= 0.5 * first) {
      divergent = true;
    }
    if ((kind == IndicatorKind::Rho || kind == IndicatorKind::Lambda) && !(est.value > 0.0)) {
      divergent = true;
    }
  }
  est.divergent = divergent;
  if (!std::isfinite(est.spread)) {
    est.spread = kInf;
  }
  return est;
}

std::pair<IndicatorEstimate, IndicatorEstimate> rel_order(const GrowthScale& alpha,
                                                          const GrowthScale& beta, int p, int q,
                                                          const GridSpec& grid) {
  if (p < 1 || q < 1) {
    throw Error(ErrorCode::InvalidArgument, "p and q must be positive");
  }
  const auto t = grid.t_values();
  const auto ratios = ratios_on(grid.radii(), [&](const TowerReal& r) {
    try {
      return composed_ratio(alpha, beta, r, p, q).ratio();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Overflow) {
        return kInf;
      }
      throw;
    }
  });
  return {summarize(IndicatorKind::Rho, t, ratios), summarize(IndicatorKind::Lambda, t, ratios)};
}

double type_ratio(const GrowthScale& alpha, const GrowthScale& beta, const TowerReal& r, int p,
                  int q, double exponent) {
  if (p < 1 || q < 1) {
    throw Error(ErrorCode::InvalidArgument, "p and q must be positive");
  }
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw Error(ErrorCode::InvalidArgument, "type exponent must be positive and finite");
  }
  const TowerReal num = log_chain(compose_inverse(alpha, beta, r), p - 1);
  const TowerReal base = log_chain(r, q - 1);
  if (t_cmp(base, TowerReal(0.0)) <= 0) {
    throw Error(ErrorCode::Domain, "log^[q-1] r is not positive at this radius");
  }
  return quotient(num, t_pow(base, exponent));
}

std::pair<IndicatorEstimate, IndicatorEstimate> rel_type(const GrowthScale& alpha,
                                                         const GrowthScale& beta, int p, int q,
                                                         double rho, const GridSpec& grid) {
  const auto t = grid.t_values();
  const auto ratios = ratios_on(
      grid.radii(), [&](const TowerReal& r) { return type_ratio(alpha, beta, r, p, q, rho); });
  return {summarize(IndicatorKind::Sigma, t, ratios),
          summarize(IndicatorKind::SigmaBar, t, ratios)};
}

std::pair<IndicatorEstimate, IndicatorEstimate> rel_weak_type(const GrowthScale& alpha,
                                                              const GrowthScale& beta, int p,
                                                              int q, double lambda,
                                                              const GridSpec& grid) {
  const auto t = grid.t_values();
  const auto ratios = ratios_on(
      grid.radii(), [&](const TowerReal& r) { return type_ratio(alpha, beta, r, p, q, lambda); });
  return {summarize(IndicatorKind::Tau, t, ratios), summarize(IndicatorKind::TauBar, t, ratios)};
}

IndicatorEstimate rel_type_inverse_form(const GrowthScale& alpha, const GrowthScale& beta, int p,
                                        int q, double exponent, bool limsup,
                                        const GridSpec& grid_on_r) {
  if (p < 1 || q < 1) {
    throw Error(ErrorCode::InvalidArgument, "p and q must be positive");
  }
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw Error(ErrorCode::InvalidArgument, "type exponent must be positive and finite");
  }
  const auto t = grid_on_r.t_values();
  const auto ratios = ratios_on(grid_on_r.radii(), [&](const TowerReal& big_r) {
    const TowerReal num = log_chain(scale_inverse(alpha, big_r), p - 1);
    const TowerReal base = log_chain(scale_inverse(beta, big_r), q - 1);
    if (t_cmp(base, TowerReal(0.0)) <= 0) {
      throw Error(ErrorCode::Domain, "log^[q-1] of the inverse is not positive");
    }
    return quotient(num, t_pow(base, exponent));
  });
  return summarize(limsup ? IndicatorKind::InverseLimsup : IndicatorKind::InverseLiminf, t, ratios);
}

}  // namespace growthlab
