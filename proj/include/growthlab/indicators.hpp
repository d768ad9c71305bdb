#pragma once

#include <string>
#include <utility>
#include <vector>

#include "growthlab/scales.hpp"
#include "growthlab/tower.hpp"

namespace growthlab {

/// Radii r_j = exp^[q_anchor](t0 + j*h), j = 0..J-1.
struct GridSpec {
  int q_anchor = 1;
  double t0 = 2.0;
  double h = 0.5;
  int J = 64;

  /// Throws DegenerateGrid for J < 16 or h <= 0.
  void validate() const;
  std::vector<double> t_values() const;
  std::vector<TowerReal> radii() const;
};

/// Order and lower order converge like 1/log^[q] r, so their default grid is
/// anchored one level higher than the type grids.
GridSpec default_order_grid(int q);
GridSpec default_type_grid(int q, bool oscillating = false);
/// Default grid over R = beta(r) for the inverse-parametrized forms.
GridSpec default_inverse_grid(bool oscillating = false);

enum class IndicatorKind { Rho, Lambda, Sigma, SigmaBar, Tau, TauBar, InverseLimsup, InverseLiminf };

const char* indicator_kind_name(IndicatorKind kind);
bool is_limsup(IndicatorKind kind);

struct IndicatorEstimate {
  IndicatorKind kind = IndicatorKind::Rho;
  double value = 0.0;
  std::vector<double> tail_values;
  /// Least-squares slope of the tail ratios against 1/t.
  double envelope_slope = 0.0;
  double spread = 0.0;
  /// Ratios blow up, vanish, or are non-finite: the indicator does not apply
  /// at this (p,q).
  bool divergent = false;
};

/// Tail window length max(8, J/4).
int tail_window(int J);

/// Builds the estimate from a full ratio sequence on grid parameters t.
IndicatorEstimate summarize(IndicatorKind kind, const std::vector<double>& t,
                            const std::vector<double>& ratios);

std::pair<IndicatorEstimate, IndicatorEstimate> rel_order(const GrowthScale& alpha,
                                                          const GrowthScale& beta, int p, int q,
                                                          const GridSpec& grid);

/// (sigma, sigma_bar) against the rho-power of log^[q-1] r.
std::pair<IndicatorEstimate, IndicatorEstimate> rel_type(const GrowthScale& alpha,
                                                         const GrowthScale& beta, int p, int q,
                                                         double rho, const GridSpec& grid);

/// (tau, tau_bar) against the lambda-power of log^[q-1] r.
std::pair<IndicatorEstimate, IndicatorEstimate> rel_weak_type(const GrowthScale& alpha,
                                                              const GrowthScale& beta, int p,
                                                              int q, double lambda,
                                                              const GridSpec& grid);

/// limsup or liminf over R of log^[p-1] alpha^{-1}(R) /
/// (log^[q-1] beta^{-1}(R))^exponent.
IndicatorEstimate rel_type_inverse_form(const GrowthScale& alpha, const GrowthScale& beta, int p,
                                        int q, double exponent, bool limsup,
                                        const GridSpec& grid_on_r);

/// Raw type ratio log^[p-1] alpha^{-1}beta(r) / (log^[q-1] r)^exponent, or
/// +inf when the quotient exceeds double range.
double type_ratio(const GrowthScale& alpha, const GrowthScale& beta, const TowerReal& r, int p,
                  int q, double exponent);

}  // namespace growthlab
