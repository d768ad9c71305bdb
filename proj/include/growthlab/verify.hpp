#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "growthlab/indicators.hpp"
#include "growthlab/integralrep.hpp"
#include "growthlab/scales.hpp"

namespace growthlab {

struct GroundTruth {
  std::optional<double> rho;
  std::optional<double> lambda;
  std::optional<double> sigma;
  std::optional<double> sigma_bar;
  std::optional<double> tau;
  std::optional<double> tau_bar;
  std::optional<double> k_star_type;
  std::optional<double> k_star_weak;
  std::string provenance;

  bool empty() const;
};

struct CatalogPair {
  std::string name;
  GrowthScale alpha;
  GrowthScale beta;
  int p = 1;
  int q = 1;
  GroundTruth truth;
  /// Oscillating ratio (SinLog): irregular tolerance and 256-point grids.
  bool irregular = false;
  GridSpec order_grid;
  GridSpec type_grid;
  GridSpec integral_grid;
  GridSpec inverse_grid;
  std::optional<std::pair<double, double>> k_range;
};

/// Pair with default grids for its (p, q) and regularity.
CatalogPair make_pair(std::string name, GrowthScale alpha, GrowthScale beta, int p, int q,
                      bool irregular = false);

/// The eight standard pairs, in report order.
std::vector<CatalogPair> standard_catalog();

struct SuiteConfig {
  std::vector<CatalogPair> pairs;
  double tol_regular = 1e-2;
  double tol_irregular = 5e-2;
  double tol_transition = 5e-2;
};

/// Flat key=value text with # comments:
///   pairs=identity,regular-power        (standard names or custom ones)
///   tol.regular / tol.irregular / tol.transition
///   pair.NAME.alpha / .beta / .p / .q / .irregular / .krange=lo:hi
///   pair.NAME.grid.order|type|integral|inverse=q_anchor:t0:h:J
///   pair.NAME.rho / .lambda / .sigma / .sigma_bar / .tau / .tau_bar /
///   .k_star_type / .k_star_weak / .provenance
/// An absent `pairs` key selects the standard catalog. Throws Parse.
SuiteConfig parse_suite_config(std::string_view text);

enum class RowStatus { Pass, Fail, Inconclusive, Errored };
const char* row_status_name(RowStatus s);

struct TransitionSummary {
  double A = 0.0;
  std::pair<double, double> k_range;
  TransitionResult result;
};

struct ReportRow {
  std::string name;
  std::string alpha;
  std::string beta;
  int p = 1;
  int q = 1;
  double tolerance = 0.0;
  RowStatus status = RowStatus::Pass;
  std::string error;

  std::optional<double> rho, lambda, sigma, sigma_bar, tau, tau_bar;
  /// Inverse-parametrized counterparts of sigma, sigma_bar, tau, tau_bar.
  std::optional<double> inv_sigma, inv_sigma_bar, inv_tau, inv_tau_bar;
  std::optional<TransitionSummary> type_transition;
  std::optional<TransitionSummary> weak_transition;
  GroundTruth truth;
  std::vector<std::pair<std::string, double>> deltas;

  /// Reported only: limit value vs integral transition, and the
  /// four-way coincidence of the types.
  std::optional<bool> type_agreement, lower_type_agreement, weak_agreement, weak_bar_agreement;
  std::optional<bool> full_coincidence;
  /// Gates.
  std::optional<bool> expression_identity;
  std::optional<bool> reparametrization;
  std::vector<std::string> failures;
};

struct EquivalenceReport {
  double tol_regular = 0.0;
  double tol_irregular = 0.0;
  double tol_transition = 0.0;
  std::vector<ReportRow> rows;

  int count(RowStatus s) const;
  /// No Fail and no Errored rows.
  bool gates_pass() const;
};

ReportRow run_pair(const CatalogPair& pair, const SuiteConfig& config);
EquivalenceReport run_suite(const SuiteConfig& config);

enum class ReportFormat { Json, Csv, Table };

std::string render_report(const EquivalenceReport& report, ReportFormat format);
/// Grammar help plus the standard pairs.
std::string render_catalog(ReportFormat format);

}  // namespace growthlab
