#include "growthlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "growthlab/errors.hpp"
#include "growthlab/literal.hpp"
#include "parallel.hpp"

namespace growthlab {

namespace {

constexpr double kPi = std::numbers::pi;

double distance_to(double x, double lo, double hi) {
  if (x < lo) {
    return lo - x;
  }
  if (x > hi) {
    return x - hi;
  }
  return 0.0;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    return std::numeric_limits<double>::infinity();
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] == b[i] ? 0.0 : std::abs(a[i] - b[i]);
    m = std::max(m, std::isnan(d) ? std::numeric_limits<double>::infinity() : d);
  }
  return m;
}

GroundTruth regular_truth(double rho, double type, double k_star, std::string provenance) {
  GroundTruth t;
  t.rho = t.lambda = rho;
  t.sigma = t.sigma_bar = t.tau = t.tau_bar = type;
  t.k_star_type = t.k_star_weak = k_star;
  t.provenance = std::move(provenance);
  return t;
}

std::pair<double, double> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::Parse, "expected lo:hi, got '" + s + "'");
  }
  try {
    return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "bad range '" + s + "'");
  }
}

double parse_number(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
      throw std::invalid_argument(s);
    }
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "bad number for " + key + ": '" + s + "'");
  }
}

GridSpec parse_grid(const std::string& key, const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) {
    parts.push_back(item);
  }
  if (parts.size() != 4) {
    throw Error(ErrorCode::Parse, key + " expects q_anchor:t0:h:J");
  }
  GridSpec g{static_cast<int>(parse_number(key, parts[0])), parse_number(key, parts[1]),
             parse_number(key, parts[2]), static_cast<int>(parse_number(key, parts[3]))};
  g.validate();
  return g;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

bool GroundTruth::empty() const {
  return !rho && !lambda && !sigma && !sigma_bar && !tau && !tau_bar && !k_star_type &&
         !k_star_weak;
}

CatalogPair make_pair(std::string name, GrowthScale alpha, GrowthScale beta, int p, int q,
                      bool irregular) {
  return CatalogPair{std::move(name),
                     std::move(alpha),
                     std::move(beta),
                     p,
                     q,
                     {},
                     irregular,
                     default_order_grid(q),
                     default_type_grid(q, irregular),
                     default_integral_grid(irregular),
                     default_inverse_grid(irregular),
                     std::nullopt};
}

std::vector<CatalogPair> standard_catalog() {
  const GrowthScale e = GrowthScale::exp();
  const FunctionModel z = FunctionModel::polynomial({0.0, 1.0});
  std::vector<CatalogPair> out;

  auto identity = make_pair("identity", e, e, 1, 1);
  identity.truth = regular_truth(1.0, 1.0, 0.0, "alpha = beta: ratio identically 1; integrand exp(-k r)");
  out.push_back(identity);

  auto regular = make_pair("regular-power", e, GrowthScale::iterated(1, 0, 2.0, 3.0), 1, 1);
  regular.truth = regular_truth(2.0, 3.0, 2.0,
                                "alpha^-1 beta(r) = 3r^2; integrand exp((2 - k) r^2)");
  out.push_back(regular);

  auto poly = make_pair("poly-power", e, GrowthScale::iterated(1, 0, 3.0, 1.0), 2, 2);
  poly.truth = regular_truth(1.0, 3.0, 3.0, "alpha^-1 beta(r) = r^3; integrand r^(2 - k)");
  out.push_back(poly);

  auto gap = make_pair("exp-gap", e, GrowthScale::iterated(2, 0, 1.0, 2.0), 2, 1);
  gap.truth = regular_truth(1.0, 2.0, 1.0, "alpha^-1 beta(r) = e^(2r); integrand e^((1 - k) r)");
  out.push_back(gap);

  auto sinlog = make_pair("sinlog", e, GrowthScale::sin_log(), 1, 1, true);
  GroundTruth st;
  st.rho = st.lambda = 1.0;
  st.sigma = st.tau_bar = 3.0;
  st.sigma_bar = st.tau = 1.0;
  st.k_star_type = st.k_star_weak = 2.0;
  st.provenance = "alpha^-1 beta(r) = r(2 + sin log r); envelope of 2 + sin; integrand exp(r(1 + sin log r - k))";
  sinlog.truth = st;
  out.push_back(sinlog);

  auto maxmod = make_pair("maxmod-square", e,
                          GrowthScale::max_modulus_of(FunctionModel::exp_power(1.0, 2)), 1, 1);
  maxmod.truth = regular_truth(2.0, 1.0, 0.0, "M(r) = e^(r^2) against e^r: classical order 2, type 1");
  out.push_back(maxmod);

  auto charac_exp = make_pair("charac-exp", GrowthScale::characteristic_of(z),
                              GrowthScale::characteristic_of(FunctionModel::exp_power(1.0, 1)), 2, 1);
  charac_exp.truth = regular_truth(1.0, 1.0 / kPi, 1.0 / kPi - 1.0,
                                   "T_z(r) = log r, T_exp(r) = r/pi: alpha^-1 beta(r) = e^(r/pi)");
  out.push_back(charac_exp);

  auto charac_rat =
      make_pair("charac-rational", GrowthScale::characteristic_of(z),
                GrowthScale::characteristic_of(FunctionModel::rational({}, {1.0, 3.0})).with_domain_start(4.0),
                1, 1);
  charac_rat.truth = regular_truth(2.0, 1.0 / 3.0, -2.0 / 3.0,
                                   "T(r) = 2 log r - log 3 for r >= 4: alpha^-1 beta(r) = r^2/3");
  // Quadrature-backed scale: radii must stay in double range.
  charac_rat.order_grid = {1, 2.0, 5.0, 64};
  charac_rat.type_grid = {1, 2.0, 5.0, 64};
  charac_rat.inverse_grid = {0, 10.0, 5.0, 64};
  out.push_back(charac_rat);
  return out;
}

SuiteConfig parse_suite_config(std::string_view text) {
  SuiteConfig cfg;
  std::map<std::string, std::string> kv;
  std::stringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::Parse, "config line " + std::to_string(line_no) + ": expected key=value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      return std::nullopt;
    }
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  if (auto v = take("tol.regular")) cfg.tol_regular = parse_number("tol.regular", *v);
  if (auto v = take("tol.irregular")) cfg.tol_irregular = parse_number("tol.irregular", *v);
  if (auto v = take("tol.transition")) cfg.tol_transition = parse_number("tol.transition", *v);
  for (double t : {cfg.tol_regular, cfg.tol_irregular, cfg.tol_transition}) {
    if (!(t > 0.0)) {
      throw Error(ErrorCode::Parse, "tolerances must be positive");
    }
  }

  const auto standard = standard_catalog();
  std::vector<std::string> names;
  if (auto v = take("pairs")) {
    std::stringstream ss(*v);
    std::string name;
    while (std::getline(ss, name, ',')) {
      name = trim(name);
      if (!name.empty()) {
        names.push_back(name);
      }
    }
  } else {
    for (const auto& p : standard) {
      names.push_back(p.name);
    }
  }

  for (const auto& name : names) {
    const std::string pre = "pair." + name + ".";
    auto base = std::find_if(standard.begin(), standard.end(),
                             [&](const CatalogPair& p) { return p.name == name; });
    auto alpha = take(pre + "alpha");
    auto beta = take(pre + "beta");
    auto p = take(pre + "p");
    auto q = take(pre + "q");
    auto irregular = take(pre + "irregular");
    CatalogPair pair = base != standard.end() ? *base : make_pair(name, GrowthScale::exp(), GrowthScale::exp(), 1, 1);
    if (alpha || beta || p || q || irregular || base == standard.end()) {
      if (!alpha || !beta) {
        throw Error(ErrorCode::Parse, "pair '" + name + "' needs alpha and beta");
      }
      const bool irr = irregular && (*irregular == "true" || *irregular == "1");
      pair = make_pair(name, parse_scale(*alpha), parse_scale(*beta),
                       p ? static_cast<int>(parse_number(pre + "p", *p)) : 1,
                       q ? static_cast<int>(parse_number(pre + "q", *q)) : 1, irr);
      if (pair.p < 1 || pair.q < 1) {
        throw Error(ErrorCode::Parse, "pair '" + name + "' needs positive p and q");
      }
    }
    for (auto [key, field] : {std::pair{"rho", &GroundTruth::rho}, {"lambda", &GroundTruth::lambda},
                              {"sigma", &GroundTruth::sigma}, {"sigma_bar", &GroundTruth::sigma_bar},
                              {"tau", &GroundTruth::tau}, {"tau_bar", &GroundTruth::tau_bar},
                              {"k_star_type", &GroundTruth::k_star_type},
                              {"k_star_weak", &GroundTruth::k_star_weak}}) {
      if (auto v = take(pre + key)) {
        pair.truth.*field = parse_number(pre + key, *v);
      }
    }
    if (auto v = take(pre + "provenance")) pair.truth.provenance = *v;
    if (auto v = take(pre + "krange")) pair.k_range = parse_range(*v);
    if (auto v = take(pre + "grid.order")) pair.order_grid = parse_grid(pre + "grid.order", *v);
    if (auto v = take(pre + "grid.type")) pair.type_grid = parse_grid(pre + "grid.type", *v);
    if (auto v = take(pre + "grid.integral")) pair.integral_grid = parse_grid(pre + "grid.integral", *v);
    if (auto v = take(pre + "grid.inverse")) pair.inverse_grid = parse_grid(pre + "grid.inverse", *v);
    cfg.pairs.push_back(std::move(pair));
  }
  if (!kv.empty()) {
    throw Error(ErrorCode::Parse, "unknown config key '" + kv.begin()->first + "'");
  }
  return cfg;
}

const char* row_status_name(RowStatus s) {
  switch (s) {
    case RowStatus::Pass:
      return "Pass";
    case RowStatus::Fail:
      return "Fail";
    case RowStatus::Inconclusive:
      return "Inconclusive";
    case RowStatus::Errored:
      return "Errored";
  }
  return "unknown";
}

int EquivalenceReport::count(RowStatus s) const {
  return static_cast<int>(
      std::count_if(rows.begin(), rows.end(), [&](const ReportRow& r) { return r.status == s; }));
}

bool EquivalenceReport::gates_pass() const {
  return count(RowStatus::Fail) == 0 && count(RowStatus::Errored) == 0;
}

ReportRow run_pair(const CatalogPair& pair, const SuiteConfig& config) {
  ReportRow row;
  row.name = pair.name;
  row.alpha = pair.alpha.literal();
  row.beta = pair.beta.literal();
  row.p = pair.p;
  row.q = pair.q;
  row.truth = pair.truth;
  row.tolerance = pair.irregular ? config.tol_irregular : config.tol_regular;
  const double tol = row.tolerance;
  const double tol_t = config.tol_transition;
  try {
    const auto [rho, lambda] = rel_order(pair.alpha, pair.beta, pair.p, pair.q, pair.order_grid);
    row.rho = rho.value;
    row.lambda = lambda.value;
    const double rho_used = pair.truth.rho.value_or(rho.value);
    const double lambda_used = pair.truth.lambda.value_or(lambda.value);
    for (double v : {rho_used, lambda_used}) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::Domain, "order is not in (0, inf) at this (p,q)");
      }
    }
    const auto [sigma, sigma_bar] =
        rel_type(pair.alpha, pair.beta, pair.p, pair.q, rho_used, pair.type_grid);
    const auto [tau, tau_bar] =
        rel_weak_type(pair.alpha, pair.beta, pair.p, pair.q, lambda_used, pair.type_grid);
    row.sigma = sigma.value;
    row.sigma_bar = sigma_bar.value;
    row.tau = tau.value;
    row.tau_bar = tau_bar.value;

    row.inv_sigma = rel_type_inverse_form(pair.alpha, pair.beta, pair.p, pair.q, rho_used, true,
                                          pair.inverse_grid).value;
    row.inv_sigma_bar = rel_type_inverse_form(pair.alpha, pair.beta, pair.p, pair.q, rho_used,
                                              false, pair.inverse_grid).value;
    row.inv_tau = rel_type_inverse_form(pair.alpha, pair.beta, pair.p, pair.q, lambda_used, false,
                                        pair.inverse_grid).value;
    row.inv_tau_bar = rel_type_inverse_form(pair.alpha, pair.beta, pair.p, pair.q, lambda_used,
                                            true, pair.inverse_grid).value;

    auto run_transition = [&](double A, double centre) {
      TransitionSummary s;
      s.A = A;
      s.k_range = pair.k_range.value_or(std::pair{centre - 3.0, centre + 3.0});
      const IntegralSpec spec{pair.alpha, pair.beta, pair.p, pair.q, A};
      s.result = transition(spec, s.k_range, tol_t, pair.integral_grid);
      return s;
    };
    row.type_transition = run_transition(rho_used, sigma.value);
    row.weak_transition = run_transition(lambda_used, tau.value);

    // Reported agreement between limit values and integral transitions.
    const auto& tt = row.type_transition->result;
    const auto& wt = row.weak_transition->result;
    row.type_agreement = distance_to(sigma.value, tt.k_lo, tt.k_hi) <= tol_t;
    row.lower_type_agreement = distance_to(sigma_bar.value, tt.k_lo, tt.k_hi) <= tol_t;
    row.weak_agreement = distance_to(tau.value, wt.k_lo, wt.k_hi) <= tol_t;
    row.weak_bar_agreement = distance_to(tau_bar.value, wt.k_lo, wt.k_hi) <= tol_t;
    const double vals[4] = {sigma.value, sigma_bar.value, tau.value, tau_bar.value};
    const auto [mn, mx] = std::minmax_element(std::begin(vals), std::end(vals));
    row.full_coincidence = *mx - *mn <= tol;

    // Gates.
    const bool regular = pair.truth.rho && pair.truth.lambda
                             ? *pair.truth.rho == *pair.truth.lambda
                             : std::abs(rho.value - lambda.value) <= tol;
    if (regular && rho_used == lambda_used) {
      row.expression_identity = max_abs_diff(sigma.tail_values, tau_bar.tail_values) < 1e-12 &&
                                max_abs_diff(tau.tail_values, sigma_bar.tail_values) < 1e-12;
      if (!*row.expression_identity) {
        row.failures.push_back("expression identity sigma = tau_bar, tau = sigma_bar broken");
      }
    }
    row.reparametrization = std::abs(*row.inv_sigma - sigma.value) <= tol &&
                            std::abs(*row.inv_sigma_bar - sigma_bar.value) <= tol &&
                            std::abs(*row.inv_tau - tau.value) <= tol &&
                            std::abs(*row.inv_tau_bar - tau_bar.value) <= tol;
    if (!*row.reparametrization) {
      row.failures.push_back("inverse-parametrized forms differ from direct estimates");
    }

    const GroundTruth& gt = pair.truth;
    auto gate = [&](const char* name, const std::optional<double>& truth, double estimate) {
      if (!truth) {
        return;
      }
      const double delta = std::abs(estimate - *truth);
      row.deltas.emplace_back(name, delta);
      if (!(delta <= tol)) {
        row.failures.push_back(std::string(name) + " outside tolerance");
      }
    };
    gate("rho", gt.rho, rho.value);
    gate("lambda", gt.lambda, lambda.value);
    gate("sigma", gt.sigma, sigma.value);
    gate("sigma_bar", gt.sigma_bar, sigma_bar.value);
    gate("tau", gt.tau, tau.value);
    gate("tau_bar", gt.tau_bar, tau_bar.value);
    auto bracket_gate = [&](const char* name, const std::optional<double>& truth,
                            const TransitionResult& t) {
      if (!truth) {
        return;
      }
      const double delta = distance_to(*truth, t.k_lo, t.k_hi);
      row.deltas.emplace_back(name, delta);
      if (!(delta <= tol_t)) {
        row.failures.push_back(std::string(name) + " outside the transition bracket");
      }
    };
    bracket_gate("k_star_type", gt.k_star_type, tt);
    bracket_gate("k_star_weak", gt.k_star_weak, wt);

    if (!row.failures.empty()) {
      row.status = RowStatus::Fail;
    } else if (tt.indeterminate_limited || wt.indeterminate_limited) {
      row.status = RowStatus::Inconclusive;
    } else {
      row.status = RowStatus::Pass;
    }
  } catch (const std::exception& e) {
    row.status = RowStatus::Errored;
    row.error = e.what();
  }
  return row;
}

EquivalenceReport run_suite(const SuiteConfig& config) {
  EquivalenceReport report;
  report.tol_regular = config.tol_regular;
  report.tol_irregular = config.tol_irregular;
  report.tol_transition = config.tol_transition;
  // Rows are independent; parallel_map keeps catalog order.
  report.rows = detail::parallel_map<ReportRow>(
      config.pairs.size(), [&](std::size_t i) { return run_pair(config.pairs[i], config); });
  return report;
}

}  // namespace growthlab
