#include <iomanip>
#include <sstream>

#include "growthlab/verify.hpp"
#include "text.hpp"

namespace growthlab {

namespace {

using detail::json_number;
using detail::json_string;
using detail::sig17;

std::string json_opt(const std::optional<double>& v) { return v ? json_number(*v) : "null"; }
std::string json_opt(const std::optional<bool>& v) { return v ? (*v ? "true" : "false") : "null"; }

std::string csv_opt(const std::optional<double>& v) { return v ? sig17(*v) : ""; }
std::string csv_opt(const std::optional<bool>& v) { return v ? (*v ? "true" : "false") : ""; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') {
      out += '"';
    }
    out += ch;
  }
  return out + "\"";
}

std::string short_num(const std::optional<double>& v) {
  if (!v) {
    return "-";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

std::string json_transition(const std::optional<TransitionSummary>& t) {
  if (!t) {
    return "null";
  }
  std::ostringstream o;
  o << "{\"A\": " << json_number(t->A) << ", \"k_range\": [" << json_number(t->k_range.first)
    << ", " << json_number(t->k_range.second) << "], \"k_lo\": " << json_number(t->result.k_lo)
    << ", \"k_hi\": " << json_number(t->result.k_hi)
    << ", \"indeterminate_limited\": " << (t->result.indeterminate_limited ? "true" : "false")
    << ", \"verdicts\": [";
  bool first = true;
  for (const auto& v : t->result.verdict_table) {
    o << (first ? "" : ", ") << "{\"k\": " << json_number(v.k) << ", \"verdict\": \""
      << verdict_name(v.verdict) << "\", \"decay_slope\": " << json_number(v.decay_slope)
      << ", \"tail_bound\": " << json_opt(v.tail_bound) << "}";
    first = false;
  }
  o << "]}";
  return o.str();
}

std::string json_truth(const GroundTruth& t) {
  if (t.empty()) {
    return "null";
  }
  std::ostringstream o;
  o << "{\"rho\": " << json_opt(t.rho) << ", \"lambda\": " << json_opt(t.lambda)
    << ", \"sigma\": " << json_opt(t.sigma) << ", \"sigma_bar\": " << json_opt(t.sigma_bar)
    << ", \"tau\": " << json_opt(t.tau) << ", \"tau_bar\": " << json_opt(t.tau_bar)
    << ", \"k_star_type\": " << json_opt(t.k_star_type)
    << ", \"k_star_weak\": " << json_opt(t.k_star_weak)
    << ", \"provenance\": " << json_string(t.provenance) << "}";
  return o.str();
}

std::string render_json(const EquivalenceReport& report) {
  std::ostringstream o;
  o << "{\n  \"tolerances\": {\"regular\": " << json_number(report.tol_regular)
    << ", \"irregular\": " << json_number(report.tol_irregular)
    << ", \"transition\": " << json_number(report.tol_transition) << "},\n  \"rows\": [";
  bool first_row = true;
  for (const auto& r : report.rows) {
    o << (first_row ? "\n" : ",\n") << "    {\n";
    first_row = false;
    o << "      \"pair\": " << json_string(r.name) << ",\n";
    o << "      \"alpha\": " << json_string(r.alpha) << ",\n";
    o << "      \"beta\": " << json_string(r.beta) << ",\n";
    o << "      \"p\": " << r.p << ",\n      \"q\": " << r.q << ",\n";
    o << "      \"status\": \"" << row_status_name(r.status) << "\",\n";
    o << "      \"tolerance\": " << json_number(r.tolerance) << ",\n";
    o << "      \"error\": " << (r.error.empty() ? "null" : json_string(r.error)) << ",\n";
    o << "      \"estimates\": {\"rho\": " << json_opt(r.rho) << ", \"lambda\": " << json_opt(r.lambda)
      << ", \"sigma\": " << json_opt(r.sigma) << ", \"sigma_bar\": " << json_opt(r.sigma_bar)
      << ", \"tau\": " << json_opt(r.tau) << ", \"tau_bar\": " << json_opt(r.tau_bar) << "},\n";
    o << "      \"inverse_forms\": {\"sigma\": " << json_opt(r.inv_sigma)
      << ", \"sigma_bar\": " << json_opt(r.inv_sigma_bar) << ", \"tau\": " << json_opt(r.inv_tau)
      << ", \"tau_bar\": " << json_opt(r.inv_tau_bar) << "},\n";
    o << "      \"type_transition\": " << json_transition(r.type_transition) << ",\n";
    o << "      \"weak_transition\": " << json_transition(r.weak_transition) << ",\n";
    o << "      \"ground_truth\": " << json_truth(r.truth) << ",\n";
    o << "      \"deltas\": {";
    for (std::size_t i = 0; i < r.deltas.size(); ++i) {
      o << (i ? ", " : "") << json_string(r.deltas[i].first) << ": " << json_number(r.deltas[i].second);
    }
    o << "},\n";
    o << "      \"flags\": {\"type_agreement\": " << json_opt(r.type_agreement)
      << ", \"lower_type_agreement\": " << json_opt(r.lower_type_agreement)
      << ", \"weak_agreement\": " << json_opt(r.weak_agreement)
      << ", \"weak_bar_agreement\": " << json_opt(r.weak_bar_agreement)
      << ", \"full_coincidence\": " << json_opt(r.full_coincidence)
      << ", \"expression_identity\": " << json_opt(r.expression_identity)
      << ", \"reparametrization\": " << json_opt(r.reparametrization) << "},\n";
    o << "      \"failures\": [";
    for (std::size_t i = 0; i < r.failures.size(); ++i) {
      o << (i ? ", " : "") << json_string(r.failures[i]);
    }
    o << "]\n    }";
  }
  o << (report.rows.empty() ? "],\n" : "\n  ],\n");
  o << "  \"summary\": {\"pass\": " << report.count(RowStatus::Pass)
    << ", \"fail\": " << report.count(RowStatus::Fail)
    << ", \"inconclusive\": " << report.count(RowStatus::Inconclusive)
    << ", \"errored\": " << report.count(RowStatus::Errored)
    << ", \"gates_pass\": " << (report.gates_pass() ? "true" : "false") << "}\n}\n";
  return o.str();
}

std::string render_csv(const EquivalenceReport& report) {
  std::ostringstream o;
  o << "pair,alpha,beta,p,q,status,tolerance,rho,lambda,sigma,sigma_bar,tau,tau_bar,"
       "inv_sigma,inv_sigma_bar,inv_tau,inv_tau_bar,type_k_lo,type_k_hi,weak_k_lo,weak_k_hi,"
       "type_agreement,lower_type_agreement,weak_agreement,weak_bar_agreement,full_coincidence,"
       "expression_identity,reparametrization,error\n";
  for (const auto& r : report.rows) {
    auto bracket = [](const std::optional<TransitionSummary>& t) {
      return t ? sig17(t->result.k_lo) + "," + sig17(t->result.k_hi) : std::string(",");
    };
    o << csv_field(r.name) << ',' << csv_field(r.alpha) << ',' << csv_field(r.beta) << ',' << r.p
      << ',' << r.q << ',' << row_status_name(r.status) << ',' << sig17(r.tolerance) << ','
      << csv_opt(r.rho) << ',' << csv_opt(r.lambda) << ',' << csv_opt(r.sigma) << ','
      << csv_opt(r.sigma_bar) << ',' << csv_opt(r.tau) << ',' << csv_opt(r.tau_bar) << ','
      << csv_opt(r.inv_sigma) << ',' << csv_opt(r.inv_sigma_bar) << ',' << csv_opt(r.inv_tau)
      << ',' << csv_opt(r.inv_tau_bar) << ',' << bracket(r.type_transition) << ','
      << bracket(r.weak_transition) << ',' << csv_opt(r.type_agreement) << ','
      << csv_opt(r.lower_type_agreement) << ',' << csv_opt(r.weak_agreement) << ','
      << csv_opt(r.weak_bar_agreement) << ',' << csv_opt(r.full_coincidence) << ','
      << csv_opt(r.expression_identity) << ',' << csv_opt(r.reparametrization) << ','
      << csv_field(r.error) << '\n';
  }
  return o.str();
}

std::string render_table(const EquivalenceReport& report) {
  std::ostringstream o;
  o << std::left << std::setw(16) << "pair" << std::setw(13) << "status";
  for (const char* h : {"rho", "lambda", "sigma", "sigma_bar", "tau", "tau_bar"}) {
    o << std::setw(11) << h;
  }
  o << std::setw(24) << "type k*" << "weak k*" << '\n';
  for (const auto& r : report.rows) {
    o << std::setw(16) << r.name << std::setw(13) << row_status_name(r.status);
    for (const auto& v : {r.rho, r.lambda, r.sigma, r.sigma_bar, r.tau, r.tau_bar}) {
      o << std::setw(11) << short_num(v);
    }
    auto bracket = [](const std::optional<TransitionSummary>& t) {
      return t ? "[" + short_num(t->result.k_lo) + ", " + short_num(t->result.k_hi) + "]"
               : std::string("-");
    };
    o << std::setw(24) << bracket(r.type_transition) << bracket(r.weak_transition) << '\n';
    if (!r.error.empty()) {
      o << "    error: " << r.error << '\n';
    }
    for (const auto& f : r.failures) {
      o << "    fail: " << f << '\n';
    }
  }
  o << "pass " << report.count(RowStatus::Pass) << ", fail " << report.count(RowStatus::Fail)
    << ", inconclusive " << report.count(RowStatus::Inconclusive) << ", errored "
    << report.count(RowStatus::Errored) << '\n';
  return o.str();
}

constexpr const char* kGrammar[] = {
    "scale: iter(m=M,n=N,a=A,c=C[,x0=X]) | exp | sinlog[(x0=X)] | maxmod(MODEL[,x0=X]) | "
    "charac(MODEL[,x0=X]) | tab(x:y,...)",
    "model: poly(c0,c1,...) | exppow(c=C,n=N) | exptower(k=K) | rat(zeros=[..];poles=[..];scale=S) | "
    "sum(MODEL,MODEL) | prod(MODEL,MODEL)",
    "complex: 2 | -1.5 | i | 1+2i | 3-i",
};

}  // namespace

std::string render_report(const EquivalenceReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json:
      return render_json(report);
    case ReportFormat::Csv:
      return render_csv(report);
    case ReportFormat::Table:
      return render_table(report);
  }
  return {};
}

std::string render_catalog(ReportFormat format) {
  const auto pairs = standard_catalog();
  std::ostringstream o;
  if (format == ReportFormat::Json) {
    o << "{\n  \"grammar\": [";
    for (std::size_t i = 0; i < std::size(kGrammar); ++i) {
      o << (i ? ", " : "") << json_string(kGrammar[i]);
    }
    o << "],\n  \"pairs\": [";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& p = pairs[i];
      o << (i ? ",\n" : "\n") << "    {\"name\": " << json_string(p.name)
        << ", \"alpha\": " << json_string(p.alpha.literal())
        << ", \"beta\": " << json_string(p.beta.literal()) << ", \"p\": " << p.p
        << ", \"q\": " << p.q << ", \"irregular\": " << (p.irregular ? "true" : "false")
        << ", \"ground_truth\": " << json_truth(p.truth) << "}";
    }
    o << "\n  ]\n}\n";
  } else if (format == ReportFormat::Csv) {
    o << "name,alpha,beta,p,q,irregular,rho,lambda,sigma,sigma_bar,tau,tau_bar,k_star_type,"
         "k_star_weak\n";
    for (const auto& p : pairs) {
      const auto& t = p.truth;
      o << csv_field(p.name) << ',' << csv_field(p.alpha.literal()) << ','
        << csv_field(p.beta.literal()) << ',' << p.p << ',' << p.q << ','
        << (p.irregular ? "true" : "false") << ',' << csv_opt(t.rho) << ',' << csv_opt(t.lambda)
        << ',' << csv_opt(t.sigma) << ',' << csv_opt(t.sigma_bar) << ',' << csv_opt(t.tau) << ','
        << csv_opt(t.tau_bar) << ',' << csv_opt(t.k_star_type) << ',' << csv_opt(t.k_star_weak)
        << '\n';
    }
  } else {
    for (const char* g : kGrammar) {
      o << g << '\n';
    }
    o << '\n';
    for (const auto& p : pairs) {
      o << std::left << std::setw(16) << p.name << "(p,q)=(" << p.p << ',' << p.q << ")  alpha "
        << p.alpha.literal() << "  beta " << p.beta.literal() << '\n';
      if (!p.truth.provenance.empty()) {
        o << "    " << p.truth.provenance << '\n';
      }
    }
  }
  return o.str();
}

}  // namespace growthlab
