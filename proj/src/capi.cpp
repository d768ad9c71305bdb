#include "growthlab/growthlab.h"

#include <cstdlib>
#include <cstring>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "growthlab/errors.hpp"
#include "growthlab/indicators.hpp"
#include "growthlab/integralrep.hpp"
#include "growthlab/literal.hpp"
#include "growthlab/models.hpp"
#include "growthlab/nevanlinna.hpp"
#include "growthlab/scales.hpp"
#include "growthlab/tower.hpp"
#include "growthlab/verify.hpp"
#include "text.hpp"

struct gl_model {
  growthlab::FunctionModel model;
};

struct gl_scale {
  growthlab::GrowthScale scale;
};

struct gl_indicators {
  std::string alpha;
  std::string beta;
  int p = 1;
  int q = 1;
  growthlab::GridSpec order_grid;
  growthlab::GridSpec type_grid;
  growthlab::IndicatorEstimate rho, lambda;
  std::optional<growthlab::IndicatorEstimate> sigma, sigma_bar, tau, tau_bar;
};

struct gl_transition {
  growthlab::TransitionResult result;
};

struct gl_report {
  growthlab::EquivalenceReport report;
};

namespace {

using namespace growthlab;
using detail::json_number;
using detail::json_string;
using detail::sig17;

thread_local std::string last_error;

gl_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return GL_ERR_DOMAIN;
    case ErrorCode::Overflow: return GL_ERR_OVERFLOW;
    case ErrorCode::Pole: return GL_ERR_POLE;
    case ErrorCode::PoleOnCircle: return GL_ERR_POLE_ON_CIRCLE;
    case ErrorCode::OnCircle: return GL_ERR_ON_CIRCLE;
    case ErrorCode::NonIntegralWinding: return GL_ERR_NON_INTEGRAL_WINDING;
    case ErrorCode::SingularNode: return GL_ERR_SINGULAR_NODE;
    case ErrorCode::NonConvergent: return GL_ERR_NON_CONVERGENT;
    case ErrorCode::BelowDomain: return GL_ERR_BELOW_DOMAIN;
    case ErrorCode::NonLevelZero: return GL_ERR_NON_LEVEL_ZERO;
    case ErrorCode::BelowRange: return GL_ERR_BELOW_RANGE;
    case ErrorCode::DegenerateGrid: return GL_ERR_DEGENERATE_GRID;
    case ErrorCode::BadBracket: return GL_ERR_BAD_BRACKET;
    case ErrorCode::Parse: return GL_ERR_PARSE;
    case ErrorCode::InvalidArgument: return GL_ERR_INVALID_ARGUMENT;
    case ErrorCode::Unsupported: return GL_ERR_UNSUPPORTED;
  }
  return GL_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes at the boundary.
template <class F>
gl_status guard(F&& fn) {
  try {
    fn();
    last_error.clear();
    return GL_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return GL_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) {
    throw Error(ErrorCode::InvalidArgument, what);
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) {
    throw std::bad_alloc();
  }
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

TowerReal tower_in(gl_tower x) { return TowerReal::from_parts(x.level, x.mantissa); }
gl_tower tower_out(const TowerReal& x) { return {x.level(), x.mantissa()}; }

gl_grid grid_out(const GridSpec& g) { return {g.q_anchor, g.t0, g.h, g.J}; }
GridSpec grid_in(const gl_grid* g, const GridSpec& fallback) {
  if (g == nullptr) {
    return fallback;
  }
  GridSpec out{g->q_anchor, g->t0, g->h, g->J};
  out.validate();
  return out;
}

ReportFormat format_in(gl_format f) {
  switch (f) {
    case GL_FORMAT_JSON: return ReportFormat::Json;
    case GL_FORMAT_CSV: return ReportFormat::Csv;
    case GL_FORMAT_TABLE: return ReportFormat::Table;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown output format");
}

gl_verdict verdict_out(const ConvergenceVerdict& v) {
  return {v.k, static_cast<gl_verdict_kind>(v.verdict), v.decay_slope, v.tail_bound.has_value(),
          v.tail_bound.value_or(0.0)};
}

std::string json_grid(const GridSpec& g) {
  std::ostringstream o;
  o << "{\"q_anchor\": " << g.q_anchor << ", \"t0\": " << json_number(g.t0)
    << ", \"h\": " << json_number(g.h) << ", \"J\": " << g.J << "}";
  return o.str();
}

std::string json_indicator(const std::optional<IndicatorEstimate>& e) {
  if (!e) {
    return "null";
  }
  std::ostringstream o;
  o << "{\"value\": " << json_number(e->value) << ", \"envelope_slope\": "
    << json_number(e->envelope_slope) << ", \"spread\": " << json_number(e->spread)
    << ", \"divergent\": " << (e->divergent ? "true" : "false") << "}";
  return o.str();
}

std::string verdict_json(const gl_verdict& v) {
  std::ostringstream o;
  o << "{\"k\": " << json_number(v.k) << ", \"verdict\": \""
    << verdict_name(static_cast<Verdict>(v.verdict)) << "\", \"decay_slope\": "
    << json_number(v.decay_slope)
    << ", \"tail_bound\": " << (v.has_tail_bound ? json_number(v.tail_bound) : "null") << "}";
  return o.str();
}

std::string verdict_csv_row(const gl_verdict& v) {
  return sig17(v.k) + "," + verdict_name(static_cast<Verdict>(v.verdict)) + "," +
         sig17(v.decay_slope) + "," + (v.has_tail_bound ? sig17(v.tail_bound) : "") + "\n";
}

std::string verdict_table_row(const gl_verdict& v) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-14.8g %-14s %-14.8g %s\n", v.k,
                verdict_name(static_cast<Verdict>(v.verdict)), v.decay_slope,
                v.has_tail_bound ? sig17(v.tail_bound).c_str() : "-");
  return buf;
}

constexpr const char* kVerdictHeader = "k,verdict,decay_slope,tail_bound\n";

std::optional<IndicatorEstimate> indicator_of(const gl_indicators& s, gl_indicator_kind kind) {
  switch (kind) {
    case GL_RHO: return s.rho;
    case GL_LAMBDA: return s.lambda;
    case GL_SIGMA: return s.sigma;
    case GL_SIGMA_BAR: return s.sigma_bar;
    case GL_TAU: return s.tau;
    case GL_TAU_BAR: return s.tau_bar;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown indicator kind");
}

constexpr const char* kIndicatorNames[] = {"rho", "lambda", "sigma", "sigma_bar", "tau", "tau_bar"};

}  // namespace

extern "C" {

const char* gl_version(void) { return "0.1.0"; }

const char* gl_status_name(gl_status status) {
  if (status == GL_OK) {
    return "Ok";
  }
  if (status == GL_ERR_INTERNAL) {
    return "InternalError";
  }
  if (status > GL_OK && status < GL_ERR_INTERNAL) {
    return error_code_name(static_cast<ErrorCode>(status - 1));
  }
  return "UnknownStatus";
}

const char* gl_last_error(void) { return last_error.c_str(); }

void gl_string_free(char* s) { std::free(s); }

gl_status gl_tower_from_double(double x, gl_tower* out) {
  return guard([&] {
    require(out != nullptr, "null output");
    *out = tower_out(TowerReal(x));
  });
}

gl_status gl_tower_iter_exp(gl_tower x, int k, gl_tower* out) {
  return guard([&] {
    require(out != nullptr, "null output");
    *out = tower_out(iter_exp(tower_in(x), k));
  });
}

gl_status gl_tower_iter_log(gl_tower x, int k, gl_tower* out) {
  return guard([&] {
    require(out != nullptr, "null output");
    *out = tower_out(iter_log(tower_in(x), k));
  });
}

gl_status gl_tower_to_double(gl_tower x, double* out) {
  return guard([&] {
    require(out != nullptr, "null output");
    *out = to_float(tower_in(x));
  });
}

gl_status gl_tower_log_to_double(gl_tower x, double* out) {
  return guard([&] {
    require(out != nullptr, "null output");
    *out = log_to_float(tower_in(x));
  });
}

gl_status gl_model_parse(const char* literal, gl_model** out) {
  return guard([&] {
    require(literal != nullptr && out != nullptr, "null argument");
    *out = new gl_model{parse_model(literal)};
  });
}

void gl_model_free(gl_model* model) { delete model; }

gl_status gl_model_literal(const gl_model* model, char** out) {
  return guard([&] {
    require(model != nullptr && out != nullptr, "null argument");
    *out = dup_string(model->model.literal());
  });
}

gl_status gl_model_max_modulus(const gl_model* model, gl_tower r, gl_tower* out) {
  return guard([&] {
    require(model != nullptr && out != nullptr, "null argument");
    *out = tower_out(max_modulus(model->model, tower_in(r)));
  });
}

gl_status gl_nevanlinna(const gl_model* model, double r, const double* a, int distinct,
                        gl_nevanlinna_row* out) {
  return guard([&] {
    require(model != nullptr && out != nullptr, "null argument");
    const Target target = a == nullptr ? Target{} : Target{Complex{a[0], a[1]}};
    const auto b = nevanlinna(model->model, r, target, distinct != 0);
    *out = {b.r, b.proximity, b.counting, b.characteristic};
  });
}

gl_status gl_nevanlinna_render(const gl_nevanlinna_row* rows, size_t n, gl_format format,
                               char** out) {
  return guard([&] {
    require((rows != nullptr || n == 0) && out != nullptr, "null argument");
    std::ostringstream o;
    const ReportFormat f = format_in(format);
    if (f == ReportFormat::Json) {
      o << "{\"rows\": [";
      for (size_t i = 0; i < n; ++i) {
        o << (i ? ",\n  " : "\n  ") << "{\"r\": " << json_number(rows[i].r)
          << ", \"m\": " << json_number(rows[i].proximity)
          << ", \"N\": " << json_number(rows[i].counting)
          << ", \"T\": " << json_number(rows[i].characteristic) << "}";
      }
      o << (n ? "\n]}\n" : "]}\n");
    } else if (f == ReportFormat::Csv) {
      o << "r,m,N,T\n";
      for (size_t i = 0; i < n; ++i) {
        o << sig17(rows[i].r) << ',' << sig17(rows[i].proximity) << ','
          << sig17(rows[i].counting) << ',' << sig17(rows[i].characteristic) << '\n';
      }
    } else {
      o << std::left << std::setw(16) << "r" << std::setw(20) << "m" << std::setw(20) << "N"
        << "T\n";
      for (size_t i = 0; i < n; ++i) {
        o << std::setw(16) << sig17(rows[i].r).substr(0, 15) << std::setw(20)
          << std::setprecision(12) << rows[i].proximity << std::setw(20) << rows[i].counting
          << rows[i].characteristic << '\n';
      }
    }
    *out = dup_string(o.str());
  });
}

gl_status gl_scale_parse(const char* literal, gl_scale** out) {
  return guard([&] {
    require(literal != nullptr && out != nullptr, "null argument");
    *out = new gl_scale{parse_scale(literal)};
  });
}

void gl_scale_free(gl_scale* scale) { delete scale; }

gl_status gl_scale_literal(const gl_scale* scale, char** out) {
  return guard([&] {
    require(scale != nullptr && out != nullptr, "null argument");
    *out = dup_string(scale->scale.literal());
  });
}

gl_status gl_scale_eval(const gl_scale* scale, gl_tower x, gl_tower* out) {
  return guard([&] {
    require(scale != nullptr && out != nullptr, "null argument");
    *out = tower_out(scale_eval(scale->scale, tower_in(x)));
  });
}

gl_status gl_scale_inverse(const gl_scale* scale, gl_tower y, gl_tower* out) {
  return guard([&] {
    require(scale != nullptr && out != nullptr, "null argument");
    *out = tower_out(scale_inverse(scale->scale, tower_in(y)));
  });
}

gl_grid gl_default_order_grid(int q) { return grid_out(default_order_grid(q)); }
gl_grid gl_default_type_grid(int q, int oscillating) {
  return grid_out(default_type_grid(q, oscillating != 0));
}
gl_grid gl_default_integral_grid(int oscillating) {
  return grid_out(default_integral_grid(oscillating != 0));
}

gl_status gl_indicators_compute(const gl_scale* alpha, const gl_scale* beta, int p, int q,
                                const gl_grid* order_grid, const gl_grid* type_grid,
                                gl_indicators** out) {
  return guard([&] {
    require(alpha != nullptr && beta != nullptr && out != nullptr, "null argument");
    require(p >= 1 && q >= 1, "p and q must be positive");
    auto set = std::make_unique<gl_indicators>();
    set->alpha = alpha->scale.literal();
    set->beta = beta->scale.literal();
    set->p = p;
    set->q = q;
    set->order_grid = grid_in(order_grid, default_order_grid(q));
    set->type_grid = grid_in(type_grid, default_type_grid(q));
    std::tie(set->rho, set->lambda) =
        rel_order(alpha->scale, beta->scale, p, q, set->order_grid);
    auto usable = [](const IndicatorEstimate& e) {
      return !e.divergent && std::isfinite(e.value) && e.value > 0.0;
    };
    if (usable(set->rho)) {
      std::tie(set->sigma, set->sigma_bar) =
          rel_type(alpha->scale, beta->scale, p, q, set->rho.value, set->type_grid);
    }
    if (usable(set->lambda)) {
      std::tie(set->tau, set->tau_bar) =
          rel_weak_type(alpha->scale, beta->scale, p, q, set->lambda.value, set->type_grid);
    }
    *out = set.release();
  });
}

void gl_indicators_free(gl_indicators* set) { delete set; }

gl_status gl_indicators_get(const gl_indicators* set, gl_indicator_kind kind, gl_indicator* out) {
  return guard([&] {
    require(set != nullptr && out != nullptr, "null argument");
    const auto e = indicator_of(*set, kind);
    if (!e) {
      throw Error(ErrorCode::Unsupported, "type skipped: the order is not in (0, inf)");
    }
    *out = {e->value, e->envelope_slope, e->spread, e->divergent};
  });
}

gl_status gl_indicators_render(const gl_indicators* set, gl_format format, char** out) {
  return guard([&] {
    require(set != nullptr && out != nullptr, "null argument");
    std::ostringstream o;
    const ReportFormat f = format_in(format);
    if (f == ReportFormat::Json) {
      o << "{\n  \"alpha\": " << json_string(set->alpha) << ",\n  \"beta\": "
        << json_string(set->beta) << ",\n  \"p\": " << set->p << ",\n  \"q\": " << set->q
        << ",\n  \"order_grid\": " << json_grid(set->order_grid)
        << ",\n  \"type_grid\": " << json_grid(set->type_grid);
      for (int k = GL_RHO; k <= GL_TAU_BAR; ++k) {
        o << ",\n  \"" << kIndicatorNames[k]
          << "\": " << json_indicator(indicator_of(*set, static_cast<gl_indicator_kind>(k)));
      }
      o << "\n}\n";
    } else if (f == ReportFormat::Csv) {
      o << "indicator,value,envelope_slope,spread,divergent\n";
      for (int k = GL_RHO; k <= GL_TAU_BAR; ++k) {
        const auto e = indicator_of(*set, static_cast<gl_indicator_kind>(k));
        o << kIndicatorNames[k] << ',';
        if (e) {
          o << sig17(e->value) << ',' << sig17(e->envelope_slope) << ',' << sig17(e->spread)
            << ',' << (e->divergent ? "true" : "false");
        } else {
          o << ",,,";
        }
        o << '\n';
      }
    } else {
      o << std::left << std::setw(12) << "indicator" << std::setw(22) << "value" << std::setw(16)
        << "envelope" << std::setw(14) << "spread" << "divergent\n";
      for (int k = GL_RHO; k <= GL_TAU_BAR; ++k) {
        const auto e = indicator_of(*set, static_cast<gl_indicator_kind>(k));
        o << std::setw(12) << kIndicatorNames[k];
        if (e) {
          o << std::setw(22) << std::setprecision(15) << e->value << std::setw(16)
            << std::setprecision(6) << e->envelope_slope << std::setw(14) << e->spread
            << (e->divergent ? "yes" : "no") << '\n';
        } else {
          o << "skipped\n";
        }
      }
    }
    *out = dup_string(o.str());
  });
}

gl_status gl_indicators_series(const gl_indicators* set, char** out) {
  return guard([&] {
    require(set != nullptr && out != nullptr, "null argument");
    std::ostringstream o;
    o << "indicator,t,ratio\n";
    for (int k = GL_RHO; k <= GL_TAU_BAR; ++k) {
      const auto e = indicator_of(*set, static_cast<gl_indicator_kind>(k));
      if (!e) {
        continue;
      }
      const auto t = (k <= GL_LAMBDA ? set->order_grid : set->type_grid).t_values();
      const std::size_t offset = t.size() - e->tail_values.size();
      for (std::size_t i = 0; i < e->tail_values.size(); ++i) {
        o << kIndicatorNames[k] << ',' << sig17(t[offset + i]) << ','
          << sig17(e->tail_values[i]) << '\n';
      }
    }
    *out = dup_string(o.str());
  });
}

gl_status gl_integral_classify(const gl_scale* alpha, const gl_scale* beta, int p, int q,
                               double A, double k, const gl_grid* grid, gl_verdict* out) {
  return guard([&] {
    require(alpha != nullptr && beta != nullptr && out != nullptr, "null argument");
    require(p >= 1 && q >= 1, "p and q must be positive");
    const IntegralSpec spec{alpha->scale, beta->scale, p, q, A};
    *out = verdict_out(classify(spec, k, grid_in(grid, default_integral_grid())));
  });
}

gl_status gl_verdict_render(const gl_verdict* verdict, gl_format format, char** out) {
  return guard([&] {
    require(verdict != nullptr && out != nullptr, "null argument");
    const ReportFormat f = format_in(format);
    if (f == ReportFormat::Json) {
      *out = dup_string(verdict_json(*verdict) + "\n");
    } else if (f == ReportFormat::Csv) {
      *out = dup_string(kVerdictHeader + verdict_csv_row(*verdict));
    } else {
      *out = dup_string(std::string("k              verdict        decay_slope    tail_bound\n") +
                        verdict_table_row(*verdict));
    }
  });
}

gl_status gl_integral_transition(const gl_scale* alpha, const gl_scale* beta, int p, int q,
                                 double A, double k_lo, double k_hi, double tol,
                                 const gl_grid* grid, gl_transition** out) {
  return guard([&] {
    require(alpha != nullptr && beta != nullptr && out != nullptr, "null argument");
    require(p >= 1 && q >= 1, "p and q must be positive");
    require(tol > 0.0, "tolerance must be positive");
    const IntegralSpec spec{alpha->scale, beta->scale, p, q, A};
    *out = new gl_transition{
        transition(spec, {k_lo, k_hi}, tol, grid_in(grid, default_integral_grid()))};
  });
}

void gl_transition_free(gl_transition* t) { delete t; }

gl_status gl_transition_bracket(const gl_transition* t, double* k_lo, double* k_hi,
                                int* indeterminate_limited) {
  return guard([&] {
    require(t != nullptr, "null argument");
    if (k_lo) *k_lo = t->result.k_lo;
    if (k_hi) *k_hi = t->result.k_hi;
    if (indeterminate_limited) *indeterminate_limited = t->result.indeterminate_limited;
  });
}

size_t gl_transition_size(const gl_transition* t) {
  return t == nullptr ? 0 : t->result.verdict_table.size();
}

gl_status gl_transition_verdict(const gl_transition* t, size_t i, gl_verdict* out) {
  return guard([&] {
    require(t != nullptr && out != nullptr, "null argument");
    require(i < t->result.verdict_table.size(), "verdict index out of range");
    *out = verdict_out(t->result.verdict_table[i]);
  });
}

gl_status gl_transition_render(const gl_transition* t, gl_format format, char** out) {
  return guard([&] {
    require(t != nullptr && out != nullptr, "null argument");
    const auto& r = t->result;
    std::ostringstream o;
    const ReportFormat f = format_in(format);
    if (f == ReportFormat::Json) {
      o << "{\n  \"k_lo\": " << json_number(r.k_lo) << ",\n  \"k_hi\": " << json_number(r.k_hi)
        << ",\n  \"indeterminate_limited\": " << (r.indeterminate_limited ? "true" : "false")
        << ",\n  \"verdicts\": [";
      for (std::size_t i = 0; i < r.verdict_table.size(); ++i) {
        o << (i ? ",\n    " : "\n    ") << verdict_json(verdict_out(r.verdict_table[i]));
      }
      o << (r.verdict_table.empty() ? "]\n}\n" : "\n  ]\n}\n");
    } else if (f == ReportFormat::Csv) {
      // The (k, verdict) series; the bracket is its Diverges/Converges edge.
      o << kVerdictHeader;
      for (const auto& v : r.verdict_table) {
        o << verdict_csv_row(verdict_out(v));
      }
    } else {
      o << "bracket [" << sig17(r.k_lo) << ", " << sig17(r.k_hi) << "]"
        << (r.indeterminate_limited ? " (limited by Indeterminate verdicts)" : "") << "\n";
      o << "k              verdict        decay_slope    tail_bound\n";
      for (const auto& v : r.verdict_table) {
        o << verdict_table_row(verdict_out(v));
      }
    }
    *out = dup_string(o.str());
  });
}

gl_status gl_lemma_ratio(const gl_scale* alpha, const gl_scale* beta, int p, int q, double A,
                         double k, const gl_grid* grid, gl_lemma_behavior* out) {
  return guard([&] {
    require(alpha != nullptr && beta != nullptr && out != nullptr, "null argument");
    require(p >= 1 && q >= 1, "p and q must be positive");
    const IntegralSpec spec{alpha->scale, beta->scale, p, q, A};
    *out = static_cast<gl_lemma_behavior>(
        lemma_ratio(spec, k, grid_in(grid, default_integral_grid())));
  });
}

gl_status gl_verify_run(const char* config_text, gl_report** out) {
  return guard([&] {
    require(out != nullptr, "null argument");
    const auto config = parse_suite_config(config_text == nullptr ? "" : config_text);
    *out = new gl_report{run_suite(config)};
  });
}

void gl_report_free(gl_report* report) { delete report; }

int gl_report_gates_pass(const gl_report* report) {
  return report != nullptr && report->report.gates_pass();
}

size_t gl_report_rows(const gl_report* report) {
  return report == nullptr ? 0 : report->report.rows.size();
}

gl_status gl_report_render(const gl_report* report, gl_format format, char** out) {
  return guard([&] {
    require(report != nullptr && out != nullptr, "null argument");
    *out = dup_string(render_report(report->report, format_in(format)));
  });
}

gl_status gl_catalog_render(gl_format format, char** out) {
  return guard([&] {
    require(out != nullptr, "null argument");
    *out = dup_string(render_catalog(format_in(format)));
  });
}

}  // extern "C"
