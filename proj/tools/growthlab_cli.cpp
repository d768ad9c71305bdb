// Command-line front end. Talks to the library only through growthlab.h.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "growthlab/growthlab.h"

namespace {

enum Exit { kOk = 0, kGateFailure = 1, kDomain = 2, kUsage = 3 };

// Carries an exit code and a one-line diagnostic up to main.
struct Failure {
  int code;
  std::string message;
};

int exit_for(gl_status s) {
  return s == GL_ERR_PARSE || s == GL_ERR_INVALID_ARGUMENT ? kUsage : kDomain;
}

void check(gl_status s, const std::string& context) {
  if (s != GL_OK) {
    throw Failure{exit_for(s), context + ": " + gl_last_error()};
  }
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Scale = std::unique_ptr<gl_scale, Deleter<gl_scale, gl_scale_free>>;
using Model = std::unique_ptr<gl_model, Deleter<gl_model, gl_model_free>>;
using Indicators = std::unique_ptr<gl_indicators, Deleter<gl_indicators, gl_indicators_free>>;
using Transition = std::unique_ptr<gl_transition, Deleter<gl_transition, gl_transition_free>>;
using Report = std::unique_ptr<gl_report, Deleter<gl_report, gl_report_free>>;

std::string take_string(char* s) {
  std::string out(s);
  gl_string_free(s);
  return out;
}

Scale parse_scale(const std::string& literal, const char* flag) {
  gl_scale* s = nullptr;
  check(gl_scale_parse(literal.c_str(), &s), flag);
  return Scale(s);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    parts.push_back(item);
  }
  return parts;
}

double to_number(const std::string& s, const char* flag) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) {
      return v;
    }
  } catch (const std::exception&) {
  }
  throw Failure{kUsage, std::string(flag) + ": bad number '" + s + "'"};
}

std::pair<double, double> parse_krange(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) {
    throw Failure{kUsage, "--krange expects lo:hi"};
  }
  return {to_number(parts[0], "--krange"), to_number(parts[1], "--krange")};
}

// t0:h:J on top of a default grid, keeping its anchor, or anchor:t0:h:J.
gl_grid apply_grid(gl_grid base, const std::string& s) {
  auto parts = split(s, ':');
  if (parts.size() == 4) {
    base.q_anchor = static_cast<int>(to_number(parts[0], "--grid"));
    parts.erase(parts.begin());
  }
  if (parts.size() != 3) {
    throw Failure{kUsage, "--grid expects t0:h:J or anchor:t0:h:J"};
  }
  base.t0 = to_number(parts[0], "--grid");
  base.h = to_number(parts[1], "--grid");
  base.J = static_cast<int>(to_number(parts[2], "--grid"));
  return base;
}

gl_format parse_format(const std::string& s) {
  if (s == "json") return GL_FORMAT_JSON;
  if (s == "csv") return GL_FORMAT_CSV;
  if (s == "table") return GL_FORMAT_TABLE;
  throw Failure{kUsage, "--format must be json, csv or table"};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Failure{kUsage, "cannot read config '" + path + "'"};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Flat key=value lines with # comments.
std::map<std::string, std::string> parse_flat(const std::string& text) {
  std::map<std::string, std::string> kv;
  int line_no = 0;
  for (std::string line : split(text, '\n')) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Failure{kUsage, "config line " + std::to_string(line_no) + ": expected key=value"};
    }
    auto trim = [](std::string s) {
      const auto first = s.find_first_not_of(" \t\r");
      const auto last = s.find_last_not_of(" \t\r");
      return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

struct Options {
  std::string format = "json";
  std::string out;
  std::string config;
  bool stamp = false;

  std::string alpha, beta, model, krange, grid, r;
  int p = 0, q = 0;  // 0: per-command default
  double A = 1.0, k = 0.0, tol = 0.05;
  bool series = false;
};

// Fills options the command line left unset from the config file.
void apply_config(CLI::App& sub, Options& o) {
  if (o.config.empty()) {
    return;
  }
  for (const auto& [key, value] : parse_flat(read_file(o.config))) {
    CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw Failure{kUsage, "config key '" + key + "' does not apply to '" + sub.get_name() + "'"};
    }
    if (opt->count() == 0) {
      try {
        opt->add_result(value);
        opt->run_callback();
      } catch (const CLI::ParseError& e) {
        throw Failure{kUsage, "config key '" + key + "': " + e.what()};
      }
    }
  }
}

void require_set(const std::string& value, const char* flag) {
  if (value.empty()) {
    throw Failure{kUsage, std::string(flag) + " is required"};
  }
}

std::string cmd_indicators(const Options& o) {
  require_set(o.alpha, "--alpha");
  require_set(o.beta, "--beta");
  const Scale alpha = parse_scale(o.alpha, "--alpha");
  const Scale beta = parse_scale(o.beta, "--beta");
  gl_grid order = gl_default_order_grid(o.q);
  gl_grid type = gl_default_type_grid(o.q, 0);
  if (!o.grid.empty()) {
    order = apply_grid(order, o.grid);
    type = apply_grid(type, o.grid);
  }
  gl_indicators* raw = nullptr;
  check(gl_indicators_compute(alpha.get(), beta.get(), o.p, o.q, &order, &type, &raw),
        "indicators");
  const Indicators set(raw);
  char* text = nullptr;
  if (o.series) {
    check(gl_indicators_series(set.get(), &text), "indicators");
  } else {
    check(gl_indicators_render(set.get(), parse_format(o.format), &text), "indicators");
  }
  return take_string(text);
}

std::string cmd_integral(const Options& o, bool transition) {
  require_set(o.alpha, "--alpha");
  require_set(o.beta, "--beta");
  const Scale alpha = parse_scale(o.alpha, "--alpha");
  const Scale beta = parse_scale(o.beta, "--beta");
  const gl_format format = parse_format(o.format);
  gl_grid grid = gl_default_integral_grid(0);
  if (!o.grid.empty()) {
    grid = apply_grid(grid, o.grid);
  }
  char* text = nullptr;
  if (transition) {
    require_set(o.krange, "--krange");
    const auto [lo, hi] = parse_krange(o.krange);
    gl_transition* raw = nullptr;
    check(gl_integral_transition(alpha.get(), beta.get(), o.p, o.q, o.A, lo, hi, o.tol, &grid,
                                 &raw),
          "transition");
    const Transition t(raw);
    check(gl_transition_render(t.get(), format, &text), "transition");
  } else {
    gl_verdict v{};
    check(gl_integral_classify(alpha.get(), beta.get(), o.p, o.q, o.A, o.k, &grid, &v),
          "classify");
    check(gl_verdict_render(&v, format, &text), "classify");
  }
  return take_string(text);
}

std::string cmd_nevanlinna(const Options& o) {
  require_set(o.model, "--model");
  require_set(o.r, "--r");
  gl_model* raw = nullptr;
  check(gl_model_parse(o.model.c_str(), &raw), "--model");
  const Model model(raw);
  std::vector<gl_nevanlinna_row> rows;
  for (const auto& item : split(o.r, ',')) {
    gl_nevanlinna_row row{};
    check(gl_nevanlinna(model.get(), to_number(item, "--r"), nullptr, 0, &row), "nevanlinna");
    rows.push_back(row);
  }
  char* text = nullptr;
  check(gl_nevanlinna_render(rows.data(), rows.size(), parse_format(o.format), &text),
        "nevanlinna");
  return take_string(text);
}

std::string cmd_verify(const Options& o, const CLI::App& sub, bool& gates_pass) {
  std::string config = o.config.empty() ? std::string() : read_file(o.config);
  if (sub.get_option("--tol")->count() > 0) {
    // Later keys win, so the flag overrides the file.
    char line[64];
    std::snprintf(line, sizeof line, "\ntol.regular=%.17g\n", o.tol);
    config += line;
  }
  gl_report* raw = nullptr;
  check(gl_verify_run(config.c_str(), &raw), "verify");
  const Report report(raw);
  gates_pass = gl_report_gates_pass(report.get()) != 0;
  char* text = nullptr;
  check(gl_report_render(report.get(), parse_format(o.format), &text), "verify");
  return take_string(text);
}

std::string cmd_catalog(const Options& o) {
  char* text = nullptr;
  check(gl_catalog_render(parse_format(o.format), &text), "catalog");
  return take_string(text);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file || !(file << text)) {
    throw Failure{kDomain, "cannot write '" + o.out + "'"};
  }
}

void stamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  std::fprintf(stderr, "# generated %s by growthlab %s\n", buf, gl_version());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative growth indicators, integral transitions and Nevanlinna tables"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "json | csv | table")->capture_default_str();
    sub->add_option("--out", o.out, "write output to a file instead of stdout");
    sub->add_option("--config", o.config, "flat key=value file; flags win over its values");
    sub->add_flag("--stamp", o.stamp, "print a timestamp line on stderr");
  };
  auto add_pair = [&](CLI::App* sub) {
    sub->add_option("--alpha", o.alpha, "scale literal");
    sub->add_option("--beta", o.beta, "scale literal");
    sub->add_option("--p", o.p, "index p")->check(CLI::PositiveNumber);
    sub->add_option("--q", o.q, "index q")->check(CLI::PositiveNumber);
    sub->add_option("--grid", o.grid, "grid override t0:h:J or anchor:t0:h:J");
  };

  auto* indicators = app.add_subcommand("indicators", "rho, lambda and the four types");
  add_common(indicators);
  add_pair(indicators);
  indicators->add_flag("--series", o.series, "CSV of the tail ratio series for plotting");

  auto* integral = app.add_subcommand("integral", "integral representation");
  integral->require_subcommand(1);
  auto* classify = integral->add_subcommand("classify", "verdict at one exponent");
  auto* transition = integral->add_subcommand("transition", "bracket the critical exponent");
  for (auto* sub : {classify, transition}) {
    add_common(sub);
    add_pair(sub);
    sub->add_option("--A", o.A, "exponent A of the denominator");
  }
  classify->add_option("--k", o.k, "exponent k");
  transition->add_option("--krange", o.krange, "lo:hi");
  transition->add_option("--tol", o.tol, "bracket width")->capture_default_str();

  auto* nevanlinna = app.add_subcommand("nevanlinna", "m, N and T of a model");
  add_common(nevanlinna);
  nevanlinna->add_option("--model", o.model, "model literal");
  nevanlinna->add_option("--r", o.r, "radius or comma-separated radii");

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  add_common(verify);
  verify->add_option("--tol", o.tol, "override the regular-pair tolerance");

  auto* catalog = app.add_subcommand("catalog", "grammar and standard pairs");
  add_common(catalog);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    if (active == integral) {
      active = integral->get_subcommands().front();
    }
    if (active != verify) {
      apply_config(*active, o);
    }
    const int default_pq = active == indicators ? 1 : 2;
    o.p = o.p == 0 ? default_pq : o.p;
    o.q = o.q == 0 ? default_pq : o.q;
    if (o.stamp) {
      stamp();
    }
    std::string text;
    int code = kOk;
    if (active == indicators) {
      text = cmd_indicators(o);
    } else if (active == classify || active == transition) {
      if (active == classify && classify->get_option("--k")->count() == 0) {
        throw Failure{kUsage, "--k is required"};
      }
      text = cmd_integral(o, active == transition);
    } else if (active == nevanlinna) {
      text = cmd_nevanlinna(o);
    } else if (active == verify) {
      bool pass = false;
      text = cmd_verify(o, *verify, pass);
      code = pass ? kOk : kGateFailure;
    } else {
      text = cmd_catalog(o);
    }
    emit(o, text);
    return code;
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return f.code;
  }
}
