#include "growthlab/literal.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <string>

#include "growthlab/errors.hpp"

namespace growthlab {

namespace {

[[noreturn]] void fail(std::string_view text, std::size_t pos, const std::string& what) {
  throw Error(ErrorCode::Parse, what + " at position " + std::to_string(pos) + " in '" +
                                    std::string(text) + "'");
}

double parse_real(std::string_view s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') {
    ++first;
  }
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v)) {
    throw Error(ErrorCode::Parse, "bad number '" + std::string(s) + "'");
  }
  return v;
}

int parse_int(std::string_view s) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::Parse, "bad integer '" + std::string(s) + "'");
  }
  return v;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  FunctionModel model() {
    const std::string name = ident();
    expect('(');
    if (name == "poly") {
      std::vector<Complex> cs;
      do {
        cs.push_back(complex_token());
      } while (accept(','));
      expect(')');
      return FunctionModel::polynomial(std::move(cs));
    }
    if (name == "exppow") {
      auto kv = keyed({"c", "n"}, {"c", "n"});
      return FunctionModel::exp_power(parse_real(kv["c"]), parse_int(kv["n"]));
    }
    if (name == "exptower") {
      auto kv = keyed({"k"}, {"k"});
      return FunctionModel::exp_tower(parse_int(kv["k"]));
    }
    if (name == "rat") {
      std::vector<Complex> zeros;
      std::vector<Complex> poles;
      Complex scale{1.0, 0.0};
      bool seen_zeros = false;
      bool seen_poles = false;
      do {
        const std::string key = ident();
        expect('=');
        if (key == "zeros" && !seen_zeros) {
          zeros = list();
          seen_zeros = true;
        } else if (key == "poles" && !seen_poles) {
          poles = list();
          seen_poles = true;
        } else if (key == "scale") {
          scale = complex_token();
        } else {
          fail(text_, pos_, "unexpected key '" + key + "'");
        }
      } while (accept(';'));
      expect(')');
      return FunctionModel::rational(std::move(zeros), std::move(poles), scale);
    }
    if (name == "sum" || name == "prod") {
      FunctionModel left = model();
      expect(',');
      FunctionModel right = model();
      expect(')');
      return name == "sum" ? FunctionModel::sum(std::move(left), std::move(right))
                           : FunctionModel::product(std::move(left), std::move(right));
    }
    fail(text_, pos_, "unknown model '" + name + "'");
  }

  GrowthScale scale() {
    const std::string name = ident();
    if (name == "exp" || (name == "sinlog" && !peek('('))) {
      return name == "exp" ? GrowthScale::exp() : GrowthScale::sin_log();
    }
    expect('(');
    if (name == "iter") {
      auto kv = keyed({"m", "n", "a", "c", "x0"}, {"m", "n", "a", "c"});
      GrowthScale s = GrowthScale::iterated(parse_int(kv["m"]), parse_int(kv["n"]),
                                            parse_real(kv["a"]), parse_real(kv["c"]));
      return kv.count("x0") ? s.with_domain_start(parse_real(kv["x0"])) : s;
    }
    if (name == "sinlog") {
      auto kv = keyed({"x0"}, {"x0"});
      return GrowthScale::sin_log().with_domain_start(parse_real(kv["x0"]));
    }
    if (name == "maxmod" || name == "charac") {
      FunctionModel m = model();
      std::optional<double> x0;
      if (accept(',')) {
        if (ident() != "x0") {
          fail(text_, pos_, "expected x0");
        }
        expect('=');
        x0 = parse_real(token());
      }
      expect(')');
      GrowthScale s = name == "maxmod" ? GrowthScale::max_modulus_of(std::move(m))
                                       : GrowthScale::characteristic_of(std::move(m));
      return x0 ? s.with_domain_start(*x0) : s;
    }
    if (name == "tab") {
      std::vector<double> xs;
      std::vector<double> ys;
      do {
        const std::string_view pair = token();
        const auto colon = pair.find(':');
        if (colon == std::string_view::npos) {
          fail(text_, pos_, "expected x:y sample");
        }
        xs.push_back(parse_real(pair.substr(0, colon)));
        ys.push_back(parse_real(pair.substr(colon + 1)));
      } while (accept(','));
      expect(')');
      return GrowthScale::tabulated(std::move(xs), std::move(ys));
    }
    fail(text_, pos_, "unknown scale '" + name + "'");
  }

  void finish() {
    skip_space();
    if (pos_ != text_.size()) {
      fail(text_, pos_, "trailing characters");
    }
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      fail(text_, pos_, std::string("expected '") + c + "'");
    }
  }

  std::string ident() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) {
      fail(text_, pos_, "expected a name");
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  // Raw text up to the next delimiter.
  std::string_view token() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::string_view(",;()[]=").find(text_[pos_]) == std::string_view::npos) {
      ++pos_;
    }
    std::string_view t = text_.substr(start, pos_ - start);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) {
      t.remove_suffix(1);
    }
    if (t.empty()) {
      fail(text_, pos_, "expected a value");
    }
    return t;
  }

  Complex complex_token() {
    const std::size_t at = pos_;
    try {
      return parse_complex(token());
    } catch (const Error& e) {
      fail(text_, at, e.what());
    }
  }

  std::vector<Complex> list() {
    expect('[');
    std::vector<Complex> out;
    if (accept(']')) {
      return out;
    }
    do {
      out.push_back(complex_token());
    } while (accept(','));
    expect(']');
    return out;
  }

  std::map<std::string, std::string> keyed(std::initializer_list<const char*> allowed,
                                           std::initializer_list<const char*> required) {
    std::map<std::string, std::string> kv;
    do {
      const std::string key = ident();
      bool ok = false;
      for (const char* a : allowed) {
        ok = ok || key == a;
      }
      if (!ok || kv.count(key)) {
        fail(text_, pos_, "unexpected key '" + key + "'");
      }
      expect('=');
      kv[key] = std::string(token());
    } while (accept(','));
    expect(')');
    for (const char* r : required) {
      if (!kv.count(r)) {
        fail(text_, pos_, std::string("missing key '") + r + "'");
      }
    }
    return kv;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Complex parse_complex(std::string_view s) {
  if (s.empty()) {
    throw Error(ErrorCode::Parse, "empty complex literal");
  }
  if (s.back() != 'i') {
    return {parse_real(s), 0.0};
  }
  s.remove_suffix(1);
  // Split at the last sign that is not an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const std::string_view re = split == std::string_view::npos ? std::string_view{} : s.substr(0, split);
  const std::string_view im = split == std::string_view::npos ? s : s.substr(split);
  double imag = 0.0;
  if (im.empty() || im == "+") {
    imag = 1.0;
  } else if (im == "-") {
    imag = -1.0;
  } else {
    imag = parse_real(im);
  }
  return {re.empty() ? 0.0 : parse_real(re), imag};
}

FunctionModel parse_model(std::string_view text) {
  Parser p(text);
  FunctionModel m = p.model();
  p.finish();
  return m;
}

GrowthScale parse_scale(std::string_view text) {
  Parser p(text);
  GrowthScale s = p.scale();
  p.finish();
  return s;
}

}  // namespace growthlab
