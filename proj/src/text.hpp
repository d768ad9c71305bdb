#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

namespace growthlab::detail {

// Shortest round-trip form, used inside literals.
inline std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Report numbers: 17 significant digits so the text round-trips exactly.
inline std::string sig17(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string complex_literal(std::complex<double> z) {
  if (z.imag() == 0.0) {
    return shortest(z.real());
  }
  std::string im = z.imag() == 1.0 ? "" : z.imag() == -1.0 ? "-" : shortest(z.imag());
  if (z.real() == 0.0) {
    return im + "i";
  }
  if (im.empty() || im.front() != '-') {
    im.insert(im.begin(), '+');
  }
  return shortest(z.real()) + im + "i";
}

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

// JSON has no inf/nan; they go out as strings.
inline std::string json_number(double v) {
  return std::isfinite(v) ? sig17(v) : json_string(sig17(v));
}

}  // namespace growthlab::detail
