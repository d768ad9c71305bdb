#pragma once

#include <string_view>

#include "growthlab/models.hpp"
#include "growthlab/scales.hpp"

namespace growthlab {

/// Model grammar:
///   poly(c0,c1,...)                  ascending complex coefficients (1, 2i, 1-3i)
///   exppow(c=<real>,n=<int>)         exp(c z^n)
///   exptower(k=<int>)                exp^[k](z)
///   rat(zeros=[..];poles=[..];scale=<complex>)
///   sum(<model>,<model>) | prod(<model>,<model>)
/// Throws Parse on malformed input, InvalidArgument on invalid parameters.
FunctionModel parse_model(std::string_view text);

/// Scale grammar:
///   iter(m=<int>,n=<int>,a=<real>,c=<real>[,x0=<real>])   exp | sinlog[(x0=<real>)]
///   maxmod(<model>[,x0=<real>]) | charac(<model>[,x0=<real>])
///   tab(x:y,x:y,...)
GrowthScale parse_scale(std::string_view text);

/// "1", "-2.5", "3i", "-i", "1-3i", "2e-3+4i".
Complex parse_complex(std::string_view text);

}  // namespace growthlab
