#pragma once

#include "growthlab/models.hpp"

namespace growthlab {

/// m, N and T at one radius; characteristic == proximity + counting.
struct NevanlinnaBreakdown {
  double proximity = 0.0;
  double counting = 0.0;
  double characteristic = 0.0;
  double r = 0.0;
  Target a;
};

/// m_f(r, a): circle mean of log+|f| (a = infinity) or log+ 1/|f - a|.
/// Periodic trapezoidal rule with node doubling from 256 nodes until two
/// successive estimates agree to 1e-10 (absolute or relative); cells around
/// near-singular nodes are integrated adaptively.
double proximity(const FunctionModel& model, double r, Target a = std::nullopt);

/// N_f(r, a) as a finite sum over the jump radii of n_f(t, a).
double counting(const FunctionModel& model, double r, Target a = std::nullopt,
                bool distinct = false);

/// T_f(r) = m_f(r) + N_f(r); counting is skipped for entire models.
double characteristic(const FunctionModel& model, double r);

NevanlinnaBreakdown nevanlinna(const FunctionModel& model, double r, Target a = std::nullopt,
                               bool distinct = false);

}  // namespace growthlab
