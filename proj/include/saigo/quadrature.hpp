#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace saigo::quad {

/// Nodes and weights on [-1, 1] for the weight (1 - x)^a (1 + x)^b.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Jacobi rule (Golub-Welsch). Requires a, b > -1.
GaussRule gauss_jacobi(int n, double a, double b);

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Smooth factor of an integrand on [0, 1]. Receives u and 1 - u separately so
/// callers keep full relative precision near either endpoint.
using UnitIntegrand = std::function<double(double u, double one_minus_u)>;

struct UnitIntegralOptions {
  int order = 60;
  double tol = 1e-9;
  int max_depth = 40;
  std::size_t max_evaluations = 2'000'000;
};

/// Integral over [lo, hi] of u^p (1 - u)^q f(u), with 0 <= lo < hi <= 1.
///
/// When the interval touches 0 (resp. 1) the power u^p (resp. (1-u)^q) is
/// absorbed into a Jacobi weight; elsewhere it is multiplied into f. Each
/// panel is accepted once its order-n and order-2n values agree to tol
/// (relative to the first whole-interval estimate); otherwise it is bisected.
/// Throws AccuracyError when the target is missed because max_depth or
/// max_evaluations ran out, or because panel errors hit rounding noise.
QuadratureResult integrate_unit(const UnitIntegrand& f, double p, double q, double lo, double hi,
                                const UnitIntegralOptions& opts = {});

}  // namespace saigo::quad
