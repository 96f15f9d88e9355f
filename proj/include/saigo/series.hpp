#pragma once

#include <cstddef>
#include <vector>

namespace saigo::series {

/// Hard cap on the number of terms any series may use.
inline constexpr std::size_t kMaxTerms = 10000;

/// Result of a truncated series. `trunc_estimate` is an absolute estimate of
/// the discarded tail; when `converged` it is at most tol * max(1, |value|).
struct SeriesValue {
  double value = 0.0;
  std::size_t terms_used = 0;
  double trunc_estimate = 0.0;
  bool converged = false;
};

/// pFq(upper; lower; z) scaled by `prefactor`.
struct HypergeomSpec {
  std::vector<double> upper;
  std::vector<double> lower;
  double prefactor = 1.0;
};

/// One Fox-Wright parameter pair: Gamma(coeff + step * n).
struct WrightPair {
  double coeff = 0.0;
  double step = 1.0;
};

struct WrightSpec {
  std::vector<WrightPair> upper;
  std::vector<WrightPair> lower;
};

/// Parameters of the generalized k-Bessel function W^k_{v,c}.
struct KBesselParams {
  double v = 0.0;
  double c = 1.0;
  double k = 1.0;
};

SeriesValue eval_pfq(const HypergeomSpec& spec, double z, double tol);

/// 2F1(a, b; c; 1) by Gauss summation. Requires c - a - b > 0.
double gauss_2f1_at_1(double a, double b, double c);

/// Delta = 1 + sum(lower steps) - sum(upper steps).
double wright_convergence_index(const WrightSpec& spec);

/// Radius of convergence prod A_i^{-A_i} prod B_j^{B_j}; meaningful for Delta = 0.
double wright_radius(const WrightSpec& spec);

SeriesValue eval_wright(const WrightSpec& spec, double z, double tol);

/// W^k_{v,c}(z) for z >= 0 (or any real z when v/k is an integer).
SeriesValue eval_k_bessel(const KBesselParams& p, double z, double tol);

/// W^k_{v,c}(z) / z^{v/k}: the entire factor left after pulling out the
/// fractional power. Defined for all real z.
SeriesValue eval_k_bessel_regular(const KBesselParams& p, double z, double tol);

}  // namespace saigo::series
