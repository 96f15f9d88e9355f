#pragma once

#include <cstdint>

namespace saigo::special {

/// Arguments closer than this to 0, -1, -2, ... are treated as gamma poles.
inline constexpr double kPoleTolerance = 1e-9;

/// True if x lies within `tol` of a nonpositive integer.
bool near_nonpositive_integer(double x, double tol = kPoleTolerance);

/// |Gamma(x)| in log form plus its sign.
struct LogGammaValue {
  double log_abs = 0.0;
  int sign = 1;

  double value() const;
};

/// log|Gamma(x)| and sign(Gamma(x)). Throws DomainError at poles.
LogGammaValue log_gamma(double x);

double gamma(double x);

/// 1/Gamma(x); entire, so poles map to 0.
double reciprocal_gamma(double x);

struct KGammaParams {
  double z = 0.0;
  double k = 1.0;
};

/// Gamma_k(z) = k^{z/k - 1} Gamma(z/k).
double k_gamma(KGammaParams p);

/// Rising factorial (z)_n.
double pochhammer(double z, std::uint32_t n);

/// B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y) for x, y > 0.
double beta_fn(double x, double y);

/// Accumulates a product of gamma functions and reciprocal gamma functions in
/// the log domain, so ratios of many gammas never overflow in the middle.
///
/// A pole in a numerator factor is a domain error. A pole in a denominator
/// factor makes the whole ratio exactly zero (1/Gamma is entire).
class GammaRatio {
 public:
  GammaRatio& numerator(double x);
  GammaRatio& denominator(double x);
  /// Multiplies by a plain real factor.
  GammaRatio& times(double factor);

  bool is_zero() const noexcept { return zero_; }
  double log_abs() const noexcept { return log_abs_; }
  int sign() const noexcept { return zero_ ? 0 : sign_; }
  double value() const;

 private:
  double log_abs_ = 0.0;
  int sign_ = 1;
  bool zero_ = false;
};

}  // namespace saigo::special
