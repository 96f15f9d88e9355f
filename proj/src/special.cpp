#include "saigo/special.hpp"

#include <math.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "saigo/errors.hpp"

namespace saigo::special {

namespace {

[[noreturn]] void throw_pole(const char* where, double x) {
  std::ostringstream os;
  os.precision(17);
  os << where << ": argument " << x << " is a pole (nonpositive integer " << std::nearbyint(x)
     << ")";
  throw DomainError(os.str());
}

}  // namespace

bool near_nonpositive_integer(double x, double tol) {
  if (x > tol) return false;
  return std::abs(x - std::nearbyint(x)) <= tol;
}

double LogGammaValue::value() const { return sign * std::exp(log_abs); }

LogGammaValue log_gamma(double x) {
  if (std::isnan(x)) throw DomainError("log_gamma: argument is NaN");
  if (near_nonpositive_integer(x)) throw_pole("log_gamma", x);
  // lgammal_r keeps the sign out of the global signgam and carries extra
  // precision, so log_abs is correctly rounded to double for |x| <= 170.
  int sign = 1;
  const long double la = ::lgammal_r(static_cast<long double>(x), &sign);
  return {static_cast<double>(la), sign < 0 ? -1 : 1};
}

double gamma(double x) { return log_gamma(x).value(); }

double reciprocal_gamma(double x) {
  if (near_nonpositive_integer(x)) return 0.0;
  const auto lg = log_gamma(x);
  return lg.sign * std::exp(-lg.log_abs);
}

double k_gamma(KGammaParams p) {
  if (!(p.k > 0.0)) throw DomainError("k_gamma: k must be positive");
  const double s = p.z / p.k;
  if (near_nonpositive_integer(s)) throw_pole("k_gamma (z/k)", s);
  const auto lg = log_gamma(s);
  return lg.sign * std::exp((s - 1.0) * std::log(p.k) + lg.log_abs);
}

double pochhammer(double z, std::uint32_t n) {
  if (n == 0) return 1.0;
  const bool exact_pole = z <= 0.0 && z == std::nearbyint(z);
  if (exact_pole && static_cast<double>(n) > -z) return 0.0;
  constexpr std::uint32_t kDirectLimit = 64;
  if (n <= kDirectLimit || exact_pole || near_nonpositive_integer(z) ||
      near_nonpositive_integer(z + n)) {
    double p = 1.0;
    for (std::uint32_t i = 0; i < n; ++i) p *= z + static_cast<double>(i);
    return p;
  }
  return GammaRatio{}.numerator(z + n).denominator(z).value();
}

double beta_fn(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) {
    std::ostringstream os;
    os << "beta_fn: arguments must be positive, got (" << x << ", " << y << ")";
    throw DomainError(os.str());
  }
  // Symmetric in (x, y): floating-point addition commutes.
  return std::exp(log_gamma(x).log_abs + log_gamma(y).log_abs - log_gamma(x + y).log_abs);
}

GammaRatio& GammaRatio::numerator(double x) {
  const auto lg = log_gamma(x);
  log_abs_ += lg.log_abs;
  sign_ *= lg.sign;
  return *this;
}

GammaRatio& GammaRatio::denominator(double x) {
  if (near_nonpositive_integer(x)) {
    zero_ = true;
    return *this;
  }
  const auto lg = log_gamma(x);
  log_abs_ -= lg.log_abs;
  sign_ *= lg.sign;
  return *this;
}

GammaRatio& GammaRatio::times(double factor) {
  if (factor == 0.0) {
    zero_ = true;
    return *this;
  }
  log_abs_ += std::log(std::abs(factor));
  if (factor < 0.0) sign_ = -sign_;
  return *this;
}

double GammaRatio::value() const {
  if (zero_) return 0.0;
  return sign_ * std::exp(log_abs_);
}

}  // namespace saigo::special
