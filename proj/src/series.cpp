#include "saigo/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "saigo/errors.hpp"
#include "saigo/special.hpp"

namespace saigo::series {

namespace {

constexpr double kTiny = std::numeric_limits<double>::min();

// Running sum with the stopping rule shared by every series here: stop once
// three consecutive terms are below tol * |partial sum| and the geometric
// tail estimate agrees.
class Accumulator {
 public:
  explicit Accumulator(double tol) : tol_(tol) {}

  // Returns true when the series may stop after this term.
  bool add(double term, bool may_stop = true) {
    sum_ += term;
    ++terms_;
    const double mag = std::abs(term);
    if (mag != 0.0 && last_nonzero_ != 0.0) ratio_ = mag / last_nonzero_;
    if (mag != 0.0) last_nonzero_ = mag;
    last_ = mag;
    const double scale = std::abs(sum_);
    if (mag <= tol_ * scale) {
      ++small_run_;
    } else {
      small_run_ = 0;
    }
    return may_stop && small_run_ >= 3 && tail() <= tol_ * std::max(scale, kTiny);
  }

  double tail() const {
    if (last_ == 0.0) return 0.0;
    if (ratio_ < 1.0) return last_ * ratio_ / (1.0 - ratio_);
    return last_;
  }

  SeriesValue result(bool converged) const { return {sum_, terms_, tail(), converged}; }

 private:
  double tol_;
  double sum_ = 0.0;
  double last_ = 0.0;
  double last_nonzero_ = 0.0;
  double ratio_ = 1.0;
  std::size_t terms_ = 0;
  int small_run_ = 0;
};

void check_tol(double tol, const char* where) {
  if (!(tol > 0.0) || !(tol < 1.0)) {
    throw DomainError(std::string(where) + ": tolerance must lie in (0, 1)");
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

SeriesValue eval_pfq(const HypergeomSpec& spec, double z, double tol) {
  check_tol(tol, "eval_pfq");
  for (double b : spec.lower) {
    if (special::near_nonpositive_integer(b)) {
      throw DomainError("eval_pfq: lower parameter " + fmt(b) + " is a nonpositive integer");
    }
  }
  const std::size_t p = spec.upper.size();
  const std::size_t q = spec.lower.size();
  if (z == 0.0) return {spec.prefactor, 1, 0.0, true};

  if (p == q + 1) {
    if (p == 2 && z == 1.0) {
      const double value =
          spec.prefactor * gauss_2f1_at_1(spec.upper[0], spec.upper[1], spec.lower[0]);
      return {value, 0, 0.0, true};
    }
    if (std::abs(z) >= 1.0) {
      throw ConvergenceError("eval_pfq: p = q + 1 requires |z| < 1, got z = " + fmt(z));
    }
  } else if (p > q + 1) {
    throw ConvergenceError("eval_pfq: p > q + 1 series diverges for z != 0");
  }

  Accumulator acc(tol);
  double term = spec.prefactor;
  if (acc.add(term)) return acc.result(true);
  for (std::size_t n = 0; n + 1 < kMaxTerms; ++n) {
    const double nn = static_cast<double>(n);
    double ratio = z / (nn + 1.0);
    for (double a : spec.upper) ratio *= a + nn;
    for (double b : spec.lower) ratio /= b + nn;
    term *= ratio;
    if (acc.add(term)) return acc.result(true);
    if (term == 0.0 && acc.tail() == 0.0) return acc.result(true);
  }
  return acc.result(false);
}

double gauss_2f1_at_1(double a, double b, double c) {
  if (!(c - a - b > 0.0)) {
    throw DomainError("gauss_2f1_at_1: requires c - a - b > 0, got " + fmt(c - a - b));
  }
  if (special::near_nonpositive_integer(c)) {
    throw DomainError("gauss_2f1_at_1: c = " + fmt(c) + " is a nonpositive integer");
  }
  return special::GammaRatio{}
      .numerator(c)
      .numerator(c - a - b)
      .denominator(c - a)
      .denominator(c - b)
      .value();
}

double wright_convergence_index(const WrightSpec& spec) {
  double delta = 1.0;
  for (const auto& l : spec.lower) delta += l.step;
  for (const auto& u : spec.upper) delta -= u.step;
  return delta;
}

double wright_radius(const WrightSpec& spec) {
  double log_rho = 0.0;
  for (const auto& u : spec.upper) log_rho -= u.step * std::log(u.step);
  for (const auto& l : spec.lower) log_rho += l.step * std::log(l.step);
  return std::exp(log_rho);
}

SeriesValue eval_wright(const WrightSpec& spec, double z, double tol) {
  check_tol(tol, "eval_wright");
  for (const auto* side : {&spec.upper, &spec.lower}) {
    for (const auto& pr : *side) {
      if (!(pr.step > 0.0)) throw DomainError("eval_wright: steps must be positive");
    }
  }
  constexpr double kDeltaEps = 1e-12;
  const double delta = wright_convergence_index(spec);
  if (delta < -kDeltaEps && z != 0.0) {
    throw ConvergenceError("eval_wright: convergence index " + fmt(delta) + " is negative");
  }
  if (std::abs(delta) <= kDeltaEps && z != 0.0) {
    const double rho = wright_radius(spec);
    if (std::abs(z) > 0.9 * rho) {
      throw ConvergenceError("eval_wright: |z| = " + fmt(std::abs(z)) + " exceeds 0.9 * radius " +
                             fmt(rho));
    }
  }

  // Lower gammas can sit on the pole lattice for the first few n; zero terms
  // there must not trigger the stopping rule.
  std::size_t pole_region_end = 0;
  for (const auto& l : spec.lower) {
    if (l.coeff <= special::kPoleTolerance) {
      const double last = std::floor((-l.coeff + special::kPoleTolerance) / l.step);
      pole_region_end = std::max(pole_region_end, static_cast<std::size_t>(last) + 1);
    }
  }

  const double log_abs_z = z != 0.0 ? std::log(std::abs(z)) : 0.0;
  const int z_sign = z < 0.0 ? -1 : 1;
  Accumulator acc(tol);
  for (std::size_t n = 0; n < kMaxTerms; ++n) {
    const double nn = static_cast<double>(n);
    if (n > 0 && z == 0.0) return acc.result(true);
    special::GammaRatio term;
    for (const auto& u : spec.upper) {
      const double arg = u.coeff + u.step * nn;
      if (special::near_nonpositive_integer(arg)) {
        throw DomainError("eval_wright: upper gamma pole at term n = " + std::to_string(n) +
                          " (argument " + fmt(arg) + ")");
      }
      term.numerator(arg);
    }
    for (const auto& l : spec.lower) term.denominator(l.coeff + l.step * nn);
    term.denominator(nn + 1.0);
    double t = 0.0;
    if (!term.is_zero()) {
      const double log_mag = term.log_abs() + nn * log_abs_z;
      const int sign = term.sign() * ((n % 2 == 1 && z_sign < 0) ? -1 : 1);
      t = sign * std::exp(log_mag);
    }
    if (acc.add(t, n >= pole_region_end)) return acc.result(true);
  }
  return acc.result(false);
}

namespace {

// sum_n x^n / (Gamma(n + mu) n!), the entire core of the k-Bessel series.
SeriesValue k_bessel_core(double mu, double x, double tol) {
  std::size_t start = 0;
  if (special::near_nonpositive_integer(mu)) {
    start = static_cast<std::size_t>(-std::nearbyint(mu)) + 1;
  }
  Accumulator acc(tol);
  for (std::size_t n = 0; n < start; ++n) acc.add(0.0, false);
  if (x == 0.0 && start > 0) return acc.result(true);
  const double nstart = static_cast<double>(start);
  double term = special::GammaRatio{}.denominator(nstart + mu).denominator(nstart + 1.0).value();
  if (start > 0) term *= std::pow(x, nstart);
  if (acc.add(term)) return acc.result(true);
  for (std::size_t n = start; n + 1 < kMaxTerms; ++n) {
    const double nn = static_cast<double>(n);
    term *= x / ((nn + mu) * (nn + 1.0));
    if (acc.add(term)) return acc.result(true);
  }
  return acc.result(false);
}

void check_kbessel(const KBesselParams& p) {
  if (!(p.k > 0.0)) throw DomainError("k-Bessel: k must be positive");
  if (!(p.v > -1.0)) throw DomainError("k-Bessel: v must exceed -1");
}

}  // namespace

SeriesValue eval_k_bessel_regular(const KBesselParams& p, double z, double tol) {
  check_tol(tol, "eval_k_bessel");
  check_kbessel(p);
  const double nu = p.v / p.k;
  auto core = k_bessel_core(nu + 1.0, -p.c * z * z / (4.0 * p.k), tol);
  const double scale = std::exp(-nu * std::log(2.0 * p.k));
  core.value *= scale;
  core.trunc_estimate *= scale;
  return core;
}

SeriesValue eval_k_bessel(const KBesselParams& p, double z, double tol) {
  check_kbessel(p);
  const double nu = p.v / p.k;
  const bool integer_order = nu == std::nearbyint(nu);
  if (z < 0.0 && !integer_order) {
    throw DomainError("eval_k_bessel: z < 0 requires integer v/k");
  }
  if (z == 0.0 && nu < 0.0) {
    throw DomainError("eval_k_bessel: z = 0 is singular for v/k < 0");
  }
  auto reg = eval_k_bessel_regular(p, z, tol);
  const double power = std::pow(z, nu);
  reg.value *= power;
  reg.trunc_estimate *= std::abs(power);
  return reg;
}

}  // namespace saigo::series
