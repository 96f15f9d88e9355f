#include "saigo/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "saigo/errors.hpp"
#include "saigo/special.hpp"

namespace saigo::ops {

namespace {

constexpr double kParamEps = 1e-12;
// Tolerance for the kernel's own 2F1 series (argument <= 1/2).
constexpr double kKernelSeriesTol = 1e-16;
// Kernel exponent gaps closer than this to an integer go through the
// perturbation route; kPerturbStep is the perturbation unit.
constexpr double kNearIntegerGap = 5e-4;
constexpr double kPerturbStep = 1e-3;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double dist_to_integer(double x) { return std::abs(x - std::nearbyint(x)); }

bool is_nonpositive_integer(double x) { return x <= kParamEps && dist_to_integer(x) <= kParamEps; }

double pfq2_1(double a, double b, double c, double w) {
  return series::eval_pfq({{a, b}, {c}, 1.0}, w, kKernelSeriesTol).value;
}

// Coefficients of 2F1(a,b;c;1-u) = A F(a,b;1-s;u) + B u^s F(c-a,c-b;1+s;u),
// s = c - a - b (non-integer).
struct Connection {
  double s;
  double A;
  double B;
};

Connection connection(double a, double b, double c) {
  const double s = c - a - b;
  const double A =
      special::GammaRatio{}.numerator(c).numerator(s).denominator(c - a).denominator(c - b).value();
  const double B =
      special::GammaRatio{}.numerator(c).numerator(-s).denominator(a).denominator(b).value();
  return {s, A, B};
}

// Symmetric-difference Richardson weights cancelling the h^2 and h^4 terms.
constexpr std::array<double, 3> kRichardson = {1.5, -0.6, 0.1};

// Shape of the kernel 2F1(alpha+beta, -eta; alpha; 1-u).
struct KernelPlan {
  enum class Kind { unit, power, polynomial, general } kind = Kind::unit;
  double power = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
};

KernelPlan plan_kernel(double a, double b, double c) {
  KernelPlan plan;
  plan.a = a;
  plan.b = b;
  plan.c = c;
  if (std::abs(a) <= kParamEps || std::abs(b) <= kParamEps) {
    plan.kind = KernelPlan::Kind::unit;
  } else if (std::abs(c - a) <= kParamEps) {
    plan.kind = KernelPlan::Kind::power;
    plan.power = -b;
  } else if (std::abs(c - b) <= kParamEps) {
    plan.kind = KernelPlan::Kind::power;
    plan.power = -a;
  } else if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
    plan.kind = KernelPlan::Kind::polynomial;
    if (is_nonpositive_integer(a)) plan.a = std::nearbyint(a);
    if (is_nonpositive_integer(b)) plan.b = std::nearbyint(b);
  } else {
    plan.kind = KernelPlan::Kind::general;
  }
  return plan;
}

using quad::QuadratureResult;
using quad::UnitIntegralOptions;
using Smooth = quad::UnitIntegrand;

QuadratureResult& accumulate(QuadratureResult& acc, const QuadratureResult& part, double weight) {
  acc.value += weight * part.value;
  acc.abs_error_estimate += std::abs(weight) * part.abs_error_estimate;
  acc.evaluations += part.evaluations;
  return acc;
}

void require_integrable(double exponent, const char* where) {
  if (!(exponent > -1.0)) {
    throw DomainError(std::string(where) + ": integrand is not integrable (endpoint exponent " +
                      fmt(exponent) + " <= -1)");
  }
}

// Quadrature options plus the first tolerance shortfall, so a failing piece
// still contributes its best estimate to the assembled operator value.
struct QuadContext {
  UnitIntegralOptions opts;
  std::string shortfall;
};

QuadratureResult integrate(QuadContext& ctx, const Smooth& f, double p, double q, double lo,
                           double hi) {
  try {
    return quad::integrate_unit(f, p, q, lo, hi, ctx.opts);
  } catch (const AccuracyError& e) {
    if (ctx.shortfall.empty()) ctx.shortfall = e.what();
    return {e.best_estimate(), e.error_estimate(), 0};
  }
}

// Integral over [0, 1/2] of u^gamma (1-u)^{alpha-1} K(u) phi(u) using the
// connection formula for K. Only called when s is not near an integer.
QuadratureResult lower_half(double a, double b, double c, double gamma, double alpha,
                            const Smooth& phi, QuadContext& ctx, const char* where) {
  const Connection conn = connection(a, b, c);
  QuadratureResult out;
  if (conn.A != 0.0) {
    require_integrable(gamma, where);
    const Smooth f1 = [&](double u, double omu) {
      return pfq2_1(a, b, 1.0 - conn.s, u) * phi(u, omu);
    };
    accumulate(out, integrate(ctx, f1, gamma, alpha - 1.0, 0.0, 0.5), conn.A);
  }
  if (conn.B != 0.0) {
    require_integrable(gamma + conn.s, where);
    const Smooth f2 = [&](double u, double omu) {
      return pfq2_1(c - a, c - b, 1.0 + conn.s, u) * phi(u, omu);
    };
    accumulate(out, integrate(ctx, f2, gamma + conn.s, alpha - 1.0, 0.0, 0.5), conn.B);
  }
  return out;
}

// Integral over (0, 1) of (1-u)^{alpha-1} u^gamma K(u) phi(u).
QuadratureResult kernel_integral(const KernelPlan& plan, double gamma, double alpha,
                                 const Smooth& phi, QuadContext& ctx, const char* where) {
  require_integrable(alpha - 1.0, where);
  switch (plan.kind) {
    case KernelPlan::Kind::unit:
      require_integrable(gamma, where);
      return integrate(ctx, phi, gamma, alpha - 1.0, 0.0, 1.0);
    case KernelPlan::Kind::power:
      require_integrable(gamma + plan.power, where);
      return integrate(ctx, phi, gamma + plan.power, alpha - 1.0, 0.0, 1.0);
    case KernelPlan::Kind::polynomial: {
      require_integrable(gamma, where);
      const Smooth f = [&](double u, double omu) {
        return pfq2_1(plan.a, plan.b, plan.c, omu) * phi(u, omu);
      };
      return integrate(ctx, f, gamma, alpha - 1.0, 0.0, 1.0);
    }
    case KernelPlan::Kind::general: break;
  }

  const double a = plan.a;
  const double b = plan.b;
  const double c = plan.c;
  // (1/2, 1): kernel argument 1-u <= 1/2, direct series.
  const Smooth upper_f = [&](double u, double omu) {
    const double base = gamma != 0.0 ? std::pow(u, gamma) : 1.0;
    return base * pfq2_1(a, b, c, omu) * phi(u, omu);
  };
  QuadratureResult out = integrate(ctx, upper_f, 0.0, alpha - 1.0, 0.5, 1.0);

  const double s = c - a - b;
  if (dist_to_integer(s) >= kNearIntegerGap) {
    return accumulate(out, lower_half(a, b, c, gamma, alpha, phi, ctx, where), 1.0);
  }

  // Integer-adjacent s: the connection coefficients blow up and cancel. The
  // lower-half integral is analytic in b, so evaluate it at b +- j*h and
  // extrapolate the symmetric means to h -> 0.
  std::array<double, 3> sym{};
  QuadratureResult low;
  for (int j = 1; j <= 3; ++j) {
    const double h = j * kPerturbStep;
    const auto plus = lower_half(a, b + h, c, gamma, alpha, phi, ctx, where);
    const auto minus = lower_half(a, b - h, c, gamma, alpha, phi, ctx, where);
    sym[j - 1] = 0.5 * (plus.value + minus.value);
    low.abs_error_estimate +=
        std::abs(kRichardson[j - 1]) * 0.5 * (plus.abs_error_estimate + minus.abs_error_estimate);
    low.evaluations += plus.evaluations + minus.evaluations;
  }
  low.value = kRichardson[0] * sym[0] + kRichardson[1] * sym[1] + kRichardson[2] * sym[2];
  const double fourth_order = (4.0 * sym[0] - sym[1]) / 3.0;
  low.abs_error_estimate += std::abs(low.value - fourth_order);
  return accumulate(out, low, 1.0);
}

SaigoParams effective(const SaigoParams& p) {
  SaigoParams e = p;
  if (p.family == Family::riemann_liouville) {
    e.beta = -p.alpha;
    e.eta = 0.0;
  } else if (p.family == Family::erdelyi_kober) {
    e.beta = 0.0;
  }
  return e;
}

QuadratureResult finish(QuadratureResult r, double scale, const QuadContext& ctx,
                        const char* where) {
  r.value *= scale;
  r.abs_error_estimate *= std::abs(scale);
  if (!ctx.shortfall.empty()) {
    throw AccuracyError(std::string(where) + ": " + ctx.shortfall, r.value, r.abs_error_estimate);
  }
  return r;
}

void check_x(double x, const char* where) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(where) + ": x must be positive and finite");
  }
}

}  // namespace

std::string to_string(Side s) { return s == Side::left ? "left" : "right"; }

std::string to_string(Family f) {
  switch (f) {
    case Family::saigo: return "saigo";
    case Family::riemann_liouville: return "riemann_liouville";
    case Family::erdelyi_kober: return "erdelyi_kober";
  }
  return "saigo";
}

Side parse_side(const std::string& s) {
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  throw DomainError("unknown side '" + s + "' (expected left or right)");
}

Family parse_family(const std::string& s) {
  if (s == "saigo") return Family::saigo;
  if (s == "rl" || s == "riemann_liouville") return Family::riemann_liouville;
  if (s == "ek" || s == "erdelyi_kober") return Family::erdelyi_kober;
  throw DomainError("unknown operator family '" + s + "' (expected saigo, rl or ek)");
}

SaigoParams SaigoParams::saigo(double alpha, double beta, double eta, Side side) {
  return {alpha, beta, eta, side, Family::saigo};
}

SaigoParams SaigoParams::riemann_liouville(double alpha, Side side) {
  return {alpha, -alpha, 0.0, side, Family::riemann_liouville};
}

SaigoParams SaigoParams::erdelyi_kober(double alpha, double eta, Side side) {
  return {alpha, 0.0, eta, side, Family::erdelyi_kober};
}

void SaigoParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("operator order alpha must be positive, got " + fmt(alpha));
  }
  if (!std::isfinite(beta) || !std::isfinite(eta)) {
    throw DomainError("operator parameters must be finite");
  }
  if (family == Family::riemann_liouville && beta != -alpha) {
    throw DomainError("Riemann-Liouville family requires beta = -alpha");
  }
  if (family == Family::erdelyi_kober && beta != 0.0) {
    throw DomainError("Erdelyi-Kober family requires beta = 0");
  }
}

double Integrand::operator()(double t) const {
  const double base = exponent != 0.0 ? std::pow(t, exponent) : 1.0;
  return smooth ? base * smooth(t) : base;
}

Integrand Integrand::monomial(double lambda) {
  return {[](double) { return 1.0; }, lambda - 1.0};
}

Integrand Integrand::k_bessel(const series::KBesselParams& p, double lambda, double series_tol) {
  if (!(p.k > 0.0)) throw DomainError("k-Bessel integrand: k must be positive");
  return {
      [p, series_tol](double t) { return series::eval_k_bessel_regular(p, t, series_tol).value; },
      lambda / p.k - 1.0 + p.v / p.k};
}

Integrand Integrand::k_bessel_reciprocal(const series::KBesselParams& p, double lambda,
                                         double series_tol) {
  if (!(p.k > 0.0)) throw DomainError("k-Bessel integrand: k must be positive");
  return {[p, series_tol](double t) {
            return series::eval_k_bessel_regular(p, 1.0 / t, series_tol).value;
          },
          lambda / p.k - 1.0 - p.v / p.k};
}

QuadratureResult saigo_left(const Integrand& f, const SaigoParams& p, double x, double tol) {
  p.validate();
  check_x(x, "saigo_left");
  const SaigoParams e = effective(p);
  const KernelPlan plan = plan_kernel(e.alpha + e.beta, -e.eta, e.alpha);
  const Smooth phi = [&](double u, double) { return f.smooth ? f.smooth(x * u) : 1.0; };
  QuadContext ctx;
  ctx.opts.tol = tol;
  auto r = kernel_integral(plan, f.exponent, e.alpha, phi, ctx, "saigo_left (t -> 0)");
  const double scale = std::pow(x, f.exponent - e.beta) * special::reciprocal_gamma(e.alpha);
  return finish(r, scale, ctx, "saigo_left");
}

QuadratureResult saigo_right(const Integrand& f, const SaigoParams& p, double x, double tol) {
  p.validate();
  check_x(x, "saigo_right");
  const SaigoParams e = effective(p);
  const KernelPlan plan = plan_kernel(e.alpha + e.beta, -e.eta, e.alpha);
  // t = x/u maps (x, inf) onto (0, 1).
  const Smooth phi = [&](double u, double) { return f.smooth ? f.smooth(x / u) : 1.0; };
  const double gamma = e.beta - 1.0 - f.exponent;
  QuadContext ctx;
  ctx.opts.tol = tol;
  auto r = kernel_integral(plan, gamma, e.alpha, phi, ctx, "saigo_right (divergent tail)");
  const double scale = std::pow(x, f.exponent - e.beta) * special::reciprocal_gamma(e.alpha);
  return finish(r, scale, ctx, "saigo_right");
}

QuadratureResult rl_left(const Integrand& f, double alpha, double x, double tol) {
  return saigo_left(f, SaigoParams::riemann_liouville(alpha, Side::left), x, tol);
}

QuadratureResult rl_right(const Integrand& f, double alpha, double x, double tol) {
  return saigo_right(f, SaigoParams::riemann_liouville(alpha, Side::right), x, tol);
}

QuadratureResult ek_left(const Integrand& f, double alpha, double eta, double x, double tol) {
  return saigo_left(f, SaigoParams::erdelyi_kober(alpha, eta, Side::left), x, tol);
}

QuadratureResult ek_right(const Integrand& f, double alpha, double eta, double x, double tol) {
  return saigo_right(f, SaigoParams::erdelyi_kober(alpha, eta, Side::right), x, tol);
}

QuadratureResult apply(const Integrand& f, const SaigoParams& p, double x, double tol) {
  return p.side == Side::left ? saigo_left(f, p, x, tol) : saigo_right(f, p, x, tol);
}

double PowerLaw::at(double x) const { return coeff * std::pow(x, exponent); }

PowerLaw saigo_left_monomial(const SaigoParams& p, double lambda) {
  p.validate();
  const SaigoParams e = effective(p);
  const double bound = std::max(0.0, e.beta - e.eta);
  if (!(lambda > bound)) {
    throw DomainError("saigo_left_monomial: requires lambda > max(0, beta - eta) = " + fmt(bound) +
                      ", got " + fmt(lambda));
  }
  const double coeff = special::GammaRatio{}
                           .numerator(lambda)
                           .numerator(lambda + e.eta - e.beta)
                           .denominator(lambda - e.beta)
                           .denominator(lambda + e.alpha + e.eta)
                           .value();
  return {coeff, lambda - e.beta - 1.0};
}

PowerLaw saigo_right_monomial(const SaigoParams& p, double lambda) {
  p.validate();
  const SaigoParams e = effective(p);
  const double bound = 1.0 + std::min(e.beta, e.eta);
  if (!(lambda < bound)) {
    throw DomainError("saigo_right_monomial: requires lambda < 1 + min(beta, eta) = " + fmt(bound) +
                      ", got " + fmt(lambda));
  }
  const double coeff = special::GammaRatio{}
                           .numerator(e.eta - lambda + 1.0)
                           .numerator(e.beta - lambda + 1.0)
                           .denominator(1.0 - lambda)
                           .denominator(e.alpha + e.beta + e.eta - lambda + 1.0)
                           .value();
  return {coeff, lambda - e.beta - 1.0};
}

PowerLaw ek_left_monomial(double alpha, double eta, double lambda) {
  SaigoParams::erdelyi_kober(alpha, eta, Side::left).validate();
  if (!(lambda > -eta)) {
    throw DomainError("ek_left_monomial: requires lambda > -eta, got lambda = " + fmt(lambda));
  }
  const double coeff =
      special::GammaRatio{}.numerator(lambda + eta).denominator(lambda + alpha + eta).value();
  return {coeff, lambda - 1.0};
}

PowerLaw ek_right_monomial(double alpha, double eta, double lambda) {
  SaigoParams::erdelyi_kober(alpha, eta, Side::right).validate();
  if (!(lambda < 1.0 + eta)) {
    throw DomainError("ek_right_monomial: requires lambda < 1 + eta, got lambda = " + fmt(lambda));
  }
  const double coeff = special::GammaRatio{}
                           .numerator(eta - lambda + 1.0)
                           .denominator(alpha + eta - lambda + 1.0)
                           .value();
  return {coeff, lambda - 1.0};
}

PowerLaw monomial_image(const SaigoParams& p, double lambda) {
  if (p.family == Family::erdelyi_kober) {
    return p.side == Side::left ? ek_left_monomial(p.alpha, p.eta, lambda)
                                : ek_right_monomial(p.alpha, p.eta, lambda);
  }
  return p.side == Side::left ? saigo_left_monomial(p, lambda) : saigo_right_monomial(p, lambda);
}

double hyp2f1_unit(double a, double b, double c, double w, double one_minus_w) {
  if (!(w >= 0.0) || !(one_minus_w > 0.0)) {
    throw DomainError("hyp2f1_unit: argument must lie in [0, 1)");
  }
  if (special::near_nonpositive_integer(c)) {
    throw DomainError("hyp2f1_unit: c is a nonpositive integer");
  }
  const KernelPlan plan = plan_kernel(a, b, c);
  if (w <= 0.5 || plan.kind == KernelPlan::Kind::unit ||
      plan.kind == KernelPlan::Kind::polynomial) {
    return pfq2_1(plan.a, plan.b, c, w);
  }
  if (plan.kind == KernelPlan::Kind::power) return std::pow(one_minus_w, plan.power);
  const double u = one_minus_w;
  const auto eval = [&](double bb) {
    const Connection conn = connection(a, bb, c);
    double v = 0.0;
    if (conn.A != 0.0) v += conn.A * pfq2_1(a, bb, 1.0 - conn.s, u);
    if (conn.B != 0.0) v += conn.B * std::pow(u, conn.s) * pfq2_1(c - a, c - bb, 1.0 + conn.s, u);
    return v;
  };
  if (dist_to_integer(c - a - b) >= kNearIntegerGap) return eval(b);
  double v = 0.0;
  for (int j = 1; j <= 3; ++j) {
    const double h = j * kPerturbStep;
    v += kRichardson[j - 1] * 0.5 * (eval(b + h) + eval(b - h));
  }
  return v;
}

}  // namespace saigo::ops
