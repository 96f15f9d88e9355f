#pragma once

#include <functional>
#include <string>

#include "saigo/quadrature.hpp"
#include "saigo/series.hpp"

namespace saigo::ops {

enum class Side { left, right };
enum class Family { saigo, riemann_liouville, erdelyi_kober };

std::string to_string(Side s);
std::string to_string(Family f);
Side parse_side(const std::string& s);
/// Accepts "saigo", "rl"/"riemann_liouville", "ek"/"erdelyi_kober".
Family parse_family(const std::string& s);

/// The operator triple (alpha, beta, eta) with its side and family.
struct SaigoParams {
  double alpha = 1.0;
  double beta = 0.0;
  double eta = 0.0;
  Side side = Side::left;
  Family family = Family::saigo;

  static SaigoParams saigo(double alpha, double beta, double eta, Side side);
  /// beta = -alpha; eta is irrelevant and set to 0.
  static SaigoParams riemann_liouville(double alpha, Side side);
  static SaigoParams erdelyi_kober(double alpha, double eta, Side side);

  /// Throws DomainError unless alpha > 0 and beta matches the family.
  void validate() const;
};

/// f(t) = t^exponent * smooth(t).
///
/// For left-sided operators `smooth` must be smooth on [0, x]; for right-sided
/// ones it must be smooth in 1/t on [x, inf). The declared exponent is what the
/// quadrature absorbs into its Jacobi weights and what convergence is checked
/// against.
struct Integrand {
  std::function<double(double)> smooth;
  double exponent = 0.0;

  double operator()(double t) const;

  /// t^{lambda - 1}.
  static Integrand monomial(double lambda);
  /// t^{lambda/k - 1} W^k_{v,c}(t).
  static Integrand k_bessel(const series::KBesselParams& p, double lambda, double series_tol);
  /// t^{lambda/k - 1} W^k_{v,c}(1/t).
  static Integrand k_bessel_reciprocal(const series::KBesselParams& p, double lambda,
                                       double series_tol);
};

using quad::QuadratureResult;

inline constexpr double kDefaultTol = 1e-9;

/// Left-sided Saigo integral I_{0+}^{alpha,beta,eta} f at x > 0.
QuadratureResult saigo_left(const Integrand& f, const SaigoParams& p, double x,
                            double tol = kDefaultTol);
/// Right-sided Saigo integral I_{-}^{alpha,beta,eta} f at x > 0.
QuadratureResult saigo_right(const Integrand& f, const SaigoParams& p, double x,
                             double tol = kDefaultTol);

QuadratureResult rl_left(const Integrand& f, double alpha, double x, double tol = kDefaultTol);
QuadratureResult rl_right(const Integrand& f, double alpha, double x, double tol = kDefaultTol);
QuadratureResult ek_left(const Integrand& f, double alpha, double eta, double x,
                         double tol = kDefaultTol);
QuadratureResult ek_right(const Integrand& f, double alpha, double eta, double x,
                          double tol = kDefaultTol);

/// Dispatches on p.side / p.family.
QuadratureResult apply(const Integrand& f, const SaigoParams& p, double x,
                       double tol = kDefaultTol);

/// coeff * x^exponent.
struct PowerLaw {
  double coeff = 0.0;
  double exponent = 0.0;

  double at(double x) const;
};

PowerLaw saigo_left_monomial(const SaigoParams& p, double lambda);
PowerLaw saigo_right_monomial(const SaigoParams& p, double lambda);
PowerLaw ek_left_monomial(double alpha, double eta, double lambda);
PowerLaw ek_right_monomial(double alpha, double eta, double lambda);
/// Monomial image for any side/family.
PowerLaw monomial_image(const SaigoParams& p, double lambda);

/// 2F1(a, b; c; w) for 0 <= w < 1, using the direct series for w <= 1/2 and
/// the w -> 1 - w connection formula above that.
double hyp2f1_unit(double a, double b, double c, double w, double one_minus_w);

}  // namespace saigo::ops
