#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "saigo/errors.hpp"
#include "saigo/operators.hpp"
#include "saigo/special.hpp"

using namespace saigo::ops;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const Integrand kOne = Integrand::monomial(1.0);
}  // namespace

TEST_CASE("hyp2f1_unit agrees with brute-force partial sums") {
  struct Case {
    double a, b, c, w;
  };
  for (const Case& k :
       {Case{0.9, -0.9, 0.6, 0.7}, Case{1.1, -1.1, 0.7, 0.93}, Case{0.3, 1.2, 2.4, 0.85},
        Case{0.4, -1.5, 0.3, 0.75}, Case{1.1, -1.2, 0.9, 0.8} /* c - a - b = 1 */,
        Case{1.1, -1.2001, 0.9, 0.8} /* c - a - b near 1 */,
        Case{0.6, -2.0, 0.5, 0.97} /* terminating */}) {
    const double ref = static_cast<double>(oracle::hyp2f1_partial(k.a, k.b, k.c, k.w, 200000));
    CHECK(rel(hyp2f1_unit(k.a, k.b, k.c, k.w, 1.0 - k.w), ref) <= 1e-11);
  }
  // c = a reduces to (1 - w)^{-b}, evaluated from the exact gap.
  CHECK(rel(hyp2f1_unit(0.5, -1.5, 0.5, 1.0 - 1e-12, 1e-12), std::pow(1e-12, 1.5)) <= 1e-13);
  CHECK_THROWS_AS(hyp2f1_unit(0.5, 0.5, 1.0, 1.0, 0.0), saigo::DomainError);
}

TEST_CASE("SaigoParams validation") {
  CHECK_THROWS_AS(SaigoParams::saigo(0.0, 0.1, 0.2, Side::left).validate(), saigo::DomainError);
  CHECK_THROWS_AS(SaigoParams::saigo(-1.0, 0.1, 0.2, Side::left).validate(), saigo::DomainError);
  SaigoParams rl = SaigoParams::riemann_liouville(0.7, Side::left);
  CHECK(rl.beta == -0.7);
  rl.beta = 0.1;
  CHECK_THROWS_AS(rl.validate(), saigo::DomainError);
  SaigoParams ek = SaigoParams::erdelyi_kober(0.7, 1.0, Side::right);
  ek.beta = 0.2;
  CHECK_THROWS_AS(ek.validate(), saigo::DomainError);
  CHECK(parse_family("rl") == Family::riemann_liouville);
  CHECK(parse_family("erdelyi_kober") == Family::erdelyi_kober);
  CHECK_THROWS_AS(parse_family("weyl"), saigo::DomainError);
  CHECK_THROWS_AS(parse_side("up"), saigo::DomainError);
}

TEST_CASE("saigo_left trivial cases") {
  const auto r = saigo_left(kOne, SaigoParams::saigo(1.0, 0.0, 0.0, Side::left), 2.0);
  CHECK(rel(r.value, 1.0) <= 1e-13);
  CHECK(r.abs_error_estimate >= 0.0);
  CHECK(r.evaluations > 0);
  const auto rl = saigo_left(kOne, SaigoParams::saigo(1.0, -1.0, 0.37, Side::left), 2.0);
  CHECK(rel(rl.value, 2.0) <= 1e-13);
  CHECK(rel(rl_left(kOne, 1.0, 3.0).value, 3.0) <= 1e-13);
  CHECK(rel(rl_left(kOne, 2.0, 2.0).value, 2.0) <= 1e-13);
}

TEST_CASE("saigo_left matches the monomial image") {
  const auto p = SaigoParams::saigo(0.6, 0.3, 0.9, Side::left);
  const auto img = saigo_left_monomial(p, 1.7);
  CHECK(rel(img.coeff, 0.4929191297417548247) <= 1e-14);
  CHECK(img.exponent == doctest::Approx(0.4).epsilon(1e-15));
  const auto q = saigo_left(Integrand::monomial(1.7), p, 1.5);
  CHECK(rel(q.value, img.at(1.5)) <= 1e-8);
  // Independent 30-digit quadrature of the defining integral.
  CHECK(rel(q.value, 0.579711848290395767602) <= 1e-12);
}

TEST_CASE("saigo_right trivial and monomial image cases") {
  const double lam = -0.5;
  const auto r =
      saigo_right(Integrand::monomial(lam), SaigoParams::saigo(1.0, 0.0, 0.0, Side::right), 2.0);
  CHECK(rel(r.value, std::pow(2.0, lam - 1.0) / (1.0 - lam)) <= 1e-13);

  const auto p = SaigoParams::saigo(0.7, 0.4, 1.1, Side::right);
  const auto img = saigo_right_monomial(p, -0.3);
  CHECK(rel(img.coeff, 0.3784212946834026246) <= 1e-14);
  const auto q = saigo_right(Integrand::monomial(-0.3), p, 1.0);
  CHECK(rel(q.value, img.at(1.0)) <= 1e-8);

  const auto ek =
      saigo_right(Integrand::monomial(0.2), SaigoParams::saigo(0.5, 0.0, 1.5, Side::right), 3.0);
  CHECK(rel(ek.value, ek_right_monomial(0.5, 1.5, 0.2).at(3.0)) <= 1e-8);
  CHECK(rel(ek.value, 0.2889784480238039941) <= 1e-12);
}

TEST_CASE("monomial closed forms") {
  const auto a = saigo_left_monomial(SaigoParams::saigo(1.0, 0.0, 0.0, Side::left), 1.0);
  CHECK(rel(a.coeff, 1.0) <= 1e-15);
  CHECK(a.exponent == 0.0);
  const auto b = saigo_left_monomial(SaigoParams::saigo(1.0, -1.0, 0.0, Side::left), 1.0);
  CHECK(rel(b.coeff, 1.0) <= 1e-15);
  CHECK(b.exponent == 1.0);

  const auto c = saigo_right_monomial(SaigoParams::saigo(1.0, 0.0, 0.0, Side::right), -0.5);
  CHECK(rel(c.coeff, 2.0 / 3.0) <= 1e-15);
  CHECK(c.exponent == -1.5);
  // lambda = beta: the Gamma(beta - lambda + 1) factor is Gamma(1).
  const auto d = saigo_right_monomial(SaigoParams::saigo(0.8, 0.3, 0.9, Side::right), 0.3);
  CHECK(rel(d.coeff, std::tgamma(1.6) / (std::tgamma(0.7) * std::tgamma(2.7))) <= 1e-14);

  CHECK(rel(ek_left_monomial(1.0, 0.0, 1.0).coeff, 1.0) <= 1e-15);
  CHECK(rel(ek_left_monomial(0.5, 1.5, 0.2).coeff, 0.8246838615583502234) <= 1e-14);
  const auto e = ek_right_monomial(1.0, 0.0, -0.5);
  CHECK(rel(e.coeff, 2.0 / 3.0) <= 1e-14);
  CHECK(e.exponent == -1.5);

  CHECK_THROWS_AS(saigo_left_monomial(SaigoParams::saigo(0.5, 0.9, 0.1, Side::left), 0.5),
                  saigo::DomainError);
  CHECK_THROWS_AS(saigo_left_monomial(SaigoParams::saigo(0.5, 0.0, 0.1, Side::left), -0.1),
                  saigo::DomainError);
  CHECK_THROWS_AS(saigo_right_monomial(SaigoParams::saigo(0.5, 0.2, 0.8, Side::right), 1.3),
                  saigo::DomainError);
  CHECK_THROWS_AS(ek_left_monomial(0.5, 0.3, -0.4), saigo::DomainError);
  CHECK_THROWS_AS(ek_right_monomial(0.5, 0.3, 1.4), saigo::DomainError);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> al(0.3, 1.8), et(0.0, 2.0), la(0.05, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double alpha = al(rng), eta = et(rng), lam = la(rng);
    CHECK(rel(ek_left_monomial(alpha, eta, lam).coeff,
              saigo_left_monomial(SaigoParams::saigo(alpha, 0.0, eta, Side::left), lam).coeff) <=
          1e-14);
    const double lr = lam - 2.0;
    CHECK(rel(ek_right_monomial(alpha, eta, lr).coeff,
              saigo_right_monomial(SaigoParams::saigo(alpha, 0.0, eta, Side::right), lr).coeff) <=
          1e-14);
  }
}

TEST_CASE("EK and RL quadratures") {
  const auto ekl = ek_left(Integrand::monomial(0.2), 0.5, 1.5, 1.0);
  CHECK(rel(ekl.value, ek_left_monomial(0.5, 1.5, 0.2).coeff) <= 1e-12);
  const auto rlr = rl_right(Integrand::monomial(-1.0), 0.5, 1.0);
  const auto img = saigo_right_monomial(SaigoParams::saigo(0.5, -0.5, 0.0, Side::right), -1.0);
  CHECK(rel(rlr.value, img.at(1.0)) <= 1e-12);
  CHECK(rel(rlr.value, 0.8862269254527580136) <= 1e-12);
}

TEST_CASE("integer and near-integer kernel gaps") {
  // eta - beta = 1 exactly, and 1 + 3e-4.
  for (double eta : {1.2, 1.2003, 1.1997}) {
    const auto p = SaigoParams::saigo(0.9, 0.2, eta, Side::left);
    const auto q = saigo_left(Integrand::monomial(0.4), p, 1.3);
    CHECK(rel(q.value, saigo_left_monomial(p, 0.4).at(1.3)) <= 1e-9);
    const auto pr = SaigoParams::saigo(0.9, 0.2, eta, Side::right);
    const auto qr = saigo_right(Integrand::monomial(-0.4), pr, 1.3);
    CHECK(rel(qr.value, saigo_right_monomial(pr, -0.4).at(1.3)) <= 1e-9);
  }
  // eta - beta = 0: log-type kernel at the origin.
  const auto p0 = SaigoParams::saigo(1.3, 0.6, 0.6, Side::left);
  CHECK(rel(saigo_left(Integrand::monomial(0.7), p0, 0.8).value,
            saigo_left_monomial(p0, 0.7).at(0.8)) <= 1e-9);
}

TEST_CASE("integrability errors") {
  const auto p = SaigoParams::saigo(0.6, 0.3, 0.9, Side::left);
  CHECK_THROWS_AS(saigo_left(Integrand::monomial(-0.2), p, 1.0), saigo::DomainError);
  const auto pr = SaigoParams::saigo(0.6, 0.3, 0.9, Side::right);
  CHECK_THROWS_AS(saigo_right(Integrand::monomial(1.5), pr, 1.0), saigo::DomainError);
  CHECK_THROWS_AS(saigo_left(kOne, p, -1.0), saigo::DomainError);
  CHECK_THROWS_AS(saigo_left(kOne, SaigoParams::saigo(0.0, 0.3, 0.9, Side::left), 1.0),
                  saigo::DomainError);
}

TEST_CASE("monomial oracle agreement over random draws") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> al(0.3, 1.8), be(-1.0, 1.0), et(0.0, 2.0), u01(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double alpha = al(rng), beta = be(rng), eta = et(rng);
    const double lmin = std::max(0.0, beta - eta) + 0.05;
    const double lam_left = lmin + 2.5 * u01(rng);
    const double lmax = 1.0 + std::min(beta, eta) - 0.05;
    const double lam_right = lmax - 2.5 * u01(rng);
    const auto pl = SaigoParams::saigo(alpha, beta, eta, Side::left);
    const auto pr = SaigoParams::saigo(alpha, beta, eta, Side::right);
    const auto il = saigo_left_monomial(pl, lam_left);
    const auto ir = saigo_right_monomial(pr, lam_right);
    for (double x : {0.5, 1.0, 2.0}) {
      const double l = saigo_left(Integrand::monomial(lam_left), pl, x).value;
      const double r = saigo_right(Integrand::monomial(lam_right), pr, x).value;
      worst = std::max(worst, rel(l, il.at(x)));
      if (ir.coeff != 0.0) worst = std::max(worst, rel(r, ir.at(x)));
    }
  }
  CHECK(worst <= 1e-6);
  MESSAGE("worst monomial residual: " << worst);
}

TEST_CASE("reduction chain, linearity and homogeneity") {
  const Integrand f{[](double t) { return std::cos(t); }, 0.3};
  const Integrand g{[](double t) { return 1.0 / (1.0 + t * t); }, 0.3};
  const double alpha = 0.75, x = 1.4;

  const auto sl = saigo_left(f, SaigoParams::saigo(alpha, -alpha, 0.8, Side::left), x).value;
  CHECK(rel(sl, rl_left(f, alpha, x).value) <= 1e-10);
  const auto se = saigo_left(f, SaigoParams::saigo(alpha, 0.0, 0.8, Side::left), x).value;
  CHECK(rel(se, ek_left(f, alpha, 0.8, x).value) <= 1e-10);
  const Integrand fr{[](double t) { return std::exp(-1.0 / t); }, -1.7};
  CHECK(rel(saigo_right(fr, SaigoParams::saigo(alpha, 0.0, 0.8, Side::right), x).value,
            ek_right(fr, alpha, 0.8, x).value) <= 1e-10);

  const auto p = SaigoParams::saigo(alpha, 0.35, 1.3, Side::left);
  const Integrand combo{[&](double t) { return 2.0 * f.smooth(t) - 3.0 * g.smooth(t); }, 0.3};
  const double lin = saigo_left(combo, p, x).value;
  const double sep = 2.0 * saigo_left(f, p, x).value - 3.0 * saigo_left(g, p, x).value;
  CHECK(std::abs(lin - sep) <= 1e-9 * std::abs(sep));

  const auto img = saigo_left_monomial(p, 1.9);
  for (double xx : {0.5, 1.0, 2.0}) {
    const double q = saigo_left(Integrand::monomial(1.9), p, xx).value;
    CHECK(rel(q / std::pow(xx, img.exponent), img.coeff) <= 1e-9);
  }
}

TEST_CASE("apply dispatches on side and family") {
  const auto p = SaigoParams::erdelyi_kober(0.5, 1.5, Side::right);
  CHECK(rel(apply(Integrand::monomial(0.2), p, 3.0).value, monomial_image(p, 0.2).at(3.0)) <=
        1e-10);
  const auto q = SaigoParams::riemann_liouville(0.5, Side::left);
  CHECK(rel(apply(Integrand::monomial(0.8), q, 2.0).value, monomial_image(q, 0.8).at(2.0)) <=
        1e-10);
}

TEST_CASE("unreachable tolerance reports the scaled best estimate") {
  const auto p = SaigoParams::saigo(0.6, 0.3, 0.9, Side::left);
  const double exact = saigo_left_monomial(p, 1.7).at(1.5);
  try {
    saigo_left(Integrand::monomial(1.7), p, 1.5, 1e-18);
    FAIL("expected AccuracyError");
  } catch (const saigo::AccuracyError& e) {
    CHECK(rel(e.best_estimate(), exact) <= 1e-12);
    CHECK(e.error_estimate() < 1e-12);
  }
}
