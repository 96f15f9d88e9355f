#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "saigo/errors.hpp"
#include "saigo/quadrature.hpp"
#include "saigo/special.hpp"

using namespace saigo::quad;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Exact moment of (1-x)^a (1+x)^b (1+x)^m over [-1, 1].
double jacobi_moment(double a, double b, int m) {
  return std::pow(2.0, a + b + m + 1.0) * saigo::special::beta_fn(a + 1.0, b + m + 1.0);
}
}  // namespace

TEST_CASE("gauss_jacobi integrates polynomials exactly") {
  for (auto [a, b] : {std::pair{0.0, 0.0}, {-0.5, -0.5}, {-0.95, 0.3}, {1.7, -0.9}, {0.4, 2.5}}) {
    for (int n : {1, 5, 60}) {
      const auto rule = gauss_jacobi(n, a, b);
      REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
      for (int m : {0, 1, 2 * n - 1}) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += rule.weights[i] * std::pow(1.0 + rule.nodes[i], m);
        CHECK(rel(s, jacobi_moment(a, b, m)) <= 1e-12);
      }
      CHECK(std::is_sorted(rule.nodes.begin(), rule.nodes.end()));
      CHECK(rule.nodes.front() > -1.0);
      CHECK(rule.nodes.back() < 1.0);
    }
  }
  CHECK_THROWS_AS(gauss_jacobi(10, -1.0, 0.0), saigo::DomainError);
  CHECK_THROWS_AS(gauss_jacobi(0, 0.0, 0.0), saigo::DomainError);
}

TEST_CASE("integrate_unit with both endpoint weights") {
  const auto r = integrate_unit([](double, double) { return 1.0; }, 0.3, -0.6, 0.0, 1.0);
  CHECK(rel(r.value, saigo::special::beta_fn(1.3, 0.4)) <= 1e-13);

  // Strong singularity at 0 and a smooth oscillatory factor. Reference is the
  // termwise beta-function expansion of cos(3u), summed at 30 digits.
  const auto s =
      integrate_unit([](double u, double) { return std::cos(3.0 * u); }, -0.95, -0.4, 0.0, 1.0);
  CHECK(rel(s.value, 18.10413424585255823700975) <= 1e-12);
  CHECK(s.abs_error_estimate <= 1e-9 * std::abs(s.value));
  CHECK(s.evaluations >= 180);
}

TEST_CASE("integrate_unit on an interior subinterval folds the weights") {
  const auto r = integrate_unit([](double u, double) { return std::exp(u); }, 0.3, 0.5, 0.2, 0.7);
  CHECK(rel(r.value, 0.444543841583219445809394) <= 1e-13);
}

TEST_CASE("integrate_unit bisects a kinked integrand") {
  UnitIntegralOptions opts;
  opts.tol = 1e-10;
  const auto r =
      integrate_unit([](double u, double) { return std::abs(u - 0.3); }, 0.0, 0.0, 0.0, 1.0, opts);
  CHECK(std::abs(r.value - (0.045 + 0.245)) <= 1e-9);
  CHECK(r.evaluations > 180);
}

TEST_CASE("integrate_unit error paths") {
  const auto one = [](double, double) { return 1.0; };
  CHECK_THROWS_AS(integrate_unit(one, -1.0, 0.0, 0.0, 1.0), saigo::DomainError);
  CHECK_THROWS_AS(integrate_unit(one, 0.0, -1.2, 0.0, 1.0), saigo::DomainError);
  CHECK_THROWS_AS(integrate_unit(one, 0.0, 0.0, 0.6, 0.4), saigo::DomainError);
  // Exponents below -1 are fine away from the endpoint they belong to.
  CHECK_NOTHROW(integrate_unit(one, -1.5, 0.0, 0.5, 1.0));

  UnitIntegralOptions opts;
  opts.tol = 1e-14;
  opts.max_depth = 2;
  opts.order = 4;
  try {
    integrate_unit([](double u, double) { return u < 0.31 ? 0.0 : 1.0; }, 0.0, 0.0, 0.0, 1.0, opts);
    FAIL("expected AccuracyError");
  } catch (const saigo::AccuracyError& e) {
    CHECK(std::abs(e.best_estimate() - 0.69) < 0.1);
    CHECK(e.error_estimate() > 0.0);
  }
}

TEST_CASE("tolerance below rounding noise fails fast") {
  const saigo::quad::UnitIntegrand f = [](double u, double) { return std::cos(3.0 * u); };
  saigo::quad::UnitIntegralOptions opts;
  opts.tol = 1e-20;
  CHECK_THROWS_AS(saigo::quad::integrate_unit(f, -0.5, 0.3, 0.0, 1.0, opts), saigo::AccuracyError);
  opts.tol = 1e-12;
  opts.max_evaluations = 100;
  const saigo::quad::UnitIntegrand wild = [](double u, double) { return std::sin(400.0 * u); };
  CHECK_THROWS_AS(saigo::quad::integrate_unit(wild, 0.0, 0.0, 0.0, 1.0, opts),
                  saigo::AccuracyError);
}
