#include "saigo/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <sstream>
#include <tuple>

#include "saigo/errors.hpp"
#include "saigo/special.hpp"

namespace saigo::quad {

GaussRule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw DomainError("gauss_jacobi: order must be positive");
  if (!(a > -1.0) || !(b > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");

  // Recurrence coefficients of the monic Jacobi polynomials.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd offdiag(std::max(n - 1, 1));
  const double ab = a + b;
  diag(0) = (b - a) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double kk = k;
    const double s = 2.0 * kk + ab;
    diag(k) = (b * b - a * a) / (s * (s + 2.0));
    double beta_k;
    if (k == 1) {
      beta_k = 4.0 * (1.0 + a) * (1.0 + b) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
    } else {
      beta_k = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    offdiag(k - 1) = std::sqrt(beta_k);
  }

  const double log_mu0 = (ab + 1.0) * std::log(2.0) + special::log_gamma(a + 1.0).log_abs +
                         special::log_gamma(b + 1.0).log_abs - special::log_gamma(ab + 2.0).log_abs;
  const double mu0 = std::exp(log_mu0);

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = mu0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, offdiag.head(n - 1), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw AccuracyError("gauss_jacobi: eigenvalue iteration failed", 0.0, 0.0);
  }
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

namespace {

constexpr double kRoundoff = 64.0 * std::numeric_limits<double>::epsilon();

// Rules are rebuilt often with the same (n, a, b); keep a small per-thread
// cache so evaluation stays free of shared state.
const GaussRule& cached_rule(int n, double a, double b) {
  struct Entry {
    int n;
    double a;
    double b;
    GaussRule rule;
  };
  thread_local std::list<Entry> cache;
  constexpr std::size_t kCapacity = 96;
  for (auto it = cache.begin(); it != cache.end(); ++it) {
    if (it->n == n && it->a == a && it->b == b) {
      cache.splice(cache.begin(), cache, it);
      return cache.front().rule;
    }
  }
  cache.push_front({n, a, b, gauss_jacobi(n, a, b)});
  if (cache.size() > kCapacity) cache.pop_back();
  return cache.front().rule;
}

struct Panel {
  double value;
  double error;
};

class UnitIntegrator {
 public:
  UnitIntegrator(const UnitIntegrand& f, double p, double q, const UnitIntegralOptions& opts)
      : f_(f), p_(p), q_(q), opts_(opts) {}

  double apply_rule(const GaussRule& rule, double lo, double hi, bool absorb_left,
                    bool absorb_right) {
    const double half = 0.5 * (hi - lo);
    // 1 - u at the right end of the panel, kept exact when hi == 1.
    const double right_gap = 1.0 - hi;
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = rule.nodes[i];
      const double u = lo + half * (1.0 + x);
      const double one_minus_u = right_gap + half * (1.0 - x);
      double fx = f_(u, one_minus_u);
      if (!absorb_left && p_ != 0.0) fx *= std::pow(u, p_);
      if (!absorb_right && q_ != 0.0) fx *= std::pow(one_minus_u, q_);
      sum += rule.weights[i] * fx;
    }
    evaluations_ += rule.nodes.size();
    const double a = absorb_right ? q_ : 0.0;
    const double b = absorb_left ? p_ : 0.0;
    return sum * std::pow(half, a + b + 1.0);
  }

  Panel panel(double lo, double hi) {
    const bool absorb_left = lo == 0.0;
    const bool absorb_right = hi == 1.0;
    const double a = absorb_right ? q_ : 0.0;
    const double b = absorb_left ? p_ : 0.0;
    const double coarse =
        apply_rule(cached_rule(opts_.order, a, b), lo, hi, absorb_left, absorb_right);
    const double fine =
        apply_rule(cached_rule(2 * opts_.order, a, b), lo, hi, absorb_left, absorb_right);
    return {fine, std::abs(fine - coarse)};
  }

  Panel adapt(double lo, double hi, const Panel& whole, double target, int depth) {
    if (whole.error <= target || !std::isfinite(whole.value)) return whole;
    // Bisection cannot push the estimate below rounding noise.
    if (whole.error <= kRoundoff * std::abs(whole.value)) {
      floor_limited_ = true;
      return whole;
    }
    if (depth >= opts_.max_depth || evaluations_ >= opts_.max_evaluations) {
      exhausted_ = true;
      return whole;
    }
    const double mid = 0.5 * (lo + hi);
    const Panel left = panel(lo, mid);
    const Panel right = panel(mid, hi);
    const Panel l = adapt(lo, mid, left, 0.5 * target, depth + 1);
    const Panel r = adapt(mid, hi, right, 0.5 * target, depth + 1);
    return {l.value + r.value, l.error + r.error};
  }

  std::size_t evaluations() const { return evaluations_; }
  bool exhausted() const { return exhausted_ || floor_limited_; }

 private:
  const UnitIntegrand& f_;
  double p_;
  double q_;
  UnitIntegralOptions opts_;
  std::size_t evaluations_ = 0;
  bool exhausted_ = false;
  bool floor_limited_ = false;
};

}  // namespace

QuadratureResult integrate_unit(const UnitIntegrand& f, double p, double q, double lo, double hi,
                                const UnitIntegralOptions& opts) {
  if (!(lo >= 0.0) || !(hi <= 1.0) || !(lo < hi)) {
    throw DomainError("integrate_unit: need 0 <= lo < hi <= 1");
  }
  if ((lo == 0.0 && !(p > -1.0)) || (hi == 1.0 && !(q > -1.0))) {
    throw DomainError("integrate_unit: endpoint exponent must exceed -1 for convergence");
  }
  UnitIntegrator integrator(f, p, q, opts);
  const Panel whole = integrator.panel(lo, hi);
  const double target = opts.tol * std::max(std::abs(whole.value), 1e-300);
  const Panel result = integrator.adapt(lo, hi, whole, target, 0);
  if (!std::isfinite(result.value)) {
    throw AccuracyError("integrate_unit: non-finite integrand value", result.value, result.error);
  }
  if (integrator.exhausted() && result.error > target) {
    std::ostringstream os;
    os << "integrate_unit: tolerance " << opts.tol << " not reached (error estimate "
       << result.error << ")";
    throw AccuracyError(os.str(), result.value, result.error);
  }
  return {result.value, result.error, integrator.evaluations()};
}

}  // namespace saigo::quad
