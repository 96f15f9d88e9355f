#include "saigo/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <thread>

#include "saigo/errors.hpp"
#include "saigo/operators.hpp"
#include "saigo/special.hpp"

namespace saigo::verify {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxResamples = 1000;
// pFq parameters closer than this to the pole lattice are resampled.
constexpr double kLatticeClearance = 0.01;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Portable uniform draw; std::uniform_real_distribution is implementation-defined.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()(double lo, double hi) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 rng_;
};

double lattice_distance(double x) {
  if (x > 0.5) return x;
  return std::abs(x - std::round(x));
}

bool well_separated(const cf::ClosedForm& f) {
  if (f.is_wright()) {
    for (const auto& q : std::get<series::WrightSpec>(f.series).upper) {
      if (lattice_distance(q.coeff) < kLatticeClearance) return false;
    }
    return true;
  }
  const auto& h = std::get<series::HypergeomSpec>(f.series);
  for (double a : h.upper) {
    if (lattice_distance(a) < kLatticeClearance) return false;
  }
  for (double b : h.lower) {
    if (lattice_distance(b) < kLatticeClearance) return false;
  }
  return true;
}

std::string fmt_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

ops::SaigoParams operator_for(const std::string& id, const cf::TheoremParams& p) {
  const ops::Side side = cf::is_right_sided(id) ? ops::Side::right : ops::Side::left;
  const std::string fam = cf::theorem_family(id);
  if (fam == "rl") return ops::SaigoParams::riemann_liouville(p.alpha, side);
  if (fam == "ek") return ops::SaigoParams::erdelyi_kober(p.alpha, p.eta, side);
  return ops::SaigoParams::saigo(p.alpha, p.beta, p.eta, side);
}

double relative(double lhs, double rhs) {
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) return kNaN;
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(lhs - rhs) / std::abs(rhs);
}

struct Alternative {
  std::string description;
  cf::ClosedForm form;
};

// Alternative parameterizations of the shipped forms, scored against quadrature.
std::vector<Alternative> alternatives(const std::string& id, const cf::TheoremParams& p) {
  std::vector<Alternative> out;
  const double k = p.k, vk = p.v / p.k;
  if (id == "2.1") {
    cf::ClosedForm f = cf::theorem21_spec(p);
    std::get<series::WrightSpec>(f.series).upper[1].step = 2.0 * k;
    out.push_back({"step 2k on the (L+eta-beta) numerator pair", f});
  } else if (id == "cor2.2") {
    cf::ClosedForm f = cf::corollary_wright_spec(cf::Variant::rl_left, p);
    auto& w = std::get<series::WrightSpec>(f.series);
    w.upper[0] = {p.v + p.lambda, 2.0 * k};
    w.lower[1] = {vk + 1.0, k};
    out.push_back({"numerator pair (v+lambda, 2k) with denominator pair (v/k+1, k)", f});
  } else if (id == "2.4") {
    cf::ClosedForm f = cf::theorem24_spec(p);
    f.argument_scale = k;
    out.push_back({"argument -c/(4x^2) without the 1/k factor", f});
    cf::ClosedForm g = cf::theorem24_spec(p);
    std::get<series::WrightSpec>(g.series).lower[2].step = k;
    out.push_back({"denominator pair (v/k+1, k)", g});
  } else if (id == "3.1") {
    cf::ClosedForm f = cf::theorem31_spec(p);
    std::get<series::HypergeomSpec>(f.series).lower[2] = (p.L() - p.beta - 1.0) / 2.0;
    out.push_back({"denominator parameter (L-beta-1)/2 in place of (L-beta+1)/2", f});
    cf::ClosedForm g = cf::theorem31_spec(p);
    std::get<series::HypergeomSpec>(g.series).lower[3] = p.L() + (p.alpha + p.eta) / 2.0;
    out.push_back({"denominator parameter L+(alpha+eta)/2 in place of (L+alpha+eta)/2", g});
  } else if (id == "cor3.5") {
    cf::ClosedForm f = cf::corollary_pfq_spec(cf::Variant::rl_right, p);
    std::get<series::HypergeomSpec>(f.series).upper[0] = (p.M() + p.alpha) / 2.0;
    out.push_back({"numerator parameter (1-beta)/2-lambda/(2k)+v/(2k) read with beta=-alpha", f});
  }
  return out;
}

std::vector<std::string> discrepancy_notes(const std::vector<std::string>& ids,
                                           const std::vector<VerificationRecord>& records,
                                           double tol) {
  std::vector<std::string> notes;
  for (const std::string& id : ids) {
    if (id == "cor2.5" || id == "cor3.5") {
      notes.push_back(id + ": evaluated with the right-sided Riemann-Liouville operator");
    }
    const auto it = std::find_if(records.begin(), records.end(), [&](const auto& r) {
      return r.draw.theorem_id == id && r.draw.seed_index == 0;
    });
    if (it == records.end()) continue;
    std::vector<Alternative> alts;
    try {
      alts = alternatives(id, it->draw.params);
    } catch (const std::exception& e) {
      notes.push_back(id + ": alternative forms not constructible (" + e.what() + ")");
      continue;
    }
    for (const Alternative& a : alts) {
      std::string verdict;
      try {
        const double value = a.form.evaluate(it->x, 1e-14).value;
        const double r = relative(value, it->lhs);
        verdict = "residual " + fmt_sci(r) + " against quadrature on draw 0 at x=" + fmt_g(it->x) +
                  (r > tol ? ", rejected" : ", not distinguishable on this draw");
      } catch (const std::exception& e) {
        verdict = std::string("not evaluable (") + e.what() + ")";
      }
      notes.push_back(id + ": alternative with " + a.description + ": " + verdict);
    }
  }
  return notes;
}

}  // namespace

bool passes(double lhs, double rhs, double lhs_err, double tol) {
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) return false;
  const double r = relative(lhs, rhs);
  if (r <= tol) return true;
  const double err = std::isfinite(lhs_err) ? lhs_err : 0.0;
  return std::abs(lhs - rhs) <= std::max(10.0 * err, kAbsFloor);
}

int residual_class(double worst, double tol) {
  if (!std::isfinite(worst) || worst > tol) return 2;
  return worst <= tol * 1e-3 ? 0 : 1;
}

std::vector<ParameterDraw> sample_params(const std::string& id, std::size_t n, std::uint64_t seed,
                                         double margin) {
  if (!cf::is_known_theorem(id)) throw DomainError("unknown theorem id '" + id + "'");
  if (n < 1) throw DomainError("sample_params requires n >= 1");
  if (!(margin >= 0.0)) throw DomainError("sampling margin must be nonnegative");
  Uniform u(splitmix64(seed ^ fnv1a(id)));
  const bool right = cf::is_right_sided(id);
  const bool pfq = id == "3.1" || id == "3.4" || id.rfind("cor3.", 0) == 0;

  std::vector<ParameterDraw> draws;
  draws.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    cf::TheoremParams p;
    p.alpha = u(0.3, 1.8);
    p.beta = u(-1.0, 1.0);
    p.eta = u(0.0, 2.0);
    p.v = u(-0.5, 2.0);
    p.k = u(0.5, 2.5);
    const double pick = u(0.0, 1.0);
    const double cont = u(0.25, 2.0);
    p.c = pick < 0.25 ? -1.0 : pick < 0.5 ? 1.0 : cont;
    p = cf::normalize_for(id, p);

    bool ok = false;
    for (int attempt = 0; attempt < kMaxResamples && !ok; ++attempt) {
      const double base = u(-1.0, 3.0);
      if (!right) {
        const double lo = p.k * (std::max(0.0, p.beta - p.eta) + margin) - p.v;
        p.lambda = base + std::max(0.0, lo - (-1.0));
      } else {
        const double hi = p.v + p.k * (1.0 + std::min(p.beta, p.eta) - margin);
        p.lambda = base + std::min(0.0, hi - 3.0);
      }
      try {
        const cf::ClosedForm f = cf::closed_form_for(id, p);
        ok = !pfq || well_separated(f);
      } catch (const DomainError&) {
        ok = false;
      }
    }
    if (!ok) {
      throw DomainError("sample_params: no admissible lambda for theorem " + id + " after " +
                        std::to_string(kMaxResamples) + " resamples");
    }
    draws.push_back({p, id, i});
  }
  return draws;
}

std::vector<VerificationRecord> check_identity(const ParameterDraw& draw,
                                               const std::vector<double>& x_points, double tol) {
  const std::string& id = draw.theorem_id;
  if (!cf::is_known_theorem(id)) throw DomainError("unknown theorem id '" + id + "'");
  const bool right = cf::is_right_sided(id);
  for (double x : x_points) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("x points must be positive");
    if (right && x < kMinRightX) {
      throw DomainError("right-sided theorem " + id + " requires x >= 0.5, got " + fmt_g(x));
    }
  }
  const cf::TheoremParams& p = draw.params;
  const double series_tol = std::min(tol / 100.0, 1e-12);
  const double quad_tol = std::clamp(tol * 1e-3, 1e-12, 1e-9);

  std::vector<VerificationRecord> out;
  out.reserve(x_points.size());
  std::string setup_error;
  std::optional<cf::ClosedForm> form;
  std::optional<ops::SaigoParams> op;
  std::optional<ops::Integrand> f;
  try {
    form = cf::closed_form_for(id, p);
    op = operator_for(id, p);
    f = right ? ops::Integrand::k_bessel_reciprocal(p.bessel(), p.lambda, series_tol)
              : ops::Integrand::k_bessel(p.bessel(), p.lambda, series_tol);
  } catch (const std::exception& e) {
    setup_error = e.what();
  }

  for (double x : x_points) {
    VerificationRecord r;
    r.draw = draw;
    r.x = x;
    r.lhs = r.rhs = r.rel_residual = r.lhs_error_estimate = kNaN;
    if (!setup_error.empty()) {
      r.diagnostic = "setup: " + setup_error;
      out.push_back(r);
      continue;
    }
    bool quad_ok = true;
    try {
      const auto q = ops::apply(*f, *op, x, quad_tol);
      r.lhs = q.value;
      r.lhs_error_estimate = q.abs_error_estimate;
    } catch (const AccuracyError& e) {
      quad_ok = false;
      r.lhs = e.best_estimate();
      r.lhs_error_estimate = e.error_estimate();
      r.diagnostic = std::string("quadrature: ") + e.what();
    } catch (const std::exception& e) {
      quad_ok = false;
      r.diagnostic = std::string("quadrature: ") + e.what();
    }
    try {
      r.rhs = form->evaluate(x, 1e-14).value;
    } catch (const std::exception& e) {
      r.diagnostic += (r.diagnostic.empty() ? "" : "; ") + std::string("closed form: ") + e.what();
    }
    r.rel_residual = relative(r.lhs, r.rhs);
    r.pass = quad_ok && r.diagnostic.empty() && passes(r.lhs, r.rhs, r.lhs_error_estimate, tol);
    if (r.diagnostic.empty() && !r.pass) r.diagnostic = "residual exceeds tolerance";
    out.push_back(r);
  }
  return out;
}

std::size_t Report::passed() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const auto& r) { return r.pass; }));
}

void validate(const SuiteConfig& c) {
  for (const auto& id : c.theorems) {
    if (!cf::is_known_theorem(id)) throw DomainError("unknown theorem id '" + id + "'");
  }
  if (c.n < 1) throw DomainError("n must be at least 1");
  if (!(c.tol > 0.0 && c.tol <= 1e-2)) throw DomainError("tol must lie in (0, 1e-2]");
  if (c.x_points.empty()) throw DomainError("at least one x point is required");
  for (double x : c.x_points) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("x points must be positive");
  }
  const double xmin = *std::min_element(c.x_points.begin(), c.x_points.end());
  for (const auto& id : c.theorems) {
    if (cf::is_right_sided(id) && xmin < kMinRightX) {
      throw DomainError("right-sided theorem " + id + " requires x points >= 0.5");
    }
  }
  if (!(c.margin >= 0.0)) throw DomainError("margin must be nonnegative");
}

Report run_suite(const SuiteConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();

  std::vector<double> xs = config.x_points;
  std::sort(xs.begin(), xs.end());

  std::vector<ParameterDraw> tasks;
  for (const auto& id : config.theorems) {
    auto d = sample_params(id, config.n, config.seed, config.margin);
    tasks.insert(tasks.end(), d.begin(), d.end());
  }

  std::vector<std::vector<VerificationRecord>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      slots[i] = check_identity(tasks[i], xs, config.tol);
    }
  };
  const unsigned nthreads =
      std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(tasks.size())));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  Report rep;
  rep.suite_id = config.suite_id;
  rep.seed = config.seed;
  rep.tolerance = config.tol;
  rep.n_per_theorem = config.n;
  rep.margin = config.margin;
  rep.x_points = xs;
  rep.theorems = config.theorems;
  for (auto& s : slots) {
    for (auto& r : s) rep.records.push_back(std::move(r));
  }
  std::stable_sort(rep.records.begin(), rep.records.end(), [](const auto& a, const auto& b) {
    if (a.draw.theorem_id != b.draw.theorem_id) return a.draw.theorem_id < b.draw.theorem_id;
    if (a.draw.seed_index != b.draw.seed_index) return a.draw.seed_index < b.draw.seed_index;
    return a.x < b.x;
  });

  std::map<std::string, TheoremSummary> by_id;
  for (const auto& r : rep.records) {
    TheoremSummary& s = by_id[r.draw.theorem_id];
    s.theorem_id = r.draw.theorem_id;
    ++s.records;
    if (r.pass) ++s.passed;
    const double res =
        std::isnan(r.rel_residual) ? std::numeric_limits<double>::infinity() : r.rel_residual;
    s.worst_residual = std::max(s.worst_residual, res);
  }
  std::vector<std::string> unique_ids;
  for (auto& [id, s] : by_id) {
    rep.per_theorem.push_back(s);
    unique_ids.push_back(id);
  }
  rep.discrepancy_notes = discrepancy_notes(unique_ids, rep.records, config.tol);

  if (config.include_timing) {
    rep.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return rep;
}

}  // namespace saigo::verify
