#include "saigo/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "saigo/errors.hpp"
#include "saigo/special.hpp"

namespace saigo::cf {

using series::HypergeomSpec;
using series::WrightPair;
using series::WrightSpec;

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void check_common(const TheoremParams& p) {
  for (double x : {p.alpha, p.beta, p.eta, p.lambda, p.v, p.c, p.k}) {
    require(std::isfinite(x), "theorem parameters must be finite");
  }
  require(p.alpha > 0.0, "alpha > 0 violated (alpha = " + fmt(p.alpha) + ")");
  require(p.k > 0.0, "k > 0 violated (k = " + fmt(p.k) + ")");
  require(p.v > -1.0, "v > -1 violated (v = " + fmt(p.v) + ")");
}

void check_left(const TheoremParams& p) {
  check_common(p);
  const double bound = std::max(0.0, p.beta - p.eta);
  require(p.L() > bound,
          "(lambda+v)/k > max(0, beta-eta) violated: " + fmt(p.L()) + " <= " + fmt(bound));
}

void check_right(const TheoremParams& p) {
  check_common(p);
  require(p.M() + p.beta > 0.0,
          "1 - (lambda-v)/k + beta > 0 violated: " + fmt(p.M() + p.beta) + " <= 0");
  require(p.M() + p.eta > 0.0,
          "1 - (lambda-v)/k + eta > 0 violated: " + fmt(p.M() + p.eta) + " <= 0");
}

/// (2k)^{-v/k}.
double bessel_log_prefactor(const TheoremParams& p) { return -(p.v / p.k) * std::log(2.0 * p.k); }

ClosedForm wright_form(std::string label, const TheoremParams& p, double power, WrightSpec spec,
                       ArgumentRule rule) {
  ClosedForm f;
  f.label = std::move(label);
  f.prefactor_log = bessel_log_prefactor(p);
  f.prefactor_sign = 1;
  f.power_of_x = power;
  f.series = std::move(spec);
  f.rule = rule;
  f.c = p.c;
  f.k = p.k;
  return f;
}

ClosedForm reduce_form(std::string label, const ClosedForm& w) {
  const Reduction r = duplication_reduce(std::get<WrightSpec>(w.series));
  ClosedForm f = w;
  f.label = std::move(label);
  HypergeomSpec spec = r.spec;
  if (spec.prefactor == 0.0) {
    throw DomainError("degenerate parameters: gamma-ratio prefactor vanishes");
  }
  f.prefactor_log += std::log(std::abs(spec.prefactor));
  f.prefactor_sign *= spec.prefactor < 0.0 ? -1 : 1;
  spec.prefactor = 1.0;
  f.series = std::move(spec);
  f.argument_scale = w.argument_scale * r.argument_scale;
  return f;
}

TheoremParams with_beta(TheoremParams p, double beta) {
  p.beta = beta;
  return p;
}

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::rl_left: return "rl_left";
    case Variant::ek_left: return "ek_left";
    case Variant::rl_right: return "rl_right";
    case Variant::ek_right: return "ek_right";
  }
  return "?";
}

Variant parse_variant(const std::string& s) {
  if (s == "rl_left") return Variant::rl_left;
  if (s == "ek_left") return Variant::ek_left;
  if (s == "rl_right") return Variant::rl_right;
  if (s == "ek_right") return Variant::ek_right;
  throw DomainError("unknown corollary variant '" + s + "'");
}

double ClosedForm::prefactor() const { return prefactor_sign * std::exp(prefactor_log); }

double ClosedForm::argument(double x) const {
  const double base = rule == ArgumentRule::left ? -c * x * x / (4.0 * k) : -c / (4.0 * k * x * x);
  return argument_scale * base;
}

series::SeriesValue ClosedForm::evaluate(double x, double tol) const {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("closed form requires x > 0");
  const double z = argument(x);
  series::SeriesValue s = is_wright() ? series::eval_wright(std::get<WrightSpec>(series), z, tol)
                                      : series::eval_pfq(std::get<HypergeomSpec>(series), z, tol);
  const double scale = prefactor_sign * std::exp(prefactor_log + power_of_x * std::log(x));
  s.value *= scale;
  s.trunc_estimate *= std::abs(scale);
  return s;
}

ClosedForm theorem21_spec(const TheoremParams& p) {
  check_left(p);
  const double L = p.L(), vk = p.v / p.k;
  WrightSpec w;
  w.upper = {{L, 2.0}, {L + p.eta - p.beta, 2.0}};
  w.lower = {{L - p.beta, 2.0}, {L + p.alpha + p.eta, 2.0}, {vk + 1.0, 1.0}};
  return wright_form("2.1", p, L - p.beta - 1.0, std::move(w), ArgumentRule::left);
}

ClosedForm theorem24_spec(const TheoremParams& p) {
  check_right(p);
  const double M = p.M(), vk = p.v / p.k;
  WrightSpec w;
  w.upper = {{M + p.beta, 2.0}, {M + p.eta, 2.0}};
  w.lower = {{M, 2.0}, {M + p.alpha + p.beta + p.eta, 2.0}, {vk + 1.0, 1.0}};
  return wright_form("2.4", p, p.lambda / p.k - vk - p.beta - 1.0, std::move(w),
                     ArgumentRule::right);
}

ClosedForm corollary_wright_spec(Variant variant, const TheoremParams& p) {
  const double vk = p.v / p.k;
  WrightSpec w;
  switch (variant) {
    case Variant::rl_left: {
      const TheoremParams q = with_beta(p, -p.alpha);
      check_common(q);
      require(q.L() > 0.0, "(lambda+v)/k > 0 violated: " + fmt(q.L()) + " <= 0");
      const double L = q.L();
      w.upper = {{L, 2.0}};
      w.lower = {{L + p.alpha, 2.0}, {vk + 1.0, 1.0}};
      return wright_form("cor2.2", q, L + p.alpha - 1.0, std::move(w), ArgumentRule::left);
    }
    case Variant::ek_left: {
      const TheoremParams q = with_beta(p, 0.0);
      check_left(q);
      const double L = q.L();
      w.upper = {{L + p.eta, 2.0}};
      w.lower = {{L + p.alpha + p.eta, 2.0}, {vk + 1.0, 1.0}};
      return wright_form("cor2.3", q, L - 1.0, std::move(w), ArgumentRule::left);
    }
    case Variant::rl_right: {
      const TheoremParams q = with_beta(p, -p.alpha);
      check_common(q);
      require(q.M() > p.alpha,
              "1 - (lambda-v)/k > alpha violated: " + fmt(q.M()) + " <= " + fmt(p.alpha));
      const double M = q.M();
      w.upper = {{M - p.alpha, 2.0}};
      w.lower = {{M, 2.0}, {vk + 1.0, 1.0}};
      return wright_form("cor2.5", q, p.lambda / p.k - vk + p.alpha - 1.0, std::move(w),
                         ArgumentRule::right);
    }
    case Variant::ek_right: {
      const TheoremParams q = with_beta(p, 0.0);
      check_right(q);
      const double M = q.M();
      w.upper = {{M + p.eta, 2.0}};
      w.lower = {{M + p.alpha + p.eta, 2.0}, {vk + 1.0, 1.0}};
      return wright_form("cor2.6", q, p.lambda / p.k - vk - 1.0, std::move(w), ArgumentRule::right);
    }
  }
  throw DomainError("unknown corollary variant");
}

Reduction duplication_reduce(const WrightSpec& w) {
  Reduction r;
  special::GammaRatio ratio;
  int twos = 0;
  auto split = [&](const std::vector<WrightPair>& pairs, std::vector<double>& out, bool upper) {
    std::vector<double> halves;
    for (const WrightPair& q : pairs) {
      if (!std::isfinite(q.coeff)) throw DomainError("Wright coefficient must be finite");
      if (q.step == 1.0) {
        out.push_back(q.coeff);
      } else if (q.step == 2.0) {
        halves.push_back(q.coeff / 2.0);
        halves.push_back((q.coeff + 1.0) / 2.0);
        twos += upper ? 1 : -1;
      } else {
        throw DomainError("duplication_reduce supports steps 1 and 2 only (got " + fmt(q.step) +
                          ")");
      }
      if (upper) {
        ratio.numerator(q.coeff);
      } else if (special::near_nonpositive_integer(q.coeff)) {
        throw DomainError("degenerate lower parameter " + fmt(q.coeff) +
                          " lies on the gamma pole lattice");
      } else {
        ratio.denominator(q.coeff);
      }
    }
    out.insert(out.end(), halves.begin(), halves.end());
  };
  split(w.upper, r.spec.upper, true);
  split(w.lower, r.spec.lower, false);
  r.spec.prefactor = ratio.value();
  r.argument_scale = std::pow(4.0, twos);
  return r;
}

ClosedForm theorem31_spec(const TheoremParams& p) { return reduce_form("3.1", theorem21_spec(p)); }

ClosedForm theorem34_spec(const TheoremParams& p) { return reduce_form("3.4", theorem24_spec(p)); }

ClosedForm corollary_pfq_spec(Variant variant, const TheoremParams& p) {
  static const char* labels[] = {"cor3.2", "cor3.3", "cor3.5", "cor3.6"};
  return reduce_form(labels[static_cast<int>(variant)], corollary_wright_spec(variant, p));
}

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = {"2.1",    "2.4",    "3.1",    "3.4",
                                               "cor2.2", "cor2.3", "cor2.5", "cor2.6",
                                               "cor3.2", "cor3.3", "cor3.5", "cor3.6"};
  return ids;
}

bool is_known_theorem(const std::string& id) {
  const auto& ids = theorem_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

namespace {
Variant variant_of(const std::string& id) {
  if (id == "cor2.2" || id == "cor3.2") return Variant::rl_left;
  if (id == "cor2.3" || id == "cor3.3") return Variant::ek_left;
  if (id == "cor2.5" || id == "cor3.5") return Variant::rl_right;
  if (id == "cor2.6" || id == "cor3.6") return Variant::ek_right;
  throw DomainError("unknown theorem id '" + id + "'");
}
}  // namespace

bool is_right_sided(const std::string& id) {
  if (id == "2.1" || id == "3.1") return false;
  if (id == "2.4" || id == "3.4") return true;
  const Variant v = variant_of(id);
  return v == Variant::rl_right || v == Variant::ek_right;
}

std::string theorem_family(const std::string& id) {
  if (id == "2.1" || id == "2.4" || id == "3.1" || id == "3.4") return "saigo";
  const Variant v = variant_of(id);
  return v == Variant::rl_left || v == Variant::rl_right ? "rl" : "ek";
}

TheoremParams normalize_for(const std::string& id, TheoremParams p) {
  const std::string fam = theorem_family(id);
  if (fam == "rl") {
    p.beta = -p.alpha;
    p.eta = 0.0;
  } else if (fam == "ek") {
    p.beta = 0.0;
  }
  return p;
}

ClosedForm closed_form_for(const std::string& id, const TheoremParams& p) {
  if (id == "2.1") return theorem21_spec(p);
  if (id == "2.4") return theorem24_spec(p);
  if (id == "3.1") return theorem31_spec(p);
  if (id == "3.4") return theorem34_spec(p);
  const Variant v = variant_of(id);
  const TheoremParams q = normalize_for(id, p);
  return id.rfind("cor2.", 0) == 0 ? corollary_wright_spec(v, q) : corollary_pfq_spec(v, q);
}

nlohmann::json to_json(const ClosedForm& f) {
  nlohmann::json j;
  j["label"] = f.label;
  j["prefactor"] = {
      {"log_abs", f.prefactor_log}, {"sign", f.prefactor_sign}, {"value", f.prefactor()}};
  j["power_of_x"] = f.power_of_x;
  nlohmann::json s;
  if (f.is_wright()) {
    const auto& w = std::get<WrightSpec>(f.series);
    auto pairs = [](const std::vector<WrightPair>& v) {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& q : v) a.push_back({q.coeff, q.step});
      return a;
    };
    s = {{"kind", "wright"}, {"upper", pairs(w.upper)}, {"lower", pairs(w.lower)}};
  } else {
    const auto& h = std::get<HypergeomSpec>(f.series);
    s = {{"kind", "pfq"}, {"upper", h.upper}, {"lower", h.lower}, {"prefactor", h.prefactor}};
  }
  j["series"] = s;
  j["argument"] = {
      {"rule", f.rule == ArgumentRule::left ? "left" : "right"},
      {"formula", f.rule == ArgumentRule::left ? "-scale*c*x^2/(4k)" : "-scale*c/(4k*x^2)"},
      {"c", f.c},
      {"k", f.k},
      {"scale", f.argument_scale}};
  return j;
}

ClosedForm closed_form_from_json(const nlohmann::json& j) {
  ClosedForm f;
  f.label = j.at("label").get<std::string>();
  f.prefactor_log = j.at("prefactor").at("log_abs").get<double>();
  f.prefactor_sign = j.at("prefactor").at("sign").get<int>();
  f.power_of_x = j.at("power_of_x").get<double>();
  const auto& s = j.at("series");
  const std::string kind = s.at("kind").get<std::string>();
  if (kind == "wright") {
    WrightSpec w;
    for (const auto& q : s.at("upper"))
      w.upper.push_back({q.at(0).get<double>(), q.at(1).get<double>()});
    for (const auto& q : s.at("lower"))
      w.lower.push_back({q.at(0).get<double>(), q.at(1).get<double>()});
    f.series = w;
  } else if (kind == "pfq") {
    HypergeomSpec h;
    h.upper = s.at("upper").get<std::vector<double>>();
    h.lower = s.at("lower").get<std::vector<double>>();
    h.prefactor = s.at("prefactor").get<double>();
    f.series = h;
  } else {
    throw DomainError("unknown series kind '" + kind + "'");
  }
  const auto& a = j.at("argument");
  const std::string rule = a.at("rule").get<std::string>();
  if (rule != "left" && rule != "right") throw DomainError("unknown argument rule '" + rule + "'");
  f.rule = rule == "left" ? ArgumentRule::left : ArgumentRule::right;
  f.c = a.at("c").get<double>();
  f.k = a.at("k").get<double>();
  f.argument_scale = a.at("scale").get<double>();
  return f;
}

nlohmann::json to_json(const TheoremParams& p) {
  return {{"alpha", p.alpha}, {"beta", p.beta}, {"eta", p.eta}, {"lambda", p.lambda},
          {"v", p.v},         {"c", p.c},       {"k", p.k}};
}

TheoremParams theorem_params_from_json(const nlohmann::json& j) {
  TheoremParams p;
  p.alpha = j.at("alpha").get<double>();
  p.beta = j.at("beta").get<double>();
  p.eta = j.at("eta").get<double>();
  p.lambda = j.at("lambda").get<double>();
  p.v = j.at("v").get<double>();
  p.c = j.at("c").get<double>();
  p.k = j.at("k").get<double>();
  return p;
}

}  // namespace saigo::cf
