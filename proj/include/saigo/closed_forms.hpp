#pragma once

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "saigo/series.hpp"

namespace saigo::cf {

/// Parameters shared by every theorem: operator triple, integrand exponent
/// lambda, and the k-Bessel parameters (v, c, k).
struct TheoremParams {
  double alpha = 1.0;
  double beta = 0.0;
  double eta = 0.0;
  double lambda = 1.0;
  double v = 0.0;
  double c = 1.0;
  double k = 1.0;

  /// lambda/k + v/k.
  double L() const { return (lambda + v) / k; }
  /// 1 - lambda/k + v/k.
  double M() const { return 1.0 - lambda / k + v / k; }
  series::KBesselParams bessel() const { return {v, c, k}; }
};

/// How the series argument depends on x.
enum class ArgumentRule {
  left,   ///< z = -c x^2 / (4k)
  right,  ///< z = -c / (4k x^2)
};

enum class Variant { rl_left, ek_left, rl_right, ek_right };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

using SeriesSpec = std::variant<series::WrightSpec, series::HypergeomSpec>;

/// prefactor * x^power_of_x * series(argument(x)).
struct ClosedForm {
  std::string label;
  double prefactor_log = 0.0;
  int prefactor_sign = 1;
  double power_of_x = 0.0;
  SeriesSpec series;
  ArgumentRule rule = ArgumentRule::left;
  double c = 1.0;
  double k = 1.0;
  /// Extra multiplier on the argument (4^{m} from unbalanced duplication).
  double argument_scale = 1.0;

  double prefactor() const;
  double argument(double x) const;
  bool is_wright() const { return std::holds_alternative<series::WrightSpec>(series); }
  /// Value with an absolute truncation estimate. Requires x > 0.
  series::SeriesValue evaluate(double x, double tol) const;
};

ClosedForm theorem21_spec(const TheoremParams& p);
ClosedForm theorem24_spec(const TheoremParams& p);
ClosedForm corollary_wright_spec(Variant variant, const TheoremParams& p);

struct Reduction {
  series::HypergeomSpec spec;
  /// 4^{(upper step-2 count) - (lower step-2 count)}.
  double argument_scale = 1.0;
};

/// Rewrites a Wright spec with steps in {1, 2} as a pFq. The prefactor is
/// prod Gamma(a_i) / prod Gamma(b_j) over the pair coefficients.
Reduction duplication_reduce(const series::WrightSpec& w);

ClosedForm theorem31_spec(const TheoremParams& p);
ClosedForm theorem34_spec(const TheoremParams& p);
ClosedForm corollary_pfq_spec(Variant variant, const TheoremParams& p);

/// Known theorem ids: 2.1, 2.4, 3.1, 3.4, cor2.2, cor2.3, cor2.5, cor2.6,
/// cor3.2, cor3.3, cor3.5, cor3.6.
const std::vector<std::string>& theorem_ids();
bool is_known_theorem(const std::string& id);
bool is_right_sided(const std::string& id);
/// The operator family a theorem id applies: "saigo", "rl" or "ek".
std::string theorem_family(const std::string& id);
/// Parameters with beta (and eta for RL) fixed as the theorem requires.
TheoremParams normalize_for(const std::string& id, TheoremParams p);
ClosedForm closed_form_for(const std::string& id, const TheoremParams& p);

nlohmann::json to_json(const ClosedForm& f);
ClosedForm closed_form_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TheoremParams& p);
TheoremParams theorem_params_from_json(const nlohmann::json& j);

}  // namespace saigo::cf
