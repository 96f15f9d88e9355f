#include "saigo/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "saigo/closed_forms.hpp"
#include "saigo/errors.hpp"
#include "saigo/operators.hpp"
#include "saigo/series.hpp"
#include "saigo/special.hpp"
#include "saigo/verify.hpp"

namespace saigo::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kFlagKeys = {"include-timing", "reciprocal"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) throw DomainError("cannot parse " + what + " '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_number(item, what));
  return out;
}

std::vector<series::WrightPair> parse_pairs(const std::string& s, const std::string& what) {
  std::vector<series::WrightPair> out;
  for (const auto& item : split(s, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw DomainError(what + " entries must have the form coeff:step, got '" + item + "'");
    }
    out.push_back(
        {parse_number(item.substr(0, colon), what), parse_number(item.substr(colon + 1), what)});
  }
  return out;
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void check_tol(double tol) {
  if (!(tol > 0.0 && tol <= 1e-2)) throw DomainError("--tol must lie in (0, 1e-2]");
}

enum class Format { json, text, csv };

Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "text") return Format::text;
  if (s == "csv") return Format::csv;
  throw DomainError("unknown format '" + s + "' (expected json, text or csv)");
}

void emit(const std::string& payload, const std::string& output, std::ostream& out,
          std::ostream& err) {
  if (output.empty()) {
    out << payload;
    return;
  }
  const auto path = resolve_output(output);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open output file " + path.string());
  f << payload;
  if (!f) throw DomainError("failed writing output file " + path.string());
  err << "wrote " << path.string() << "\n";
}

// A flat record rendered in one of the three formats.
std::string render_flat(const std::vector<std::pair<std::string, json>>& fields, Format fmt,
                        const json& full) {
  if (fmt == Format::json) return full.dump(2) + "\n";
  auto show = [](const json& v) {
    if (v.is_null()) return std::string("null");
    if (v.is_number_float()) return g17(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  std::ostringstream os;
  if (fmt == Format::text) {
    std::size_t w = 0;
    for (const auto& [k, v] : fields) w = std::max(w, k.size());
    for (const auto& [k, v] : fields)
      os << k << std::string(w + 2 - k.size(), ' ') << show(v) << "\n";
  } else {
    for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << fields[i].first;
    os << "\n";
    for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << show(fields[i].second);
    os << "\n";
  }
  return os.str();
}

struct Common {
  std::string format = "json";
  std::string output;
  std::string config;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--format", c.format, "Output format: json, text or csv")->capture_default_str();
  app->add_option("--output", c.output, "Write to this file instead of standard output");
  app->add_option("--config", c.config, "Flat key=value file of default flags");
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  Common common;
  double v = 0.0, c = 1.0, k = 1.0, z = 0.0, tol = 1e-14;
  std::string upper, lower;
  double prefactor = 1.0;
};

int cmd_eval(const std::string& kind, const EvalArgs& a, std::ostream& out, std::ostream& err) {
  check_tol(a.tol);
  const Format fmt = parse_format(a.common.format);
  json j = {{"command", "eval"}, {"kind", kind}, {"z", a.z}, {"tol", a.tol}};
  series::SeriesValue s;
  if (kind == "kbessel") {
    s = series::eval_k_bessel({a.v, a.c, a.k}, a.z, a.tol);
    j["params"] = {{"v", a.v}, {"c", a.c}, {"k", a.k}};
  } else if (kind == "pfq") {
    series::HypergeomSpec spec{parse_list(a.upper, "--upper"), parse_list(a.lower, "--lower"),
                               a.prefactor};
    s = series::eval_pfq(spec, a.z, a.tol);
    j["params"] = {{"upper", spec.upper}, {"lower", spec.lower}, {"prefactor", spec.prefactor}};
  } else if (kind == "wright") {
    series::WrightSpec spec{parse_pairs(a.upper, "--upper"), parse_pairs(a.lower, "--lower")};
    s = series::eval_wright(spec, a.z, a.tol);
    json up = json::array(), lo = json::array();
    for (const auto& q : spec.upper) up.push_back({q.coeff, q.step});
    for (const auto& q : spec.lower) lo.push_back({q.coeff, q.step});
    j["params"] = {{"upper", up}, {"lower", lo}};
  } else {
    s.value = special::k_gamma({a.z, a.k});
    s.converged = true;
    j["params"] = {{"k", a.k}};
  }
  j["value"] = num(s.value);
  j["terms_used"] = s.terms_used;
  j["trunc_estimate"] = num(s.trunc_estimate);
  j["converged"] = s.converged;
  emit(render_flat({{"kind", kind},
                    {"value", j["value"]},
                    {"terms_used", j["terms_used"]},
                    {"trunc_estimate", j["trunc_estimate"]},
                    {"converged", j["converged"]}},
                   fmt, j),
       a.common.output, out, err);
  if (!s.converged) {
    err << "warning: series did not meet the tolerance within " << series::kMaxTerms << " terms\n";
  }
  return kExitOk;
}

// ---- transform ---------------------------------------------------------------

struct TransformArgs {
  Common common;
  std::string family = "saigo", side = "left";
  double alpha = 1.0, beta = 0.0, eta = 0.0, x = 1.0, tol = 1e-9;
  std::optional<double> monomial;
  std::vector<double> kbessel;
  std::optional<double> lambda;
  bool reciprocal = false;
  bool beta_given = false;
};

std::string closed_form_id(ops::Family fam, ops::Side side) {
  const bool left = side == ops::Side::left;
  switch (fam) {
    case ops::Family::saigo: return left ? "2.1" : "2.4";
    case ops::Family::riemann_liouville: return left ? "cor2.2" : "cor2.5";
    case ops::Family::erdelyi_kober: return left ? "cor2.3" : "cor2.6";
  }
  return "";
}

int cmd_transform(const TransformArgs& a, std::ostream& out, std::ostream& err) {
  check_tol(a.tol);
  const Format fmt = parse_format(a.common.format);
  const ops::Family fam = ops::parse_family(a.family);
  const ops::Side side = ops::parse_side(a.side);
  if (a.monomial.has_value() == !a.kbessel.empty()) {
    throw DomainError("exactly one of --monomial or --kbessel is required");
  }
  if (a.beta_given && fam != ops::Family::saigo) {
    throw DomainError("--beta is fixed by the " + ops::to_string(fam) + " family");
  }
  ops::SaigoParams sp =
      fam == ops::Family::riemann_liouville ? ops::SaigoParams::riemann_liouville(a.alpha, side)
      : fam == ops::Family::erdelyi_kober   ? ops::SaigoParams::erdelyi_kober(a.alpha, a.eta, side)
                                            : ops::SaigoParams::saigo(a.alpha, a.beta, a.eta, side);
  sp.validate();

  json j = {{"command", "transform"},
            {"family", ops::to_string(fam)},
            {"side", ops::to_string(side)},
            {"alpha", sp.alpha},
            {"beta", sp.beta},
            {"eta", sp.eta},
            {"x", a.x},
            {"tol", a.tol}};
  std::optional<ops::Integrand> f;
  std::optional<double> closed;
  if (a.monomial) {
    const double lam = *a.monomial;
    f = ops::Integrand::monomial(lam);
    j["integrand"] = {{"kind", "monomial"}, {"lambda", lam}};
    try {
      closed = ops::monomial_image(sp, lam).at(a.x);
      j["closed_form"] = {{"source", "monomial image"}, {"value", num(*closed)}};
    } catch (const DomainError& e) {
      j["closed_form"] = nullptr;
      j["closed_form_error"] = e.what();
    }
  } else {
    if (a.kbessel.size() != 3) throw DomainError("--kbessel takes three values: v c k");
    const series::KBesselParams kp{a.kbessel[0], a.kbessel[1], a.kbessel[2]};
    const double lam = a.lambda.value_or(kp.k);
    const bool recip = a.reciprocal || side == ops::Side::right;
    if (recip && side == ops::Side::left) {
      throw DomainError("the reciprocal k-Bessel integrand is only supported on the right side");
    }
    const double series_tol = std::min(a.tol / 100.0, 1e-12);
    f = recip ? ops::Integrand::k_bessel_reciprocal(kp, lam, series_tol)
              : ops::Integrand::k_bessel(kp, lam, series_tol);
    j["integrand"] = {{"kind", "kbessel"}, {"v", kp.v},     {"c", kp.c},
                      {"k", kp.k},         {"lambda", lam}, {"reciprocal", recip}};
    const std::string id = closed_form_id(fam, side);
    try {
      const cf::TheoremParams tp{sp.alpha, sp.beta, sp.eta, lam, kp.v, kp.c, kp.k};
      const cf::ClosedForm form = cf::closed_form_for(id, tp);
      closed = form.evaluate(a.x, 1e-14).value;
      j["closed_form"] = {
          {"source", "theorem " + id}, {"value", num(*closed)}, {"spec", cf::to_json(form)}};
    } catch (const DomainError& e) {
      j["closed_form"] = nullptr;
      j["closed_form_error"] = e.what();
    }
  }

  const auto q = ops::apply(*f, sp, a.x, a.tol);
  j["quadrature"] = {{"value", num(q.value)},
                     {"abs_error_estimate", num(q.abs_error_estimate)},
                     {"evaluations", q.evaluations}};
  json diff = nullptr;
  if (closed && *closed != 0.0) diff = num(std::abs(q.value - *closed) / std::abs(*closed));
  j["relative_difference"] = diff;
  emit(render_flat({{"quadrature", j["quadrature"]["value"]},
                    {"abs_error_estimate", j["quadrature"]["abs_error_estimate"]},
                    {"closed_form", closed ? num(*closed) : json(nullptr)},
                    {"relative_difference", diff}},
                   fmt, j),
       a.common.output, out, err);
  return kExitOk;
}

// ---- verify / report -----------------------------------------------------------

struct VerifyArgs {
  Common common;
  std::vector<std::string> theorems;
  std::size_t n = 5;
  std::uint64_t seed = 7;
  double tol = 1e-5;
  std::vector<double> x_points = {0.5, 1.0, 2.0};
  unsigned threads = 1;
  double margin = verify::kDefaultMargin;
  bool include_timing = false;
};

std::string render_report(const verify::Report& r, Format fmt) {
  switch (fmt) {
    case Format::json: return verify::render_json(r);
    case Format::text: return verify::render_text(r);
    case Format::csv: return verify::render_csv(r);
  }
  return "";
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  check_tol(a.tol);
  const Format fmt = parse_format(a.common.format);
  verify::SuiteConfig c;
  c.theorems = a.theorems;
  c.n = a.n;
  c.seed = a.seed;
  c.tol = a.tol;
  c.x_points = a.x_points;
  c.threads = a.threads;
  c.margin = a.margin;
  c.include_timing = a.include_timing;
  const verify::Report r = verify::run_suite(c);
  emit(render_report(r, fmt), a.common.output, out, err);
  if (!r.all_pass()) {
    err << (r.records.size() - r.passed()) << " of " << r.records.size() << " records failed\n";
    return kExitAccuracy;
  }
  return kExitOk;
}

int cmd_report(const std::string& input, const Common& common, std::ostream& out,
               std::ostream& err) {
  const Format fmt = parse_format(common.format);
  std::ifstream in(input, std::ios::binary);
  if (!in) throw DomainError("cannot read report file " + input);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError(std::string("report is not valid JSON: ") + e.what());
  }
  const verify::Report r = verify::report_from_json(j);
  emit(render_report(r, fmt), common.output, out, err);
  return r.all_pass() ? kExitOk : kExitAccuracy;
}

}  // namespace

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  const char* dir = std::getenv(kReportDirEnv);
  if (p.is_relative() && dir != nullptr && *dir != '\0') return std::filesystem::path(dir) / p;
  return p;
}

std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) file = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) file = args[i].substr(9);
  }
  if (file.empty()) return args;
  std::ifstream in(file);
  if (!in) throw DomainError("cannot read config file " + file);

  auto present = [&](const std::string& key) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == "--" + key || a.rfind("--" + key + "=", 0) == 0;
    });
  };
  std::vector<std::string> merged = args;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw DomainError(file + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    if (key.empty() || key == "config" || present(key)) continue;
    if (std::find(kFlagKeys.begin(), kFlagKeys.end(), key) != kFlagKeys.end()) {
      if (value == "true" || value == "1" || value.empty()) merged.push_back("--" + key);
      continue;
    }
    merged.push_back("--" + key);
    if (key == "kbessel") {
      std::istringstream vs(value);
      for (std::string tok; vs >> tok;) merged.push_back(tok);
    } else {
      merged.push_back(value);
    }
  }
  return merged;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Saigo fractional integrals of k-Bessel functions: evaluation and verification",
               "saigo"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  // eval
  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Evaluate a special function or series");
  eval->require_subcommand(1);
  auto* kb = eval->add_subcommand("kbessel", "k-Bessel function W^k_{v,c}(z)");
  kb->add_option("--v", ev.v, "Order v")->required();
  kb->add_option("--c", ev.c, "Parameter c")->capture_default_str();
  kb->add_option("--k", ev.k, "Parameter k > 0")->capture_default_str();
  kb->add_option("--z", ev.z, "Argument")->required();
  auto* pfq = eval->add_subcommand("pfq", "Generalized hypergeometric pFq(upper; lower; z)");
  pfq->add_option("--upper", ev.upper, "Comma-separated numerator parameters")->required();
  pfq->add_option("--lower", ev.lower, "Comma-separated denominator parameters")->required();
  pfq->add_option("--prefactor", ev.prefactor, "Scalar multiplier")->capture_default_str();
  pfq->add_option("--z", ev.z, "Argument")->required();
  auto* wr = eval->add_subcommand("wright", "Fox-Wright function pPsi_q");
  wr->add_option("--upper", ev.upper, "Numerator pairs coeff:step, comma-separated")->required();
  wr->add_option("--lower", ev.lower, "Denominator pairs coeff:step, comma-separated")->required();
  wr->add_option("--z", ev.z, "Argument")->required();
  auto* gk = eval->add_subcommand("gamma_k", "k-gamma function Gamma_k(z)");
  gk->add_option("--z", ev.z, "Argument")->required();
  gk->add_option("--k", ev.k, "Parameter k > 0")->capture_default_str();
  for (auto* sub : {kb, pfq, wr, gk}) {
    sub->add_option("--tol", ev.tol, "Relative truncation tolerance")->capture_default_str();
    add_common(sub, ev.common);
  }

  // transform
  TransformArgs tr;
  auto* tf = app.add_subcommand("transform", "Apply a fractional integral by quadrature");
  tf->add_option("--family", tr.family, "saigo, rl or ek")->capture_default_str();
  tf->add_option("--side", tr.side, "left or right")->capture_default_str();
  tf->add_option("--alpha", tr.alpha, "Order alpha > 0")->required();
  auto* beta_opt = tf->add_option("--beta", tr.beta, "Saigo beta")->capture_default_str();
  tf->add_option("--eta", tr.eta, "Saigo/EK eta")->capture_default_str();
  tf->add_option("--monomial", tr.monomial, "Integrand t^{lambda-1}: give lambda");
  tf->add_option("--kbessel", tr.kbessel, "Integrand t^{lambda/k-1} W^k_{v,c}: give v c k")
      ->expected(3);
  tf->add_option("--lambda", tr.lambda, "lambda for --kbessel (default k)");
  tf->add_flag("--reciprocal", tr.reciprocal, "Use W^k_{v,c}(1/t) (right side)");
  tf->add_option("--x", tr.x, "Evaluation point x > 0")->required();
  tf->add_option("--tol", tr.tol, "Quadrature tolerance")->capture_default_str();
  add_common(tf, tr.common);

  // verify
  VerifyArgs va;
  auto* vf = app.add_subcommand("verify", "Check theorem identities on random draws");
  vf->add_option("--theorems", va.theorems, "Comma-separated theorem ids")
      ->required()
      ->delimiter(',');
  vf->add_option("--n", va.n, "Draws per theorem")->capture_default_str();
  vf->add_option("--seed", va.seed, "Random seed")->capture_default_str();
  vf->add_option("--tol", va.tol, "Relative residual tolerance")->capture_default_str();
  vf->add_option("--x-points", va.x_points, "Comma-separated evaluation points")->delimiter(',');
  vf->add_option("--threads", va.threads, "Worker threads")->capture_default_str();
  vf->add_option("--margin", va.margin, "Constraint margin for sampling")->capture_default_str();
  vf->add_flag("--include-timing", va.include_timing, "Record wall time in the report");
  add_common(vf, va.common);

  // report
  Common rc;
  std::string input;
  auto* rp = app.add_subcommand("report", "Validate and re-render a JSON verification report");
  rp->add_option("--input", input, "Report JSON file")->required();
  add_common(rp, rc);

  try {
    std::vector<std::string> args = merge_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
    tr.beta_given = beta_opt->count() > 0;

    if (eval->parsed()) {
      for (auto* sub : {kb, pfq, wr, gk}) {
        if (sub->parsed()) return cmd_eval(sub->get_name(), ev, out, err);
      }
    }
    if (tf->parsed()) return cmd_transform(tr, out, err);
    if (vf->parsed()) return cmd_verify(va, out, err);
    if (rp->parsed()) return cmd_report(input, rc, out, err);
    return kExitInput;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const AccuracyError& e) {
    err << "accuracy failure: " << e.what() << " (best estimate " << g17(e.best_estimate())
        << ", error estimate " << g17(e.error_estimate()) << ")\n";
    return kExitAccuracy;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace saigo::cli
