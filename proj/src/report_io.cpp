#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "saigo/errors.hpp"
#include "saigo/verify.hpp"

namespace saigo::verify {

using nlohmann::json;

namespace {

// JSON has no NaN or infinity; non-finite values are written as null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double read_num(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) throw DomainError(std::string("report field '") + key + "' must be a number");
  return v.get<double>();
}

template <class T>
T read(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("report field '") + key + "': " + e.what());
  }
}

std::string g(double x, int digits = 6) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.insert(0, w - s.size(), ' ');
  return s;
}

std::string pad_right(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Report parse_report(const json& j);

}  // namespace

json to_json(const Report& r) {
  json j;
  j["schema"] = kReportSchema;
  j["suite_id"] = r.suite_id;
  j["seed"] = r.seed;
  j["tolerance"] = r.tolerance;
  j["n_per_theorem"] = r.n_per_theorem;
  j["margin"] = r.margin;
  j["x_points"] = r.x_points;
  j["theorems"] = r.theorems;
  j["summary"] = {{"records", r.records.size()},
                  {"passed", r.passed()},
                  {"failed", r.records.size() - r.passed()},
                  {"all_pass", r.all_pass()}};
  json per = json::array();
  for (const auto& s : r.per_theorem) {
    per.push_back({{"theorem_id", s.theorem_id},
                   {"records", s.records},
                   {"passed", s.passed},
                   {"worst_residual", num(s.worst_residual)}});
  }
  j["per_theorem"] = per;
  j["discrepancy_notes"] = r.discrepancy_notes;
  json recs = json::array();
  for (const auto& v : r.records) {
    recs.push_back({{"theorem_id", v.draw.theorem_id},
                    {"seed_index", v.draw.seed_index},
                    {"params", cf::to_json(v.draw.params)},
                    {"x", v.x},
                    {"lhs", num(v.lhs)},
                    {"rhs", num(v.rhs)},
                    {"rel_residual", num(v.rel_residual)},
                    {"lhs_error_estimate", num(v.lhs_error_estimate)},
                    {"pass", v.pass},
                    {"diagnostic", v.diagnostic}});
  }
  j["records"] = recs;
  if (r.wall_time_seconds) j["wall_time_seconds"] = *r.wall_time_seconds;
  return j;
}

namespace {
Report parse_report(const json& j) {
  if (!j.is_object()) throw DomainError("report must be a JSON object");
  if (read<std::string>(j, "schema") != kReportSchema) {
    throw DomainError(std::string("unsupported report schema (expected ") + kReportSchema + ")");
  }
  Report r;
  r.suite_id = read<std::string>(j, "suite_id");
  r.seed = read<std::uint64_t>(j, "seed");
  r.tolerance = read_num(j, "tolerance");
  r.n_per_theorem = read<std::size_t>(j, "n_per_theorem");
  r.margin = read_num(j, "margin");
  r.x_points = read<std::vector<double>>(j, "x_points");
  r.theorems = read<std::vector<std::string>>(j, "theorems");
  r.discrepancy_notes = read<std::vector<std::string>>(j, "discrepancy_notes");
  for (const json& s : j.at("per_theorem")) {
    TheoremSummary t;
    t.theorem_id = read<std::string>(s, "theorem_id");
    t.records = read<std::size_t>(s, "records");
    t.passed = read<std::size_t>(s, "passed");
    t.worst_residual = read_num(s, "worst_residual");
    if (std::isnan(t.worst_residual)) t.worst_residual = std::numeric_limits<double>::infinity();
    r.per_theorem.push_back(t);
  }
  for (const json& v : j.at("records")) {
    VerificationRecord rec;
    rec.draw.theorem_id = read<std::string>(v, "theorem_id");
    rec.draw.seed_index = read<std::size_t>(v, "seed_index");
    try {
      rec.draw.params = cf::theorem_params_from_json(v.at("params"));
    } catch (const json::exception& e) {
      throw DomainError(std::string("report record params: ") + e.what());
    }
    rec.x = read_num(v, "x");
    rec.lhs = read_num(v, "lhs");
    rec.rhs = read_num(v, "rhs");
    rec.rel_residual = read_num(v, "rel_residual");
    rec.lhs_error_estimate = read_num(v, "lhs_error_estimate");
    rec.pass = read<bool>(v, "pass");
    rec.diagnostic = read<std::string>(v, "diagnostic");
    r.records.push_back(rec);
  }
  if (j.contains("wall_time_seconds")) r.wall_time_seconds = read_num(j, "wall_time_seconds");

  const json& sum = j.at("summary");
  if (read<std::size_t>(sum, "records") != r.records.size() ||
      read<std::size_t>(sum, "passed") != r.passed() ||
      read<bool>(sum, "all_pass") != r.all_pass()) {
    throw DomainError("report summary is inconsistent with its records");
  }
  std::size_t total = 0;
  for (const auto& s : r.per_theorem) total += s.records;
  if (total != r.records.size()) {
    throw DomainError("per-theorem record counts do not add up to the record total");
  }
  if (r.records.size() != r.theorems.size() * r.n_per_theorem * r.x_points.size()) {
    throw DomainError("record total differs from draws x evaluation points");
  }
  return r;
}
}  // namespace

Report report_from_json(const json& j) {
  try {
    return parse_report(j);
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed report: ") + e.what());
  }
}

std::string render_json(const Report& r) { return to_json(r).dump(2) + "\n"; }

std::string render_text(const Report& r) {
  std::ostringstream os;
  os << "suite " << r.suite_id << "  seed " << r.seed << "  tol " << g(r.tolerance) << "  n "
     << r.n_per_theorem << "  margin " << g(r.margin) << "\n";
  os << "x points:";
  for (double x : r.x_points) os << " " << g(x);
  os << "\n";
  os << "records " << r.records.size() << "  passed " << r.passed() << "  failed "
     << r.records.size() - r.passed() << "  " << (r.all_pass() ? "ALL PASS" : "FAILURES") << "\n";
  if (r.wall_time_seconds) os << "wall time " << g(*r.wall_time_seconds, 4) << " s\n";

  os << "\n"
     << pad_right("theorem", 9) << pad("records", 9) << pad("passed", 9)
     << pad("worst_residual", 16) << "\n";
  for (const auto& s : r.per_theorem) {
    os << pad_right(s.theorem_id, 9) << pad(std::to_string(s.records), 9)
       << pad(std::to_string(s.passed), 9) << pad(g(s.worst_residual, 3), 16) << "\n";
  }
  if (!r.discrepancy_notes.empty()) {
    os << "\nnotes:\n";
    for (const auto& n : r.discrepancy_notes) os << "  - " << n << "\n";
  }
  os << "\n"
     << pad_right("theorem", 9) << pad("draw", 5) << pad("x", 8) << pad("lhs", 24) << pad("rhs", 24)
     << pad("rel_residual", 14) << pad("pass", 6) << "\n";
  for (const auto& v : r.records) {
    os << pad_right(v.draw.theorem_id, 9) << pad(std::to_string(v.draw.seed_index), 5)
       << pad(g(v.x, 4), 8) << pad(g(v.lhs, 16), 24) << pad(g(v.rhs, 16), 24)
       << pad(g(v.rel_residual, 3), 14) << pad(v.pass ? "yes" : "NO", 6);
    if (!v.diagnostic.empty() && !v.pass) os << "  " << v.diagnostic;
    os << "\n";
  }
  return os.str();
}

std::string render_csv(const Report& r) {
  std::ostringstream os;
  os << "theorem_id,seed_index,x,alpha,beta,eta,lambda,v,c,k,lhs,rhs,rel_residual,"
        "lhs_error_estimate,pass,diagnostic\n";
  for (const auto& v : r.records) {
    const auto& p = v.draw.params;
    os << v.draw.theorem_id << "," << v.draw.seed_index;
    for (double x : {v.x, p.alpha, p.beta, p.eta, p.lambda, p.v, p.c, p.k, v.lhs, v.rhs,
                     v.rel_residual, v.lhs_error_estimate}) {
      os << "," << g(x, 17);
    }
    os << "," << (v.pass ? "true" : "false") << "," << csv_escape(v.diagnostic) << "\n";
  }
  return os.str();
}

}  // namespace saigo::verify
