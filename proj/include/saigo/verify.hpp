#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "saigo/closed_forms.hpp"

namespace saigo::verify {

inline constexpr double kDefaultMargin = 0.05;
inline constexpr double kAbsFloor = 1e-12;
inline constexpr double kMinRightX = 0.5;

struct ParameterDraw {
  cf::TheoremParams params;
  std::string theorem_id;
  std::size_t seed_index = 0;
};

struct VerificationRecord {
  ParameterDraw draw;
  double x = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_residual = 0.0;
  double lhs_error_estimate = 0.0;
  bool pass = false;
  /// Empty unless something failed along the way.
  std::string diagnostic;
};

/// Draws `n` parameter sets satisfying the theorem's conditions with the given
/// margin. Deterministic in (theorem_id, n, seed, margin).
std::vector<ParameterDraw> sample_params(const std::string& theorem_id, std::size_t n,
                                         std::uint64_t seed, double margin = kDefaultMargin);

/// Quadrature of the operator side against the closed form, one record per x.
/// Numerical failures are reported in the record rather than thrown.
std::vector<VerificationRecord> check_identity(const ParameterDraw& draw,
                                               const std::vector<double>& x_points, double tol);

/// pass <=> rel_residual <= tol or |lhs - rhs| <= max(10 * lhs_err, kAbsFloor).
bool passes(double lhs, double rhs, double lhs_err, double tol);

/// 0: worst residual within tol/1000; 1: within tol; 2: beyond tol or non-finite.
int residual_class(double worst_residual, double tol);

struct SuiteConfig {
  std::string suite_id = "saigo-verify";
  std::vector<std::string> theorems;
  std::size_t n = 5;
  std::uint64_t seed = 7;
  double tol = 1e-5;
  std::vector<double> x_points = {0.5, 1.0, 2.0};
  double margin = kDefaultMargin;
  unsigned threads = 1;
  bool include_timing = false;
};

struct TheoremSummary {
  std::string theorem_id;
  std::size_t records = 0;
  std::size_t passed = 0;
  double worst_residual = 0.0;
};

struct Report {
  std::string suite_id;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::size_t n_per_theorem = 0;
  double margin = kDefaultMargin;
  std::vector<double> x_points;
  std::vector<std::string> theorems;
  /// Sorted by theorem id.
  std::vector<TheoremSummary> per_theorem;
  std::vector<std::string> discrepancy_notes;
  /// Sorted by (theorem_id, seed_index, x).
  std::vector<VerificationRecord> records;
  std::optional<double> wall_time_seconds;

  std::size_t passed() const;
  bool all_pass() const { return passed() == records.size(); }
};

/// Validates the config (known ids, n >= 1, tol in (0, 1e-2], positive x,
/// x >= 0.5 for right-sided ids) and throws DomainError otherwise.
void validate(const SuiteConfig& config);

Report run_suite(const SuiteConfig& config);

// Serialization (report_io.cpp).
inline constexpr const char* kReportSchema = "saigo-verify-report/1";

nlohmann::json to_json(const Report& r);
/// Throws DomainError when `j` does not follow the report schema.
Report report_from_json(const nlohmann::json& j);
std::string render_json(const Report& r);
std::string render_text(const Report& r);
std::string render_csv(const Report& r);

}  // namespace saigo::verify
