#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace saigo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitAccuracy = 3;

/// Environment variable naming the directory for relative --output paths.
inline constexpr const char* kReportDirEnv = "SAIGO_REPORT_DIR";

/// Runs the `saigo` command line. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Appends entries of the flat key=value file named by --config for every key
/// not already given on the command line. Throws DomainError on I/O problems.
std::vector<std::string> merge_config(const std::vector<std::string>& args);

/// Prefixes relative paths with $SAIGO_REPORT_DIR when it is set.
std::filesystem::path resolve_output(const std::string& path);

}  // namespace saigo::cli
