#pragma once

#include "qrm_cli/config.hpp"
#include "qrm_cli/output.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qrm::cli {

/// Distances g_c - g spaced evenly in log between hi and lo (descending g_c - g, ascending g).
std::vector<double> log_window(double lo, double hi, int points);

/// Report of a fit subcommand; the same values the fit file holds.
Report fit_report(const RunConfig& config);

/// Executes the subcommand and writes its files below config.output_dir.
/// Returns the written paths in order. Throws OutputError on I/O failure.
std::vector<std::string> run(const RunConfig& config, std::ostream& log);

/// Entry point shared by the executable and the tests: parses, runs and maps
/// failures to exit codes (0 ok, 1 output or computation failure, 2 invalid input).
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qrm::cli
