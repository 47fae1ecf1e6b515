#pragma once

// Command-line configuration of the qrm-stirling tool.

#include "qrm/thermo.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrm::cli {

enum class Subcommand { spectrum, cycle, sweep, fit, converge };
enum class OutputFormat { csv, jsonl };
enum class FitKind { exponent, asymptote };

std::string to_string(Subcommand sub);
std::string to_string(OutputFormat format);
std::string to_string(FitKind kind);

/// Invalid or inconsistent input. what() is a single line naming the field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// --help / --version; carries the text to print.
struct HelpRequest {
    std::string text;
};

/// Fully validated run description. Temperatures are theta = T / Omega.
struct RunConfig {
    Subcommand subcommand = Subcommand::cycle;

    std::vector<double> ratios{400.0};
    std::vector<double> theta_cold{1e-4};
    std::optional<double> theta_hot;  // absolute; otherwise theta_hot = theta_cold (1 + dt_frac)
    double dt_frac = 0.1;
    double g1 = 0.2;
    double g2 = 0.9;
    Backend backend = Backend::analytic;

    int k = 8;
    double tol = 1e-8;
    int n_start = 32;
    int n_cap = 4096;
    double thermal_window = 40.0;

    std::vector<double> grid;  // g2 (sweep), g (spectrum, converge); materialised from min/max/count
    std::vector<double> tols;  // converge only

    FitKind fit_kind = FitKind::exponent;
    Backend fit_source = Backend::analytic;
    double window_lo = 1e-6;   // fits: range of g_c - g
    double window_hi = 1e-3;
    int points = 13;
    double znu = 0.5;

    std::string dump_matrix;  // spectrum only: triplet dump of the first grid point
    int dump_n_max = 0;

    std::string output_dir = ".";
    OutputFormat format = OutputFormat::csv;
    bool plot = false;
    std::optional<double> omega_ghz;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses argv (without the program name). A flat key=value file given with
/// --config supplies defaults; explicit flags win and each collision is
/// reported on `log`. default_output_dir is used when --out is absent.
/// Throws ConfigError or HelpRequest.
RunConfig parse_config(const std::vector<std::string>& args, std::ostream& log,
                       const std::string& default_output_dir = ".");

/// Argument vector that parse_config maps back to `config`.
std::vector<std::string> render_config(const RunConfig& config);

/// Throws ConfigError for the first invalid field.
void validate(const RunConfig& config);

/// T_H / Omega of a series with cold temperature theta_c.
double hot_theta(const RunConfig& config, double theta_c);

}  // namespace qrm::cli
