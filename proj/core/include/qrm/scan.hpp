#pragma once

// Parameter sweeps, power-law / asymptote regressions and truncation studies.

#include "qrm/cycle.hpp"
#include "qrm/eigen.hpp"
#include "qrm/splitting.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace qrm {

enum class SweepVariable { g2, g, t_cold, ratio };

std::string_view to_string(SweepVariable variable);

/// A one-dimensional sweep. Temperatures are set in units of Omega, as in the
/// experiments the tool reproduces: T_C = theta_cold * ratio (omega0 units) and
/// T_H = T_C (1 + hot_fraction). For a t_cold sweep the grid holds theta_cold values.
struct SweepPlan {
    SweepVariable variable = SweepVariable::g2;
    std::vector<double> grid;
    CycleSpec base;             // g1, g2, ratio, backend and solver settings
    double theta_cold = 1e-4;
    double hot_fraction = 0.1;
    std::optional<double> theta_hot;  // overrides hot_fraction: T_H = theta_hot * ratio
    double coupling = 1.0;      // fixed g of a spectrum sweep over ratio

    /// Grid nonempty, finite and strictly monotone.
    void validate() const;
};

/// Cycle evaluated at grid value `value` of an efficiency sweep.
CycleSpec point_spec(const SweepPlan& plan, double value);

/// One CycleResult per grid point, in grid order. Points are independent and may
/// be evaluated concurrently; the output does not depend on scheduling.
std::vector<CycleResult> sweep_efficiency(const SweepPlan& plan, SpectrumCache* cache = nullptr);

struct SpectrumRow {
    double ratio = 0.0;
    double g = 0.0;
    std::vector<double> energies;  // lowest k
    double gap = 0.0;              // E1 - E0, resolved below double rounding
    int n_max_used = 0;
    bool converged = false;
    double max_shift = 0.0;
    int gap_n_max = 0;
    bool gap_converged = false;
};

/// Lowest-k levels and the ground gap per grid point (variable g or ratio).
std::vector<SpectrumRow> sweep_spectrum(const SweepPlan& plan, int k, const SpectrumOptions& options = {},
                                        const GapOptions& gap_options = {});

struct FitSample {
    double x = 0.0;
    double y = 0.0;
    bool usable = true;  // false for points that failed convergence
};

struct FitResult {
    double estimate = 0.0;
    double intercept = 0.0;  // exponent fits only
    double std_error = 0.0;
    double r2 = 0.0;
    double window_lo = 0.0;  // range of |g_c - x| actually used
    double window_hi = 0.0;
    std::vector<double> residuals;  // per usable sample, in input order
    int used = 0;
    int excluded = 0;
};

/// Least-squares slope of ln(eps) against ln|g_c - g|; samples are (g, eps).
FitResult fit_exponent(std::span<const FitSample> samples, double g_c = kCriticalCoupling);

/// Fit through the origin of deficit = |alpha| / (znu |ln(g_c - g2)|); samples are
/// (g2, eta_C - eta). r2 is the uncentered coefficient of a no-intercept model.
FitResult fit_asymptote(std::span<const FitSample> samples, double znu = 0.5,
                        double g_c = kCriticalCoupling);

struct ConvergenceRow {
    double ratio = 0.0;
    double g = 0.0;
    double tol = 0.0;
    int n_max_used = 0;
    double max_shift = 0.0;
    bool converged = false;
    long long work = 0;
};

std::vector<ConvergenceRow> convergence_study(std::span<const double> ratios, std::span<const double> gs,
                                              std::span<const double> tols, int k, int n_start = 32,
                                              int n_cap = 4096);

struct MaximumLocation {
    std::size_t index = 0;
    double g_m = 0.0;
    double eta_max = 0.0;
    std::size_t argmax_index = 0;  // first strict maximiser
};

/// g_m of an efficiency sweep: the first grid point whose efficiency is within
/// tolerance * eta_C of the sweep maximum. tolerance = 0 is the plain argmax.
/// Points without a defined efficiency are skipped; throws if none remain.
MaximumLocation locate_gm(std::span<const double> grid, std::span<const CycleResult> results,
                          double tolerance = 1e-3);

}  // namespace qrm
