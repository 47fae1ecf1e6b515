#pragma once

// Quasi-static Stirling cycle with the QRM as working substance.
//
//   A = (T_H, g1) --isothermal--> B = (T_H, g2)
//   B --isochoric--> C = (T_C, g2) --isothermal--> D = (T_C, g1) --isochoric--> A
//
// Heats are positive into the working substance; W > 0 is net output.

#include "qrm/eigen.hpp"
#include "qrm/thermo.hpp"

#include <memory>
#include <mutex>
#include <map>
#include <optional>
#include <string_view>
#include <tuple>

namespace qrm {

struct CycleSpec {
    double g1 = 0.2;
    double g2 = 0.9;
    double t_cold = 0.04;
    double t_hot = 0.044;
    double ratio = 400.0;
    Backend backend = Backend::analytic;
    /// Spectral backend only. spectral.k is a floor: every level within
    /// thermal_window * T_H of the ground state is also required to converge.
    SpectrumOptions spectral{};
    double thermal_window = 40.0;

    /// Throws std::invalid_argument unless 0 <= g1 <= g2, 0 < T_C <= T_H, ratio > 0.
    /// Equalities are accepted and produce tagged degenerate cycles.
    void validate() const;
};

enum class CycleStatus {
    ok,
    equal_temperatures,  // T_H == T_C: W = 0, eta_C = 0
    no_isothermal_heat,  // Q_AB == 0: Sigma terms undefined
    no_heat_input,       // Q_in == 0: eta undefined
};

std::string_view to_string(CycleStatus status);

struct CycleResult {
    CycleSpec spec;
    ThermoState a, b, c, d;

    double q_ab = 0.0, q_bc = 0.0, q_cd = 0.0, q_da = 0.0;
    double work = 0.0;
    double q_in = 0.0;
    double ds_ab = 0.0, ds_bc = 0.0, ds_ad = 0.0;  // dS_XY = S_Y - S_X

    double eta_carnot = 0.0;
    std::optional<double> eta;             // W / Q_in
    std::optional<double> sigma1, sigma2;
    std::optional<double> eta_decomposed;  // (eta_C + sigma1 + sigma2) / (1 + sigma2)

    CycleStatus status = CycleStatus::ok;
    bool spectra_converged = true;  // always true for the analytic backend
};

/// 1 - T_C / T_H. Requires 0 < T_C <= T_H.
double carnot_efficiency(double t_cold, double t_hot);

/// Converged spectra keyed by every input that determines them. Lookups are
/// thread-safe and values are immutable once inserted.
class SpectrumCache {
public:
    std::shared_ptr<const Spectrum> get(const ModelParams& params, const SpectrumOptions& options);

private:
    using Key = std::tuple<double, double, int, double, int, int>;
    std::mutex mutex_;
    std::map<Key, std::shared_ptr<const Spectrum>> entries_;
};

/// Spectrum at coupling g whose converged levels cover the thermal window of T_H.
std::shared_ptr<const Spectrum> thermal_spectrum(const CycleSpec& spec, double g,
                                                 SpectrumCache* cache = nullptr);

CycleResult run_cycle(const CycleSpec& spec, SpectrumCache* cache = nullptr);

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;  // lhs < rhs
    double slack = 0.0;      // rhs - lhs
};

/// The three inequalities bounding the Sigma terms by heat capacities of the
/// homogeneous ladder:
///   |Q_DA / Q_AB|                                 < eta_C C(beta_H eps(g1)/2) / dS_AB
///   |-(T_C/T_H) dS_BC / dS_AB + Q_BC / Q_AB|      < 2 eta_C C(beta_H eps(g2)/2) / dS_AB
///   |(T_C/T_H) dS_AD / dS_AB|                     < eta_C C(beta_H eps(g1)/2) / dS_AB
struct BoundReport {
    BoundCheck heat_ratio;
    BoundCheck isochoric_mismatch;
    BoundCheck entropy_ratio;

    bool all_satisfied() const noexcept {
        return heat_ratio.satisfied && isochoric_mismatch.satisfied && entropy_ratio.satisfied;
    }
};

/// Only defined for the analytic backend in the normal phase (g2 < 1) with dS_AB > 0.
BoundReport bound_report(const CycleResult& result);

/// alpha(g2) = [T_C (dS_AD - dS_BC) + Q_BC + (T_C/T_H) Q_DA] / T_H.
double alpha_coefficient(const CycleResult& result);

/// Leading-order Carnot deficit eta_C - eta ~ alpha / (znu ln(g_C - g2)).
/// Requires 0 < g2 < 1 and znu > 0.
double asymptote_prediction(double alpha, double g2, double znu = 0.5);

}  // namespace qrm
