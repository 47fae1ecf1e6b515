#include "qrm/cycle.hpp"

#include "qrm/errors.hpp"
#include "qrm/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrm {

namespace {

bool finite_all(std::initializer_list<double> values) {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

ThermoState analytic_corner(const CycleSpec& spec, double g, double temperature) {
    const auto phase = phase_of(g);
    if (!phase) throw DomainError("analytic backend is undefined at the critical point g = 1");
    const ModelParams params(spec.ratio, g);
    return analytic_state(effective_ground_energy(g, *phase, params), effective_excitation(g, *phase),
                          1.0 / temperature);
}

std::size_t levels_within(const Spectrum& spectrum, double window) {
    const double ground = spectrum.energies.front();
    return static_cast<std::size_t>(
        std::upper_bound(spectrum.energies.begin(), spectrum.energies.end(), ground + window) -
        spectrum.energies.begin());
}

}  // namespace

void CycleSpec::validate() const {
    if (!finite_all({g1, g2, t_cold, t_hot, ratio, thermal_window}))
        throw std::invalid_argument("cycle: all parameters must be finite");
    if (g1 < 0.0) throw std::invalid_argument("cycle: g1 must be >= 0");
    if (g1 > g2) throw std::invalid_argument("cycle: g1 must not exceed g2");
    if (t_cold <= 0.0) throw std::invalid_argument("cycle: T_C must be > 0");
    if (t_cold > t_hot) throw std::invalid_argument("cycle: T_C must not exceed T_H");
    if (ratio <= 0.0) throw std::invalid_argument("cycle: ratio must be > 0");
    if (thermal_window <= 0.0) throw std::invalid_argument("cycle: thermal_window must be > 0");
}

std::string_view to_string(CycleStatus status) {
    switch (status) {
    case CycleStatus::ok: return "ok";
    case CycleStatus::equal_temperatures: return "equal_temperatures";
    case CycleStatus::no_isothermal_heat: return "no_isothermal_heat";
    case CycleStatus::no_heat_input: return "no_heat_input";
    }
    return "unknown";
}

double carnot_efficiency(double t_cold, double t_hot) {
    if (!finite_all({t_cold, t_hot})) throw DomainError("carnot_efficiency: temperatures must be finite");
    if (t_cold <= 0.0) throw DomainError("carnot_efficiency: T_C must be > 0");
    if (t_cold > t_hot) throw DomainError("carnot_efficiency: requires T_C <= T_H");
    return 1.0 - t_cold / t_hot;
}

std::shared_ptr<const Spectrum> SpectrumCache::get(const ModelParams& params,
                                                   const SpectrumOptions& options) {
    const Key key{params.ratio(), params.g(), options.k, options.tol, options.n_start, options.n_cap};
    {
        std::lock_guard lock(mutex_);
        if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    }
    // Solved outside the lock; a racing duplicate computes the identical value.
    auto spectrum = std::make_shared<const Spectrum>(converged_spectrum(params, options));
    std::lock_guard lock(mutex_);
    return entries_.emplace(key, std::move(spectrum)).first->second;
}

std::shared_ptr<const Spectrum> thermal_spectrum(const CycleSpec& spec, double g, SpectrumCache* cache) {
    const ModelParams params(spec.ratio, g);
    const double window = spec.thermal_window * spec.t_hot;
    auto solve = [&](const SpectrumOptions& options) {
        return cache ? cache->get(params, options)
                     : std::make_shared<const Spectrum>(converged_spectrum(params, options));
    };

    SpectrumOptions options = spec.spectral;
    auto spectrum = solve(options);
    // Widen the tracked set until it covers the thermal window of the converged spectrum.
    for (int round = 0; round < 8; ++round) {
        const int needed = static_cast<int>(levels_within(*spectrum, window)) + 1;
        const int available = static_cast<int>(spectrum->energies.size());
        if (needed <= options.k || options.k >= available) break;
        options.k = std::min(needed, 2 * (options.n_cap + 1));
        spectrum = solve(options);
    }
    return spectrum;
}

CycleResult run_cycle(const CycleSpec& spec, SpectrumCache* cache) {
    spec.validate();

    CycleResult r;
    r.spec = spec;
    const double t_h = spec.t_hot;
    const double t_c = spec.t_cold;

    if (spec.backend == Backend::analytic) {
        r.a = analytic_corner(spec, spec.g1, t_h);
        r.b = analytic_corner(spec, spec.g2, t_h);
        r.c = analytic_corner(spec, spec.g2, t_c);
        r.d = analytic_corner(spec, spec.g1, t_c);
    } else {
        const auto low = thermal_spectrum(spec, spec.g1, cache);
        const auto high = thermal_spectrum(spec, spec.g2, cache);
        r.a = spectral_state(low->energies, 1.0 / t_h);
        r.b = spectral_state(high->energies, 1.0 / t_h);
        r.c = spectral_state(high->energies, 1.0 / t_c);
        r.d = spectral_state(low->energies, 1.0 / t_c);
        r.spectra_converged = low->converged && high->converged;
    }

    r.ds_ab = r.b.entropy - r.a.entropy;
    r.ds_bc = r.c.entropy - r.b.entropy;
    r.ds_ad = r.d.entropy - r.a.entropy;

    r.q_ab = t_h * r.ds_ab;
    r.q_cd = t_c * (r.d.entropy - r.c.entropy);
    // Isochores keep the Hamiltonian, so the ground energies cancel exactly.
    r.q_da = (r.a.excitation - r.d.excitation) + (r.a.ground_energy - r.d.ground_energy);
    r.q_bc = (r.c.excitation - r.b.excitation) + (r.c.ground_energy - r.b.ground_energy);

    r.work = r.q_da + r.q_ab + r.q_bc + r.q_cd;
    r.q_in = r.q_da + r.q_ab;
    r.eta_carnot = carnot_efficiency(t_c, t_h);

    if (r.q_in != 0.0) r.eta = r.work / r.q_in;
    if (r.q_ab != 0.0) {
        const double temp_ratio = t_c / t_h;
        r.sigma1 = temp_ratio * (r.ds_ad - r.ds_bc) / r.ds_ab + r.q_bc / r.q_ab;
        r.sigma2 = r.q_da / r.q_ab;
        if (1.0 + *r.sigma2 != 0.0)
            r.eta_decomposed = (r.eta_carnot + *r.sigma1 + *r.sigma2) / (1.0 + *r.sigma2);
    }

    if (t_h == t_c)
        r.status = CycleStatus::equal_temperatures;
    else if (!r.eta)
        r.status = CycleStatus::no_heat_input;
    else if (!r.sigma1)
        r.status = CycleStatus::no_isothermal_heat;
    return r;
}

BoundReport bound_report(const CycleResult& result) {
    const CycleSpec& spec = result.spec;
    if (spec.backend != Backend::analytic)
        throw DomainError("bound_report: bounds hold for the homogeneous-ladder (analytic) model only");
    if (spec.g2 >= kCriticalCoupling)
        throw DomainError("bound_report: requires the normal phase, g2 < 1");
    if (!(result.ds_ab > 0.0)) throw DomainError("bound_report: requires dS_AB > 0");

    const double t_ratio = spec.t_cold / spec.t_hot;
    const double beta_h = 1.0 / spec.t_hot;
    const double c1 = heat_capacity(0.5 * beta_h * effective_excitation(spec.g1, Phase::normal));
    const double c2 = heat_capacity(0.5 * beta_h * effective_excitation(spec.g2, Phase::normal));
    const double eta_c = result.eta_carnot;

    auto check = [](double lhs, double rhs) { return BoundCheck{lhs, rhs, lhs < rhs, rhs - lhs}; };

    BoundReport report;
    report.heat_ratio = check(std::abs(result.q_da / result.q_ab), eta_c * c1 / result.ds_ab);
    report.isochoric_mismatch =
        check(std::abs(-t_ratio * result.ds_bc / result.ds_ab + result.q_bc / result.q_ab),
              2.0 * eta_c * c2 / result.ds_ab);
    report.entropy_ratio =
        check(std::abs(t_ratio * result.ds_ad / result.ds_ab), eta_c * c1 / result.ds_ab);
    return report;
}

double alpha_coefficient(const CycleResult& result) {
    const double t_c = result.spec.t_cold;
    const double t_h = result.spec.t_hot;
    return (t_c * (result.ds_ad - result.ds_bc) + result.q_bc + (t_c / t_h) * result.q_da) / t_h;
}

double asymptote_prediction(double alpha, double g2, double znu) {
    if (!finite_all({alpha, g2, znu})) throw DomainError("asymptote_prediction: arguments must be finite");
    if (g2 <= 0.0 || g2 >= kCriticalCoupling)
        throw DomainError("asymptote_prediction: requires 0 < g2 < g_C = 1");
    if (znu <= 0.0) throw DomainError("asymptote_prediction: znu must be > 0");
    // ln(g_C - g2) < 0, so a negative alpha yields a positive deficit.
    return alpha / (znu * std::log(kCriticalCoupling - g2));
}

}  // namespace qrm
