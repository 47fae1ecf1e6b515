#pragma once

// Canonical-ensemble thermodynamics (k_B = 1) of either the effective
// single-mode model or a finite numerical spectrum.

#include <span>
#include <string_view>

namespace qrm {

enum class Backend { analytic, spectral };

std::string_view to_string(Backend backend);

/// Thermal state at inverse temperature beta.
///
/// The internal energy is carried as ground_energy + excitation so heats between
/// states sharing a Hamiltonian can be formed without cancelling two numbers of
/// size |E0|; at beta * gap ~ 1e2 the excitation is ~1e-60 and would vanish in U.
struct ThermoState {
    double beta = 0.0;
    double ln_z = 0.0;
    double ground_energy = 0.0;  // E0
    double excitation = 0.0;     // U - E0 >= 0
    double entropy = 0.0;        // S = ln Z + beta U
    double heat_capacity = 0.0;  // C = dU/dT
    Backend backend = Backend::analytic;

    double internal_energy() const noexcept { return ground_energy + excitation; }
};

/// x^2 / sinh^2(x) for x > 0; tends to 1 as x -> 0 and to 0 as x -> inf.
double heat_capacity(double x);

/// Homogeneous ladder E_k = E0 + k eps:
///   ln Z = -beta E0 - ln(1 - e^{-beta eps})
///   U    = E0 + eps / (e^{beta eps} - 1)
///   S    = beta eps / (e^{beta eps} - 1) - ln(1 - e^{-beta eps})
///   C    = heat_capacity(beta eps / 2)
/// Refuses eps <= 1e-30 (the entropy diverges at the critical point).
ThermoState analytic_state(double ground_energy, double eps, double beta);

/// Boltzmann statistics of a finite spectrum, evaluated relative to its lowest level.
/// C comes from the energy variance: beta^2 (<E^2> - <E>^2).
ThermoState spectral_state(std::span<const double> energies, double beta);

}  // namespace qrm
