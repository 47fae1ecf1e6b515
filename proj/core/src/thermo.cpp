#include "qrm/thermo.hpp"

#include "qrm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace qrm {

namespace {

constexpr double kMinExcitation = 1e-30;

void require_beta(double beta) {
    if (!std::isfinite(beta) || beta <= 0.0) throw DomainError("beta must be finite and > 0");
}

// ln(1 - e^{-x}) for x > 0.
double log_one_minus_exp(double x) {
    return x < std::numbers::ln2 ? std::log(-std::expm1(-x)) : std::log1p(-std::exp(-x));
}

}  // namespace

std::string_view to_string(Backend backend) {
    return backend == Backend::analytic ? "analytic" : "spectral";
}

double heat_capacity(double x) {
    if (!(x > 0.0)) throw DomainError("heat_capacity requires x > 0");
    if (std::isinf(x)) return 0.0;
    if (x < 1e-3) {
        const double x2 = x * x;
        return 1.0 - x2 / 3.0 + x2 * x2 / 15.0;
    }
    // x / sinh(x) without overflow.
    const double r = 2.0 * x * std::exp(-x) / -std::expm1(-2.0 * x);
    return r * r;
}

ThermoState analytic_state(double ground_energy, double eps, double beta) {
    require_beta(beta);
    if (!std::isfinite(ground_energy)) throw DomainError("ground energy must be finite");
    if (!std::isfinite(eps) || eps <= kMinExcitation)
        throw DomainError("excitation energy must be > 1e-30 (critical point)");

    const double x = beta * eps;
    const double occupation = std::exp(-x) / -std::expm1(-x);
    const double log_term = log_one_minus_exp(x);

    ThermoState s;
    s.backend = Backend::analytic;
    s.beta = beta;
    s.ground_energy = ground_energy;
    s.excitation = eps * occupation;
    s.entropy = x * occupation - log_term;
    s.ln_z = -beta * ground_energy - log_term;
    s.heat_capacity = heat_capacity(0.5 * x);
    return s;
}

ThermoState spectral_state(std::span<const double> energies, double beta) {
    require_beta(beta);
    if (energies.empty()) throw std::invalid_argument("spectral_state: empty spectrum");

    // Descending excitation order sums the smallest weights first and makes the
    // result independent of the input ordering.
    std::vector<double> gaps(energies.begin(), energies.end());
    for (double e : gaps)
        if (!std::isfinite(e)) throw std::invalid_argument("spectral_state: non-finite energy");
    std::sort(gaps.begin(), gaps.end(), std::greater<>());
    const double ground = gaps.back();
    for (double& e : gaps) e -= ground;

    double rest = 0.0;  // sum of weights excluding the single ground entry
    for (std::size_t i = 0; i + 1 < gaps.size(); ++i) rest += std::exp(-beta * gaps[i]);
    const double z = 1.0 + rest;

    double mean = 0.0;
    for (double d : gaps) mean += d * std::exp(-beta * d);
    mean /= z;

    double variance = 0.0;
    for (double d : gaps) {
        const double dev = d - mean;
        variance += dev * dev * std::exp(-beta * d);
    }
    variance /= z;

    ThermoState s;
    s.backend = Backend::spectral;
    s.beta = beta;
    s.ground_energy = ground;
    s.excitation = mean;
    const double ln_z_shifted = std::log1p(rest);
    s.entropy = ln_z_shifted + beta * mean;
    s.ln_z = ln_z_shifted - beta * ground;
    s.heat_capacity = beta * beta * variance;
    return s;
}

}  // namespace qrm
