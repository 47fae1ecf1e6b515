#pragma once

// Quantum Rabi model: truncated Fock-space Hamiltonian and the analytic
// effective energies of the normal and superradiant phases.
//
// Units: omega0 = hbar = k_B = 1. Every energy in this library is measured in
// units of the cavity frequency.
//
// Basis ordering of the truncated space is |n, s> with the spin index fastest:
//   index = 2 * n + s,  s = 0 -> sigma_z = -1 (lower level), s = 1 -> sigma_z = +1.
// sigma_x is the real Pauli matrix, so the Hamiltonian is real symmetric.

#include "qrm/errors.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace qrm {

inline constexpr double kCriticalCoupling = 1.0;

/// Dimensionless QRM parameters. omega0 is fixed to 1.
class ModelParams {
public:
    /// ratio = Omega / omega0 (> 0), g = 2 lambda / sqrt(omega0 Omega) (>= 0).
    ModelParams(double ratio, double g);

    static ModelParams from_lambda(double ratio, double lambda);

    static constexpr double omega0() noexcept { return 1.0; }
    double ratio() const noexcept { return ratio_; }
    double g() const noexcept { return g_; }
    /// Qubit splitting Omega in units of omega0.
    double omega() const noexcept { return ratio_; }
    /// lambda = g sqrt(omega0 Omega) / 2.
    double lambda() const noexcept;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
    double ratio_;
    double g_;
};

/// Fock cutoff. The truncated space holds n = 0..n_max for both spin states.
class Truncation {
public:
    explicit Truncation(int n_max);

    int n_max() const noexcept { return n_max_; }
    std::size_t dimension() const noexcept { return 2 * (static_cast<std::size_t>(n_max_) + 1); }

private:
    int n_max_;
};

enum class Phase { normal, superradiant };

std::string_view to_string(Phase phase);

/// Phase of the effective model at coupling g; empty at the critical point g = 1.
std::optional<Phase> phase_of(double g);

/// Dense real symmetric matrix of H = omega0 a^dag a + (Omega/2) sigma_z - lambda (a + a^dag) sigma_x.
Eigen::MatrixXd build_hamiltonian(const ModelParams& params, const Truncation& trunc);

/// One parity sector of the Hamiltonian as a symmetric tridiagonal matrix.
///
/// The parity operator exp(i pi (a^dag a + (1 + sigma_z)/2)) commutes with H.
/// Sector p contains the states |n, s> with (n + s) % 2 == p, ordered by n, and
/// the coupling only links neighbouring n. Both sectors share the off-diagonal.
struct TridiagonalBlock {
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;  // size diagonal.size() - 1
};

TridiagonalBlock parity_block(const ModelParams& params, const Truncation& trunc, int parity);

/// Excitation energy of the effective model:
///   normal:        sqrt(1 - g^2)    (g < 1)
///   superradiant:  sqrt(1 - g^-4)   (g > 1)
double effective_excitation(double g, Phase phase);

/// Ground energy of the effective model: -Omega/2 (normal), -(Omega/4)(g^2 + g^-2) (superradiant).
double effective_ground_energy(double g, Phase phase, const ModelParams& params);

/// Writes the nonzero entries of `hamiltonian` as "row col value" lines (0-based,
/// row-major) after the header line "# qrm n_max=<int> ratio=<float> g=<float>".
void write_matrix_triplets(std::ostream& out, const Eigen::MatrixXd& hamiltonian,
                           const ModelParams& params, const Truncation& trunc);

}  // namespace qrm
