#pragma once

// Symmetric eigensolvers and truncation-converged QRM spectra.

#include "qrm/model.hpp"

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <vector>

namespace qrm {

/// The iterative solver did not converge; never returned as a silent wrong answer.
class EigenSolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EigenDecomposition {
    Eigen::VectorXd values;                 // ascending
    std::optional<Eigen::MatrixXd> vectors;  // column i belongs to values[i]
};

/// Dense symmetric eigensolve. Rejects non-finite or non-symmetric input.
EigenDecomposition eigh(const Eigen::MatrixXd& matrix, bool want_vectors = false);

/// Ascending eigenvalues of a symmetric tridiagonal matrix.
Eigen::VectorXd tridiagonal_eigenvalues(const TridiagonalBlock& block);

/// Full ascending spectrum of the truncated Hamiltonian, solved per parity sector.
/// Same eigenvalues as eigh(build_hamiltonian(params, trunc)).
std::vector<double> truncated_spectrum(const ModelParams& params, const Truncation& trunc);

struct SpectrumOptions {
    int k = 8;            // lowest eigenvalues that must be stable
    double tol = 1e-8;    // allowed change of those eigenvalues under one doubling
    int n_start = 32;
    int n_cap = 4096;
};

struct Spectrum {
    std::vector<double> energies;  // every eigenvalue at n_max_used, ascending
    int n_max_used = 0;
    int tracked = 0;               // number of eigenvalues the convergence test covered
    bool converged = false;
    double max_shift = 0.0;        // largest change of a tracked eigenvalue in the last doubling
    long long work = 0;            // summed dimension of every solve performed
};

/// Doubles n_max from options.n_start until the lowest k eigenvalues move by at
/// most tol, or n_cap is reached (converged = false).
///
/// On success the returned energies belong to the smaller truncation of the last
/// compared pair: recomputing at 2 * n_max_used reproduces them within tol.
Spectrum converged_spectrum(const ModelParams& params, const SpectrumOptions& options = {});

}  // namespace qrm
