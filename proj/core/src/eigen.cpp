#include "qrm/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qrm {

EigenDecomposition eigh(const Eigen::MatrixXd& matrix, bool want_vectors) {
    if (matrix.rows() != matrix.cols()) throw std::invalid_argument("eigh: matrix must be square");
    if (matrix.size() == 0) return {Eigen::VectorXd(0), std::nullopt};
    if (!matrix.allFinite()) throw std::invalid_argument("eigh: matrix has non-finite entries");

    const double scale = matrix.cwiseAbs().maxCoeff();
    const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
    if (asym > 64.0 * std::numeric_limits<double>::epsilon() * scale)
        throw std::invalid_argument("eigh: matrix is not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        matrix, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw EigenSolverError("eigh: QR iteration did not converge (dimension " +
                               std::to_string(matrix.rows()) + ")");

    EigenDecomposition out;
    out.values = solver.eigenvalues();
    if (want_vectors) out.vectors = solver.eigenvectors();
    return out;
}

Eigen::VectorXd tridiagonal_eigenvalues(const TridiagonalBlock& block) {
    const auto n = static_cast<Eigen::Index>(block.diagonal.size());
    if (n == 0) return Eigen::VectorXd(0);
    if (static_cast<Eigen::Index>(block.off_diagonal.size()) != n - 1)
        throw std::invalid_argument("tridiagonal block: off-diagonal must have n - 1 entries");

    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(block.diagonal.data(), n);
    Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
    for (Eigen::Index i = 0; i + 1 < n; ++i) sub[i] = block.off_diagonal[static_cast<std::size_t>(i)];
    if (!diag.allFinite() || !sub.allFinite())
        throw std::invalid_argument("tridiagonal block has non-finite entries");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw EigenSolverError("tridiagonal QR iteration did not converge (dimension " +
                               std::to_string(n) + ")");
    return solver.eigenvalues();
}

std::vector<double> truncated_spectrum(const ModelParams& params, const Truncation& trunc) {
    const Eigen::VectorXd even = tridiagonal_eigenvalues(parity_block(params, trunc, 0));
    const Eigen::VectorXd odd = tridiagonal_eigenvalues(parity_block(params, trunc, 1));
    std::vector<double> all(static_cast<std::size_t>(even.size() + odd.size()));
    std::merge(even.begin(), even.end(), odd.begin(), odd.end(), all.begin());
    return all;
}

Spectrum converged_spectrum(const ModelParams& params, const SpectrumOptions& options) {
    if (options.k < 1) throw std::invalid_argument("converged_spectrum: k must be >= 1");
    if (!(options.tol > 0.0)) throw std::invalid_argument("converged_spectrum: tol must be > 0");
    if (options.n_start < 1) throw std::invalid_argument("converged_spectrum: n_start must be >= 1");
    if (options.n_cap < options.n_start)
        throw std::invalid_argument("converged_spectrum: n_cap must be >= n_start");

    // The truncated space must hold at least k levels.
    int n = std::max(options.n_start, (options.k + 1) / 2);
    if (n > options.n_cap) throw std::invalid_argument("converged_spectrum: n_cap too small for k levels");

    Spectrum result;
    result.tracked = options.k;
    std::vector<double> current = truncated_spectrum(params, Truncation(n));
    result.work += static_cast<long long>(current.size());
    double shift = std::numeric_limits<double>::infinity();

    while (n < options.n_cap) {
        const int next_n = std::min(2 * n, options.n_cap);
        std::vector<double> next = truncated_spectrum(params, Truncation(next_n));
        result.work += static_cast<long long>(next.size());

        shift = 0.0;
        for (int i = 0; i < options.k; ++i)
            shift = std::max(shift, std::abs(next[static_cast<std::size_t>(i)] -
                                             current[static_cast<std::size_t>(i)]));
        if (shift <= options.tol) {
            result.energies = std::move(current);
            result.n_max_used = n;
            result.converged = true;
            result.max_shift = shift;
            return result;
        }
        n = next_n;
        current = std::move(next);
    }

    result.energies = std::move(current);
    result.n_max_used = n;
    result.converged = false;
    result.max_shift = shift;
    return result;
}

}  // namespace qrm
