#include "qrm/model.hpp"

#include "qrm/format.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace qrm {

namespace {

void require_finite(double value, const char* name) {
    if (!std::isfinite(value))
        throw std::invalid_argument(std::string(name) + " must be finite");
}

double spin_energy(const ModelParams& params, int spin) {
    return spin == 1 ? 0.5 * params.omega() : -0.5 * params.omega();
}

}  // namespace

ModelParams::ModelParams(double ratio, double g) : ratio_(ratio), g_(g) {
    require_finite(ratio, "ratio");
    require_finite(g, "g");
    if (ratio <= 0.0) throw std::invalid_argument("ratio must be > 0");
    if (g < 0.0) throw std::invalid_argument("g must be >= 0");
}

ModelParams ModelParams::from_lambda(double ratio, double lambda) {
    require_finite(ratio, "ratio");
    require_finite(lambda, "lambda");
    if (ratio <= 0.0) throw std::invalid_argument("ratio must be > 0");
    return ModelParams(ratio, 2.0 * lambda / std::sqrt(omega0() * ratio));
}

double ModelParams::lambda() const noexcept {
    return 0.5 * g_ * std::sqrt(omega0() * ratio_);
}

Truncation::Truncation(int n_max) : n_max_(n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
}

std::string_view to_string(Phase phase) {
    return phase == Phase::normal ? "normal" : "superradiant";
}

std::optional<Phase> phase_of(double g) {
    if (g < kCriticalCoupling) return Phase::normal;
    if (g > kCriticalCoupling) return Phase::superradiant;
    return std::nullopt;
}

Eigen::MatrixXd build_hamiltonian(const ModelParams& params, const Truncation& trunc) {
    const auto dim = static_cast<Eigen::Index>(trunc.dimension());
    const double lambda = params.lambda();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);

    for (int n = 0; n <= trunc.n_max(); ++n) {
        for (int s = 0; s < 2; ++s) {
            const Eigen::Index i = 2 * n + s;
            h(i, i) = params.omega0() * n + spin_energy(params, s);
            if (n < trunc.n_max()) {
                // a^dag raises n by one, sigma_x flips the spin.
                const Eigen::Index j = 2 * (n + 1) + (1 - s);
                const double element = -lambda * std::sqrt(static_cast<double>(n + 1));
                h(i, j) = element;
                h(j, i) = element;
            }
        }
    }
    return h;
}

TridiagonalBlock parity_block(const ModelParams& params, const Truncation& trunc, int parity) {
    if (parity != 0 && parity != 1) throw std::invalid_argument("parity must be 0 or 1");
    const int size = trunc.n_max() + 1;
    const double lambda = params.lambda();

    TridiagonalBlock block;
    block.diagonal.resize(static_cast<std::size_t>(size));
    block.off_diagonal.resize(static_cast<std::size_t>(size - 1));
    for (int n = 0; n < size; ++n) {
        const int spin = (n + parity) % 2;
        block.diagonal[static_cast<std::size_t>(n)] = params.omega0() * n + spin_energy(params, spin);
        if (n + 1 < size)
            block.off_diagonal[static_cast<std::size_t>(n)] =
                -lambda * std::sqrt(static_cast<double>(n + 1));
    }
    return block;
}

double effective_excitation(double g, Phase phase) {
    require_finite(g, "g");
    if (g < 0.0) throw DomainError("coupling must be >= 0");
    switch (phase) {
    case Phase::normal:
        if (g >= kCriticalCoupling) throw DomainError("normal-phase excitation requires g < 1");
        return ModelParams::omega0() * std::sqrt((1.0 - g) * (1.0 + g));
    case Phase::superradiant: {
        if (g <= kCriticalCoupling) throw DomainError("superradiant excitation requires g > 1");
        const double inv2 = 1.0 / (g * g);
        return ModelParams::omega0() * std::sqrt((1.0 - inv2) * (1.0 + inv2));
    }
    }
    throw DomainError("unknown phase");
}

double effective_ground_energy(double g, Phase phase, const ModelParams& params) {
    require_finite(g, "g");
    if (g < 0.0) throw DomainError("coupling must be >= 0");
    switch (phase) {
    case Phase::normal:
        if (g >= kCriticalCoupling) throw DomainError("normal-phase ground energy requires g < 1");
        return -0.5 * params.omega();
    case Phase::superradiant:
        if (g <= kCriticalCoupling) throw DomainError("superradiant ground energy requires g > 1");
        return -0.25 * params.omega() * (g * g + 1.0 / (g * g));
    }
    throw DomainError("unknown phase");
}

void write_matrix_triplets(std::ostream& out, const Eigen::MatrixXd& hamiltonian,
                           const ModelParams& params, const Truncation& trunc) {
    out << "# qrm n_max=" << trunc.n_max() << " ratio=" << format_double(params.ratio())
        << " g=" << format_double(params.g()) << '\n';
    for (Eigen::Index r = 0; r < hamiltonian.rows(); ++r)
        for (Eigen::Index c = 0; c < hamiltonian.cols(); ++c)
            if (hamiltonian(r, c) != 0.0)
                out << r << ' ' << c << ' ' << format_double(hamiltonian(r, c)) << '\n';
}

}  // namespace qrm
