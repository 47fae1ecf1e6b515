#include "qrm/eigen.hpp"
#include "qrm/model.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

using namespace qrm;

TEST_CASE("ModelParams validates and derives lambda") {
    const ModelParams p(400.0, 0.7);
    CHECK(p.omega0() == 1.0);
    CHECK(p.omega() == 400.0);
    CHECK(p.lambda() == doctest::Approx(0.7 * 20.0 / 2.0).epsilon(1e-15));
    CHECK(2.0 * p.lambda() / std::sqrt(p.omega0() * p.omega()) == doctest::Approx(0.7).epsilon(1e-15));

    const ModelParams q = ModelParams::from_lambda(3.0, 0.25);
    CHECK(q.lambda() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(q.g() == doctest::Approx(0.5 / std::sqrt(3.0)).epsilon(1e-15));

    CHECK_THROWS_AS(ModelParams(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(-1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(1.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(std::nan(""), 0.5), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(1.0, std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("Truncation dimension") {
    for (int n : {1, 2, 7, 100}) CHECK(Truncation(n).dimension() == static_cast<std::size_t>(2 * (n + 1)));
    CHECK_THROWS_AS(Truncation(0), std::invalid_argument);
}

TEST_CASE("phase tags") {
    CHECK(phase_of(0.3) == Phase::normal);
    CHECK(phase_of(1.3) == Phase::superradiant);
    CHECK_FALSE(phase_of(1.0).has_value());
    CHECK(to_string(Phase::superradiant) == "superradiant");
}

TEST_CASE("uncoupled Hamiltonian is diagonal n +- Omega/2") {
    const ModelParams p(2.5, 0.0);
    const Eigen::MatrixXd h = build_hamiltonian(p, Truncation(6));
    for (int n = 0; n <= 6; ++n) {
        CHECK(h(2 * n, 2 * n) == n - 1.25);
        CHECK(h(2 * n + 1, 2 * n + 1) == n + 1.25);
    }
    Eigen::MatrixXd off = h;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("coupling element is -lambda sqrt(n+1) with a spin flip") {
    const ModelParams p(9.0, 0.8);
    const Truncation t(5);
    const Eigen::MatrixXd h = build_hamiltonian(p, t);
    for (int n = 0; n < 5; ++n)
        for (int s = 0; s < 2; ++s) {
            const int from = 2 * n + s;
            const int flipped = 2 * (n + 1) + (1 - s);
            const int kept = 2 * (n + 1) + s;
            CHECK(h(from, flipped) == doctest::Approx(-p.lambda() * std::sqrt(n + 1.0)).epsilon(1e-15));
            CHECK(h(from, kept) == 0.0);
        }
    CHECK(h(0, 1) == 0.0);
}

TEST_CASE("Hamiltonian is bitwise symmetric") {
    for (double g : {0.0, 0.4, 1.0, 1.7}) {
        const Eigen::MatrixXd h = build_hamiltonian(ModelParams(37.0, g), Truncation(40));
        CHECK((h.array() == h.transpose().array()).all());
    }
}

TEST_CASE("n_max = 1, ratio = 2, g = 0 has eigenvalues {-1, 0, 1, 2}") {
    const Eigen::MatrixXd h = build_hamiltonian(ModelParams(2.0, 0.0), Truncation(1));
    CHECK(h.rows() == 4);
    const auto values = eigh(h).values;
    const double expected[] = {-1.0, 0.0, 1.0, 2.0};
    for (int i = 0; i < 4; ++i) CHECK(values[i] == doctest::Approx(expected[i]).epsilon(1e-14));
}

TEST_CASE("g = 0 spectrum equals {n +- Omega/2} at any cutoff") {
    for (int n_max : {1, 5, 33}) {
        const ModelParams p(3.0, 0.0);
        std::vector<double> expected;
        for (int n = 0; n <= n_max; ++n) {
            expected.push_back(n - 1.5);
            expected.push_back(n + 1.5);
        }
        std::sort(expected.begin(), expected.end());
        const auto values = eigh(build_hamiltonian(p, Truncation(n_max))).values;
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(std::abs(values[static_cast<Eigen::Index>(i)] - expected[i]) <= 1e-12 * std::max(1.0, std::abs(expected[i])));
    }
}

TEST_CASE("parity blocks reproduce the dense spectrum") {
    const ModelParams p(12.0, 1.3);
    const Truncation t(30);
    const auto dense = eigh(build_hamiltonian(p, t)).values;
    const auto split = truncated_spectrum(p, t);
    REQUIRE(split.size() == t.dimension());
    for (std::size_t i = 0; i < split.size(); ++i)
        CHECK(split[i] == doctest::Approx(dense[static_cast<Eigen::Index>(i)]).epsilon(1e-11).scale(12.0));

    const TridiagonalBlock even = parity_block(p, t, 0);
    const TridiagonalBlock odd = parity_block(p, t, 1);
    CHECK(even.diagonal.size() == 31);
    CHECK(even.off_diagonal == odd.off_diagonal);
    CHECK(even.diagonal[0] == -6.0);  // |0, down>
    CHECK(odd.diagonal[0] == 6.0);    // |0, up>
    CHECK_THROWS_AS(parity_block(p, t, 2), std::invalid_argument);
}

TEST_CASE("effective excitation energies") {
    CHECK(effective_excitation(0.0, Phase::normal) == 1.0);
    CHECK(effective_excitation(0.6, Phase::normal) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(effective_excitation(std::sqrt(2.0), Phase::superradiant) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));

    CHECK_THROWS_AS(effective_excitation(1.0, Phase::normal), DomainError);
    CHECK_THROWS_AS(effective_excitation(1.0, Phase::superradiant), DomainError);
    CHECK_THROWS_AS(effective_excitation(1.2, Phase::normal), DomainError);
    CHECK_THROWS_AS(effective_excitation(0.8, Phase::superradiant), DomainError);
}

TEST_CASE("excitation is monotone on each branch") {
    double previous = effective_excitation(1e-3, Phase::normal);
    for (int i = 2; i < 1000; ++i) {
        const double e = effective_excitation(i * 1e-3, Phase::normal);
        CHECK(e < previous);
        previous = e;
    }
    previous = effective_excitation(1.0 + 1e-3, Phase::superradiant);
    for (int i = 2; i < 1000; ++i) {
        const double e = effective_excitation(1.0 + i * 1e-3, Phase::superradiant);
        CHECK(e > previous);
        previous = e;
    }
}

TEST_CASE("excitation vanishes like |1 - g|^(1/2) at the critical point") {
    // Normal side: sqrt(1 - g^2) / (sqrt(2) sqrt(d)) = sqrt(1 - d/2) -> 1.
    // Superradiant side: sqrt(1 - g^-4) ~ 2 sqrt(d), so the same ratio tends to sqrt(2).
    for (double d : {1e-4, 1e-6, 1e-8}) {
        const double normal = effective_excitation(1.0 - d, Phase::normal) / (std::sqrt(2.0) * std::sqrt(d));
        const double super = effective_excitation(1.0 + d, Phase::superradiant) / (std::sqrt(2.0) * std::sqrt(d));
        CHECK(normal == doctest::Approx(1.0).epsilon(2.0 * d + 1e-7));
        CHECK(super == doctest::Approx(std::sqrt(2.0)).epsilon(5.0 * d + 1e-7));
    }
}

TEST_CASE("effective ground energies") {
    const ModelParams p(400.0, 0.5);
    CHECK(effective_ground_energy(0.3, Phase::normal, p) == -200.0);
    CHECK(effective_ground_energy(0.99, Phase::normal, p) == -200.0);
    CHECK(effective_ground_energy(2.0, Phase::superradiant, ModelParams(16.0, 2.0)) == doctest::Approx(-17.0).epsilon(1e-15));
    CHECK(effective_ground_energy(1.0 + 1e-9, Phase::superradiant, p) == doctest::Approx(-200.0).epsilon(1e-12));
    CHECK_THROWS_AS(effective_ground_energy(1.0, Phase::normal, p), DomainError);
    CHECK_THROWS_AS(effective_ground_energy(0.5, Phase::superradiant, p), DomainError);
}

TEST_CASE("matrix triplet dump") {
    const ModelParams p(3.0, 0.5);
    const Truncation t(1);
    std::ostringstream out;
    write_matrix_triplets(out, build_hamiltonian(p, t), p, t);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "# qrm n_max=1 ratio=3 g=0.5");
    int row = 0, col = 0, lines = 0;
    double value = 0.0;
    while (in >> row >> col >> value) {
        ++lines;
        CHECK(value != 0.0);
    }
    // Four diagonal entries and the symmetric coupling pair (0,3), (1,2).
    CHECK(lines == 8);
}
