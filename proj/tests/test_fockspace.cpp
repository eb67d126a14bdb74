#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sbparity/fockspace.hpp"
#include "support/oracles.hpp"

using namespace sbparity;

namespace {

BathModel single_mode(double q) { return bath_from_modes(SpectralLaw{0.1, 1.0, 1.0}, {{1.0, 2.0 * q}}); }

BathModel three_modes() {
    return bath_from_modes(SpectralLaw{0.1, 1.0, 1.0}, {{1.0, 0.6}, {0.5, 0.3}, {0.25, 0.4}});
}

} // namespace

TEST(Basis, PerModeAndTotalQuantaDimensions) {
    EXPECT_EQ(enumerate_basis(1, TruncationPolicy::per_mode(40)).dim(), 41u);
    EXPECT_EQ(enumerate_basis(2, TruncationPolicy::per_mode(3)).dim(), 16u);
    EXPECT_EQ(enumerate_basis(3, TruncationPolicy::total_quanta(10)).dim(), 286u);
    EXPECT_EQ(basis_dimension(3, TruncationPolicy::total_quanta(10)), 286.0);
}

TEST(Basis, LexicographicOrderAndLookup) {
    const auto basis = enumerate_basis(3, TruncationPolicy::total_quanta(4));
    for (std::size_t i = 1; i < basis.dim(); ++i) EXPECT_LT(basis.state(i - 1), basis.state(i));
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        EXPECT_TRUE(basis.policy().admits(basis.state(i)));
        EXPECT_EQ(basis.index_of(basis.state(i)), i);
    }
    EXPECT_FALSE(basis.index_of({5, 0, 0}).has_value());
    EXPECT_EQ(basis.state(0), (OccupationVector{0, 0, 0}));
}

TEST(Basis, DefaultPolicy) {
    EXPECT_EQ(TruncationPolicy::default_for(1, 7).kind, TruncationPolicy::Kind::PerMode);
    EXPECT_EQ(TruncationPolicy::default_for(2, 7).kind, TruncationPolicy::Kind::PerMode);
    EXPECT_EQ(TruncationPolicy::default_for(3, 7).kind, TruncationPolicy::Kind::TotalQuanta);
}

TEST(Basis, CapacityGuard) {
    EXPECT_THROW(enumerate_basis(30, TruncationPolicy::per_mode(2)), CapacityError);
    EXPECT_THROW(enumerate_basis(0, TruncationPolicy::per_mode(2)), ParameterError);
    EXPECT_THROW(enumerate_basis(1, TruncationPolicy::per_mode(-1)), ParameterError);
}

TEST(MatrixElements, DisplacedGroundOverlapExample) {
    // <0|P|1> in the displaced basis: 2 q e^{-2q^2}
    const double q = 0.5;
    EXPECT_NEAR(mode_d_element(0, 1, q), 2.0 * q * std::exp(-2.0 * q * q), 1e-15);
    EXPECT_NEAR(mode_d_element(0, 1, q), 0.606530659712633423604, 1e-15);
    EXPECT_NEAR(mode_d_element(0, 0, q), std::exp(-2.0 * q * q), 1e-15);
}

TEST(MatrixElements, ZeroRowClosedForm) {
    for (double q : {0.1, 0.5, 1.0, 2.0})
        for (int n = 0; n <= 30; ++n) {
            const double expected = std::pow(2.0 * q, n) / std::sqrt(std::tgamma(n + 1.0));
            EXPECT_NEAR(mode_l_element(0, n, q), expected, 1e-12 * std::max(1.0, expected)) << q << " " << n;
        }
}

TEST(MatrixElements, AgreesWithLaguerreForm) {
    for (double q : {0.05, 0.3, 0.7, 1.0, 1.5})
        for (int m = 0; m <= 20; ++m)
            for (int n = 0; n <= 20; ++n) {
                const double ref = oracle::laguerre_l(m, n, q) * std::exp(-2.0 * q * q);
                EXPECT_NEAR(mode_d_element(m, n, q), ref, 1e-11) << m << "," << n << " q=" << q;
            }
}

TEST(MatrixElements, ExactRationalUpToTen) {
    // q = 3/8: L_{m,n} / sqrt(m! n!) is a rational polynomial in q.
    const oracle::Rational q(3, 8);
    for (int m = 0; m <= 10; ++m)
        for (int n = 0; n <= 10; ++n) {
            const double exact = static_cast<double>(oracle::l_over_sqrt_factorials(m, n, q));
            const double norm = std::sqrt(std::tgamma(m + 1.0) * std::tgamma(n + 1.0));
            const double got = mode_l_element(m, n, 0.375) / norm;
            EXPECT_NEAR(got, exact, 1e-14 * std::max(1.0, std::abs(exact))) << m << "," << n;
        }
}

TEST(MatrixElements, ExactRationalStrongDisplacement) {
    // 4 q^2 = 9 and occupations to 40: the regime where an alternating sum cancels badly
    const oracle::Rational q(3, 2);
    for (int m = 0; m <= 40; m += 3)
        for (int n = 0; n <= 40; ++n) {
            const double scaled = static_cast<double>(oracle::l_over_sqrt_factorials(m, n, q));
            const double exact = scaled * std::exp(0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0)) - 4.5);
            EXPECT_NEAR(mode_d_element(m, n, 1.5), exact, 1e-13) << m << "," << n;
        }
}

TEST(MatrixElements, SymmetryExact) {
    const auto bath = three_modes();
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> occ(0, 4);
    for (int draw = 0; draw < 50; ++draw) {
        OccupationVector m{occ(rng), occ(rng), occ(rng)};
        OccupationVector n{occ(rng), occ(rng), occ(rng)};
        EXPECT_EQ(l_element(m, n, bath), l_element(n, m, bath));
        EXPECT_EQ(d_element(m, n, bath), d_element(n, m, bath));
    }
}

TEST(MatrixElements, MultiplicativeOverModes) {
    const auto bath = three_modes();
    const OccupationVector m{2, 0, 3};
    const OccupationVector n{1, 4, 3};
    double product = 1.0;
    for (std::size_t k = 0; k < 3; ++k) product *= mode_d_element(m[k], n[k], bath.modes[k].q);
    EXPECT_NEAR(d_element(m, n, bath), product, 1e-16);
}

TEST(MatrixElements, ZeroDisplacementIsParityDiagonal) {
    const auto bath = bath_from_modes(SpectralLaw{0.0, 1.0, 1.0}, {{1.0, 0.0}, {0.5, 0.0}});
    const auto basis = enumerate_basis(2, TruncationPolicy::per_mode(4));
    const auto table = d_matrix(basis, bath);
    for (std::size_t i = 0; i < basis.dim(); ++i)
        for (std::size_t j = 0; j < basis.dim(); ++j) {
            const auto& s = basis.state(i);
            const double expected = i == j ? ((s[0] + s[1]) % 2 == 0 ? 1.0 : -1.0) : 0.0;
            EXPECT_EQ(table.D(i, j), expected);
        }
}

TEST(MatrixElements, RandomDrawsMatchOverlapOracle) {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> qdist(0.0, 1.2);
    std::uniform_int_distribution<int> occ(0, 8);
    for (int draw = 0; draw < 100; ++draw) {
        const double q = qdist(rng);
        int m = occ(rng);
        int n = occ(rng);
        while (m + n > 8) n = occ(rng) % (9 - m);
        const auto bath = single_mode(q);
        const double oracle_value = overlap_oracle({m}, {n}, bath, 120);
        EXPECT_NEAR(d_element({m}, {n}, bath), oracle_value, 1e-8) << m << "," << n << " q=" << q;
    }
}

TEST(MatrixElements, OverlapOracleDetectsShortCutoff) {
    EXPECT_THROW(overlap_oracle({3}, {2}, single_mode(2.0), 5), ConvergenceError);
}

TEST(MatrixElements, OrthogonalityDecaysWithIndexDistance) {
    const double q = 0.3;
    double previous = std::abs(mode_d_element(0, 0, q));
    for (int n = 1; n <= 20; ++n) {
        const double v = std::abs(mode_d_element(0, n, q));
        EXPECT_LT(v, previous);
        previous = v;
    }
}

TEST(MatrixElements, DIsAnInvolutionOnTheFullSpace) {
    // sum_n D_{m,n} D_{n,l} -> delta_{m,l} as the basis grows
    const double q = 0.4;
    for (int m = 0; m <= 3; ++m)
        for (int l = 0; l <= 3; ++l) {
            double sum = 0.0;
            for (int n = 0; n <= 80; ++n) sum += mode_d_element(m, n, q) * mode_d_element(n, l, q);
            EXPECT_NEAR(sum, m == l ? 1.0 : 0.0, 1e-13);
        }
}

TEST(MatrixElements, OccupationGuards) {
    EXPECT_THROW(mode_l_element(-1, 0, 0.5), ParameterError);
    EXPECT_THROW(mode_l_element(171, 0, 0.5), CapacityError);
    EXPECT_NO_THROW(mode_l_element(170, 0, 0.01));
    const auto bath = three_modes();
    EXPECT_THROW(d_element({0, 0}, {0, 0, 0}, bath), ParameterError);
}

TEST(MatrixElements, DenseCapacityGuard) {
    const auto bath = three_modes();
    const auto basis = enumerate_basis(3, TruncationPolicy::total_quanta(10));
    EXPECT_THROW(d_matrix(basis, bath, 100), CapacityError);
    EXPECT_NO_THROW(d_matrix(basis, bath));
}
