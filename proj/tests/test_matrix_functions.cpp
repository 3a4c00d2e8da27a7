#include <bts/matrix_functions.hpp>
#include <bts/structured.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using bts::cplx;
using bts::DenseMatrix;

namespace {

DenseMatrix diag(std::vector<double> d) {
    DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
    return m;
}

DenseMatrix random_spd(std::mt19937& rng, Eigen::Index n, bool complex = true) {
    std::normal_distribution<double> g;
    DenseMatrix x(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) x(i, j) = cplx(g(rng), complex ? g(rng) : 0.0);
    DenseMatrix a = x * x.adjoint() / static_cast<double>(n) + 0.5 * DenseMatrix::Identity(n, n);
    return bts::hermitize(a);
}

double rel(const DenseMatrix& a, const DenseMatrix& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST(HpdPower, DiagonalSquareRoot) {
    EXPECT_LE((bts::hpd_power(diag({4, 9}), 0.5) - diag({2, 3})).norm(), 1e-14);
}

TEST(HpdPower, IdentityAnyPower) {
    for (double p : {-1.0, -0.5, 0.5, 1.0, 2.7})
        EXPECT_LE((bts::hpd_power(DenseMatrix::Identity(5, 5), p) - DenseMatrix::Identity(5, 5)).norm(), 1e-14);
}

TEST(HpdPower, SquareRootSquaredReproducesInput) {
    std::mt19937 rng(1);
    const DenseMatrix a = random_spd(rng, 50);
    const DenseMatrix r = bts::hpd_power(a, 0.5);
    EXPECT_LE((r * r - a).norm(), 1e-9 * a.norm());
    EXPECT_LE((bts::hpd_power(a, -1.0) * a - DenseMatrix::Identity(50, 50)).norm(), 1e-9);
}

TEST(HpdPower, OutputExactlyHermitian) {
    std::mt19937 rng(2);
    const DenseMatrix r = bts::hpd_power(random_spd(rng, 20), -0.5);
    EXPECT_EQ((r - r.adjoint()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(HpdFactorize, ReconstructionError) {
    std::mt19937 rng(3);
    const DenseMatrix a = random_spd(rng, 40);
    const auto f = bts::hpd_factorize(a);
    EXPECT_LE((f.reconstruct() - a).norm(), 1e-10 * a.norm());
    EXPECT_GT(f.eigenvalues.minCoeff(), 0.0);
    EXPECT_EQ(f.clamped, 0u);
}

TEST(HpdFactorize, ClampPolicy) {
    bts::ClampLog log;
    // Tiny negative and zero eigenvalues are lifted to 1e-12 * |A|.
    const auto f = bts::hpd_factorize(diag({1.0, 0.0, -5e-11}), &log);
    EXPECT_EQ(f.clamped, 2u);
    EXPECT_EQ(log.clamped_eigenvalues, 2u);
    EXPECT_EQ(log.factorizations, 1u);
    EXPECT_DOUBLE_EQ(f.eigenvalues.minCoeff(), 1e-12);
    // Clearly negative eigenvalues are an error.
    try {
        bts::hpd_factorize(diag({1.0, -1e-6}));
        FAIL() << "expected NotHpdError";
    } catch (const bts::NotHpdError& e) {
        EXPECT_DOUBLE_EQ(e.min_eigenvalue(), -1e-6);
    }
    EXPECT_THROW(bts::hpd_factorize(DenseMatrix::Zero(3, 3)), bts::NotHpdError);
    EXPECT_THROW(bts::hpd_factorize(DenseMatrix(2, 3)), bts::ValidationError);
}

TEST(GeometricMean, ScalarCase) {
    const DenseMatrix g = bts::geometric_mean(2.0 * DenseMatrix::Identity(4, 4), 8.0 * DenseMatrix::Identity(4, 4));
    EXPECT_LE((g - 4.0 * DenseMatrix::Identity(4, 4)).norm(), 1e-14);
}

TEST(GeometricMean, CommutingDiagonal) {
    EXPECT_LE((bts::geometric_mean(diag({1, 4}), diag({9, 16})) - diag({3, 8})).norm(), 1e-14);
}

TEST(GeometricMean, ErrorsNameTheArgument) {
    try {
        bts::geometric_mean(diag({1, 1}), diag({1, -1}));
        FAIL() << "expected NotHpdError";
    } catch (const bts::NotHpdError& e) {
        EXPECT_NE(std::string(e.what()).find("second argument"), std::string::npos);
    }
    try {
        bts::geometric_mean(diag({-1, 1}), diag({1, 1}));
        FAIL() << "expected NotHpdError";
    } catch (const bts::NotHpdError& e) {
        EXPECT_NE(std::string(e.what()).find("first argument"), std::string::npos);
    }
    EXPECT_THROW(bts::geometric_mean(diag({1, 1}), diag({1, 1, 1})), bts::ValidationError);
}

// Property suites on random SPD pairs.

TEST(GeometricMeanProperties, Symmetry) {
    std::mt19937 rng(100);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = 1 + trial % 50;
        const DenseMatrix a = random_spd(rng, n, trial % 2 == 0);
        const DenseMatrix b = random_spd(rng, n, trial % 2 == 0);
        const DenseMatrix gab = bts::geometric_mean(a, b);
        EXPECT_LE((gab - bts::geometric_mean(b, a)).norm(), 1e-9 * gab.norm()) << trial;
    }
}

TEST(GeometricMeanProperties, SymmetryUpToOrder100) {
    std::mt19937 rng(101);
    for (Eigen::Index n : {60, 80, 100}) {
        const DenseMatrix a = random_spd(rng, n);
        const DenseMatrix b = random_spd(rng, n);
        const DenseMatrix gab = bts::geometric_mean(a, b);
        EXPECT_LE((gab - bts::geometric_mean(b, a)).norm(), 1e-9 * gab.norm()) << n;
    }
}

TEST(GeometricMeanProperties, Idempotence) {
    std::mt19937 rng(200);
    for (int trial = 0; trial < 200; ++trial) {
        const DenseMatrix a = random_spd(rng, 1 + trial % 50, trial % 2 == 1);
        EXPECT_LE(rel(bts::geometric_mean(a, a), a), 1e-10) << trial;
    }
}

TEST(GeometricMeanProperties, DeterminantIdentity) {
    std::mt19937 rng(300);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = 1 + trial % 30;
        const DenseMatrix a = random_spd(rng, n);
        const DenseMatrix b = random_spd(rng, n);
        const double lhs = std::abs(bts::geometric_mean(a, b).determinant());
        const double rhs = std::sqrt(std::abs(a.determinant()) * std::abs(b.determinant()));
        EXPECT_LE(std::abs(lhs - rhs), 1e-8 * rhs) << trial;
    }
}

TEST(GeometricMeanProperties, CommutingCase) {
    std::mt19937 rng(400);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = 1 + trial % 50;
        // Shared eigenvectors make A and B commute.
        const DenseMatrix q = random_spd(rng, n).householderQr().householderQ();
        Eigen::VectorXd da(n), db(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            da[i] = u(rng);
            db[i] = u(rng);
        }
        const DenseMatrix a = bts::hermitize(q * da.cast<cplx>().asDiagonal() * q.adjoint());
        const DenseMatrix b = bts::hermitize(q * db.cast<cplx>().asDiagonal() * q.adjoint());
        const DenseMatrix root = bts::hpd_power(bts::hermitize(a * b), 0.5);
        EXPECT_LE(rel(bts::geometric_mean(a, b), root), 1e-9) << trial;
    }
}

TEST(GeometricMeanProperties, CongruenceSimilarity) {
    std::mt19937 rng(500);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 2 + trial;
        const DenseMatrix a = random_spd(rng, n);
        const DenseMatrix b = random_spd(rng, n);
        const DenseMatrix s = bts::hpd_power(a, -0.5);
        Eigen::SelfAdjointEigenSolver<DenseMatrix> congruent(bts::hermitize(s * b * s), Eigen::EigenvaluesOnly);
        Eigen::ComplexEigenSolver<DenseMatrix> similar(bts::hpd_power(a, -1.0) * b, false);
        std::vector<double> x(congruent.eigenvalues().data(), congruent.eigenvalues().data() + n);
        std::vector<double> y;
        for (Eigen::Index i = 0; i < n; ++i) y.push_back(similar.eigenvalues()[i].real());
        std::sort(y.begin(), y.end());
        for (Eigen::Index i = 0; i < n; ++i)
            EXPECT_NEAR(x[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(i)], 1e-8 * std::max(1.0, x.back()));
    }
}

TEST(GeometricMeanProperties, ToeplitzNormBound) {
    const auto f = bts::parse_symbol("4-cos(t)-2*cos(2*t)");
    const auto g = bts::parse_symbol("t^2+1");
    const auto pf = bts::essinf_probe(f, 4096);
    const auto pg = bts::essinf_probe(g, 4096);
    const double bound = std::max(std::abs(pf.min), pf.max) * std::sqrt(std::max(std::abs(pg.min), pg.max)) /
                         std::sqrt(pf.min);
    for (std::size_t n : {16u, 32u, 64u, 128u, 256u}) {
        const DenseMatrix gm = bts::geometric_mean(bts::build_toeplitz(f, n), bts::build_toeplitz(g, n));
        EXPECT_LE(bts::hermitian_spectral_norm(gm), bound + 1e-8) << n;
    }
}

TEST(Norm, Examples) {
    EXPECT_NEAR(bts::norm(DenseMatrix::Identity(3, 3), bts::Norm::frobenius()), std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(bts::norm(diag({3, -4}), bts::Norm::spectral()), 4.0, 1e-14);
    DenseMatrix nil = DenseMatrix::Zero(2, 2);
    nil(0, 1) = 1.0;
    EXPECT_NEAR(bts::norm(nil, bts::Norm::schatten(1)), 1.0, 1e-14);
    EXPECT_NEAR(bts::norm(diag({3, -4}), bts::Norm::schatten(2)), 5.0, 1e-14);
    EXPECT_NEAR(bts::norm(diag({3, -4}), bts::Norm::schatten(INFINITY)), 4.0, 1e-14);
    EXPECT_THROW(bts::norm(nil, bts::Norm::schatten(0.5)), bts::ValidationError);
}

TEST(Norm, SchattenTwoIsFrobenius) {
    std::mt19937 rng(9);
    const DenseMatrix a = random_spd(rng, 12) - 2.0 * DenseMatrix::Identity(12, 12);
    EXPECT_NEAR(bts::norm(a, bts::Norm::schatten(2)), bts::norm(a), 1e-12 * bts::norm(a));
}
