#include <bts/spectral.hpp>
#include <bts/structured.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using bts::cplx;
using bts::DenseMatrix;
using bts::FourierSeries;

namespace {

constexpr double kPi = std::numbers::pi;

FourierSeries exact_series(std::vector<cplx> coeffs) {
    const std::size_t maxlag = (coeffs.size() - 1) / 2;
    return FourierSeries(std::move(coeffs), maxlag, true, 0);
}

DenseMatrix tridiag(Eigen::Index n, double sub, double diag, double super) {
    DenseMatrix t = DenseMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        t(i, i) = diag;
        if (i + 1 < n) {
            t(i + 1, i) = sub;
            t(i, i + 1) = super;
        }
    }
    return t;
}

DenseMatrix cyclic_shift(Eigen::Index n) {
    DenseMatrix p = DenseMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) p((i + 1) % n, i) = 1.0;
    return p;
}

// Least-squares fit over the circulant basis {P^j}: solves the normal
// equations numerically, independently of the diagonal-averaging formula.
DenseMatrix least_squares_circulant(const DenseMatrix& t) {
    const Eigen::Index n = t.rows();
    const DenseMatrix p = cyclic_shift(n);
    Eigen::MatrixXcd basis(n * n, n);
    DenseMatrix power = DenseMatrix::Identity(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        basis.col(j) = Eigen::Map<const Eigen::VectorXcd>(power.data(), n * n);
        power = p * power;
    }
    const Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(t.data(), n * n);
    const Eigen::VectorXcd c = basis.colPivHouseholderQr().solve(rhs);
    DenseMatrix out = DenseMatrix::Zero(n, n);
    power = DenseMatrix::Identity(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        out += c[j] * power;
        power = p * power;
    }
    return out;
}

std::vector<cplx> sorted_values(std::vector<cplx> v) {
    std::sort(v.begin(), v.end(), bts::lex_less);
    return v;
}

}  // namespace

TEST(BuildToeplitz, SecondDifferenceStencil) {
    const DenseMatrix t = bts::build_toeplitz(exact_series({-1.0, 2.0, -1.0}), 3);
    EXPECT_EQ(t, tridiag(3, -1, 2, -1));
    EXPECT_TRUE(bts::is_real(t));
}

TEST(BuildToeplitz, PaperDiagonalSymbol) {
    DenseMatrix expected(2, 2);
    expected << 3.0, -2.0, -2.0, 3.0;
    EXPECT_EQ(bts::build_toeplitz(exact_series({-2.0, 3.0, -2.0}), 2), expected);
    EXPECT_EQ(bts::build_toeplitz(bts::parse_symbol("3-4*cos(t)"), 2), expected);
}

TEST(BuildToeplitz, ClosedFormEigenvalues) {
    const DenseMatrix t = bts::build_toeplitz(exact_series({-1.0, 2.0, -1.0}), 4);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(t);
    for (int j = 1; j <= 4; ++j)
        EXPECT_NEAR(solver.eigenvalues()[j - 1], 2.0 - 2.0 * std::cos(j * kPi / 5.0), 1e-10);
}

TEST(BuildToeplitz, EntryConvention) {
    // t_{i-j}: the subdiagonal carries lag +1.
    const DenseMatrix t = bts::build_toeplitz(exact_series({cplx(0, 5), 1.0, cplx(0, 7)}), 3);
    EXPECT_EQ(t(1, 0), cplx(0, 7));
    EXPECT_EQ(t(0, 1), cplx(0, 5));
    EXPECT_FALSE(bts::is_real(t));
}

TEST(BuildToeplitz, InsufficientMaxlagForQuadratureSeries) {
    const auto s = bts::fourier_coefficients(bts::parse_symbol("abs(t)"), 2);
    EXPECT_THROW(bts::build_toeplitz(s, 5), bts::ValidationError);
    EXPECT_NO_THROW(bts::build_toeplitz(s, 3));
}

TEST(BuildToeplitz, ExactSeriesIsBandedByDegree) {
    const DenseMatrix t = bts::build_toeplitz(bts::parse_symbol("4-cos(t)-2*cos(2*t)"), 8);
    for (Eigen::Index i = 0; i < 8; ++i)
        for (Eigen::Index j = 0; j < 8; ++j)
            if (std::abs(i - j) > 2) EXPECT_EQ(t(i, j), cplx(0.0, 0.0));
    EXPECT_EQ(t(2, 0), cplx(-1.0, 0.0));
}

TEST(BuildToeplitz, RealSymbolGivesHermitianMatrix) {
    for (const char* text : {"t-5", "t*ind(0,pi)", "sqrt(abs(t))", "t^2+1"}) {
        const DenseMatrix t = bts::build_toeplitz(bts::parse_symbol(text), 32);
        EXPECT_TRUE(bts::is_hermitian(t, 1e-12)) << text;
    }
}

TEST(OptimalCirculant, SecondDifferenceN4) {
    const DenseMatrix c = bts::optimal_circulant(tridiag(4, -1, 2, -1));
    const std::vector<double> row{2.0, -0.75, 0.0, -0.75};
    for (Eigen::Index j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(c(0, j) - row[static_cast<std::size_t>(j)]), 0.0, 1e-15);
    EXPECT_TRUE(bts::is_circulant(c));
    const DenseMatrix oracle = least_squares_circulant(tridiag(4, -1, 2, -1));
    EXPECT_LE((c - oracle).norm(), 1e-12);
}

TEST(OptimalCirculant, MatchesLeastSquaresOnRandomMatrices) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 1 + trial % 7;
        DenseMatrix t(n, n);
        std::normal_distribution<double> g;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) t(i, j) = cplx(g(rng), g(rng));
        EXPECT_LE((bts::optimal_circulant(t) - least_squares_circulant(t)).norm(), 1e-10) << n;
    }
}

TEST(OptimalCirculant, ColumnFormulaForToeplitzInput) {
    const std::size_t n = 9;
    const auto series = bts::fourier_coefficients(bts::parse_symbol("t-5"), n - 1);
    const DenseMatrix c = bts::optimal_circulant(bts::build_toeplitz(series, n));
    for (std::size_t j = 0; j < n; ++j) {
        const cplx tj = series.at(static_cast<long>(j));
        const cplx tjn = j == 0 ? cplx(0, 0) : series.at(static_cast<long>(j) - static_cast<long>(n));
        const cplx expected = (static_cast<double>(n - j) * tj + static_cast<double>(j) * tjn) / static_cast<double>(n);
        EXPECT_NEAR(std::abs(c(static_cast<Eigen::Index>(j), 0) - expected), 0.0, 1e-14) << j;
    }
}

TEST(OptimalCirculant, IdempotentAndTrivialCases) {
    const DenseMatrix c = bts::circulant_from_column({1.0, cplx(2, 1), 3.0, cplx(2, -1)});
    EXPECT_LE((bts::optimal_circulant(c) - c).norm(), 1e-15);
    DenseMatrix five(1, 1);
    five(0, 0) = 5.0;
    EXPECT_EQ(bts::optimal_circulant(five), five);
    EXPECT_THROW(bts::optimal_circulant(DenseMatrix(2, 3)), bts::ValidationError);
}

TEST(OptimalCirculant, HermitianPreserved) {
    const DenseMatrix t = bts::build_toeplitz(bts::parse_symbol("t-5"), 17);
    const DenseMatrix c = bts::optimal_circulant(t);
    EXPECT_EQ((c - c.adjoint()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(OptimalCirculant, PerturbationOptimality) {
    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    const char* symbols[] = {"t-5", "t^2+1", "3-4*cos(t)", "sqrt(abs(t))", "t*ind(0,pi)"};
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 4 + static_cast<std::size_t>(trial % 13);
        const DenseMatrix t = bts::build_toeplitz(bts::parse_symbol(symbols[trial % 5]), n);
        const DenseMatrix c = bts::optimal_circulant(t);
        std::vector<cplx> column(n);
        for (auto& v : column) v = cplx(g(rng), g(rng));
        DenseMatrix delta = bts::circulant_from_column(column);
        delta *= 1e-3 / delta.norm();
        EXPECT_GE((t - (c + delta)).norm(), (t - c).norm() - 1e-12) << trial;
    }
}

TEST(OptimalCirculant, PositiveSymbolsStayPositive) {
    for (const char* text : {"4-cos(t)-2*cos(2*t)", "t^2+1", "1", "t+4"}) {
        const auto e = bts::parse_symbol(text);
        if (!(bts::essinf_probe(e, 4096).min > 0.0)) continue;
        for (std::size_t n : {16u, 64u, 256u, 512u}) {
            const DenseMatrix c = bts::optimal_circulant(bts::build_toeplitz(e, n));
            Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(c, Eigen::EigenvaluesOnly);
            EXPECT_GE(solver.eigenvalues().minCoeff(), -1e-10) << text << " n=" << n;
        }
    }
}

TEST(OptimalCirculant, ScaledResidualDecreasesForContinuousSymbols) {
    for (const char* text : {"3-4*cos(t)", "4-cos(t)-2*cos(2*t)", "t^2+1", "-t^4", "2-2*cos(t)", "t^2", "abs(t)",
                             "sqrt(abs(t))"}) {
        const auto e = bts::parse_symbol(text);
        double previous = INFINITY;
        for (std::size_t n : {32u, 64u, 128u, 256u, 512u}) {
            const DenseMatrix t = bts::build_toeplitz(e, n);
            const double scaled = (t - bts::optimal_circulant(t)).norm() / std::sqrt(static_cast<double>(n));
            EXPECT_LT(scaled, previous) << text << " n=" << n;
            previous = scaled;
        }
    }
}

TEST(SymbolSampledCirculant, EigenvaluesAreSymbolSamples) {
    const auto e = bts::parse_symbol("t^2+1");
    const std::size_t n = 8;
    const DenseMatrix c = bts::symbol_sampled_circulant(e, n);
    EXPECT_TRUE(bts::is_circulant(c));
    std::vector<double> expected;
    for (std::size_t j = 0; j < n; ++j) {
        double theta = 2 * kPi * static_cast<double>(j) / static_cast<double>(n);
        if (theta > kPi) theta -= 2 * kPi;
        expected.push_back(bts::eval_symbol(e, theta));
    }
    std::sort(expected.begin(), expected.end());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(c, Eigen::EigenvaluesOnly);
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(solver.eigenvalues()[static_cast<Eigen::Index>(j)], expected[j], 1e-12);
}

TEST(CirculantStrategy, Parsing) {
    EXPECT_EQ(bts::parse_circulant_strategy("optimal"), bts::CirculantStrategy::optimal);
    EXPECT_EQ(bts::parse_circulant_strategy("symbol-sampled"), bts::CirculantStrategy::symbol_sampled);
    EXPECT_EQ(bts::parse_circulant_strategy("symbol_sampled"), bts::CirculantStrategy::symbol_sampled);
    EXPECT_THROW(bts::parse_circulant_strategy("strang"), bts::ValidationError);
}

TEST(CirculantSpectrum, Identity) {
    const auto s = bts::circulant_spectrum(DenseMatrix::Identity(5, 5));
    for (const auto& v : s.values) EXPECT_NEAR(std::abs(v - cplx(1, 0)), 0.0, 1e-15);
}

TEST(CirculantSpectrum, CyclicShiftRootsOfUnity) {
    const auto s = sorted_values(bts::circulant_spectrum(cyclic_shift(4)).values);
    const auto expected = sorted_values({cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)});
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(s[i] - expected[i]), 0.0, 1e-14);
}

TEST(CirculantSpectrum, OptimalCirculantOfSecondDifference) {
    const auto s = bts::circulant_spectrum(bts::optimal_circulant(tridiag(4, -1, 2, -1)));
    std::vector<double> re;
    for (const auto& v : s.values) {
        EXPECT_NEAR(v.imag(), 0.0, 1e-14);
        re.push_back(v.real());
    }
    std::sort(re.begin(), re.end());
    const std::vector<double> expected{0.5, 2.0, 2.0, 3.5};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(re[i], expected[i], 1e-14);
    // Independent oracle: dense eigensolve of the same circulant.
    const auto dense = bts::eig_general(bts::optimal_circulant(tridiag(4, -1, 2, -1))).sorted_real_parts();
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(dense[i], expected[i], 1e-12);
}

TEST(CirculantSpectrum, AgreesWithDenseEigensolver) {
    const DenseMatrix c = bts::optimal_circulant(bts::build_toeplitz(bts::parse_symbol("t-5"), 12));
    const auto fast = sorted_values(bts::circulant_spectrum(c).values);
    const auto dense = sorted_values(bts::eig_general(c).values);
    for (std::size_t i = 0; i < fast.size(); ++i) EXPECT_NEAR(std::abs(fast[i] - dense[i]), 0.0, 1e-10);
}

TEST(CirculantSpectrum, RejectsNonCirculant) {
    EXPECT_THROW(bts::circulant_spectrum(tridiag(4, -1, 2, -1)), bts::ValidationError);
}
