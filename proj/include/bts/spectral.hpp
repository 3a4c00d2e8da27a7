#pragma once

// Eigenvalues and singular values of dense matrices, sampled symbol spectra,
// and comparisons between empirical and symbol-predicted distributions.

#include <bts/block.hpp>
#include <bts/dense.hpp>
#include <bts/error.hpp>
#include <bts/fourier.hpp>
#include <bts/spectrum.hpp>
#include <bts/trend.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace bts {

/// Largest matrix order the dense eigensolvers accept.
inline constexpr Eigen::Index kMaxDenseOrder = 8192;

namespace detail {

inline void require_square(const DenseMatrix& a, const char* who) {
    if (a.rows() != a.cols()) throw ValidationError(std::string(who) + ": matrix is not square");
    if (a.rows() > kMaxDenseOrder)
        throw ValidationError(std::string(who) + ": order " + std::to_string(a.rows()) + " exceeds " +
                              std::to_string(kMaxDenseOrder));
}

}  // namespace detail

/// All eigenvalues of a square matrix. Real input goes through the real
/// Hessenberg-QR solver, complex input through the complex Schur solver.
inline Spectrum eig_general(const DenseMatrix& a, SpectrumSource source = {}) {
    detail::require_square(a, "eig_general");
    Spectrum s{{}, SpectrumKind::eigenvalues, std::move(source)};
    if (a.rows() == 0) return s;
    if (is_real(a)) {
        Eigen::EigenSolver<Eigen::MatrixXd> solver(a.real(), false);
        if (solver.info() != Eigen::Success) throw NumericalError("eig_general: QR iteration did not converge");
        const auto& ev = solver.eigenvalues();
        s.values.assign(ev.data(), ev.data() + ev.size());
    } else {
        Eigen::ComplexEigenSolver<DenseMatrix> solver(a, false);
        if (solver.info() != Eigen::Success) throw NumericalError("eig_general: QR iteration did not converge");
        const auto& ev = solver.eigenvalues();
        s.values.assign(ev.data(), ev.data() + ev.size());
    }
    return s;
}

/// Eigenvalues of a Hermitian matrix, ascending.
inline Spectrum eig_hermitian(const DenseMatrix& a, SpectrumSource source = {}) {
    detail::require_square(a, "eig_hermitian");
    Spectrum s{{}, SpectrumKind::eigenvalues, std::move(source)};
    if (a.rows() == 0) return s;
    if (a.cwiseAbs().maxCoeff() > 0.0 && (a - a.adjoint()).norm() > 1e-10 * a.norm())
        throw ValidationError("eig_hermitian: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(hermitize(a), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("eig_hermitian: solver did not converge");
    const auto& ev = solver.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) s.values.emplace_back(ev[i], 0.0);
    return s;
}

/// Singular values, descending.
inline Spectrum singular_values(const DenseMatrix& a, SpectrumSource source = {}) {
    detail::require_square(a, "singular_values");
    Spectrum s{{}, SpectrumKind::singular_values, std::move(source)};
    const Eigen::VectorXd sv = singular_value_vector(a);
    for (Eigen::Index i = 0; i < sv.size(); ++i) s.values.emplace_back(sv[i], 0.0);
    std::sort(s.values.begin(), s.values.end(), [](const cplx& x, const cplx& y) { return x.real() > y.real(); });
    return s;
}

/// Eigenvalues of a small real matrix (a symbol matrix F(theta)).
inline std::vector<cplx> small_eigenvalues(const Eigen::MatrixXd& f, bool symmetric) {
    std::vector<cplx> out;
    if (symmetric) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(f, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < f.rows(); ++i) out.emplace_back(solver.eigenvalues()[i], 0.0);
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> solver(f, false);
        if (solver.info() != Eigen::Success) throw NumericalError("symbol eigensolve did not converge");
        for (Eigen::Index i = 0; i < f.rows(); ++i) out.push_back(solver.eigenvalues()[i]);
    }
    return out;
}

/// The k * gridsize eigenvalues of F(theta_m) over the midpoint grid of
/// [-pi, pi], sorted by (Re, Im).
inline Spectrum sample_symbol_spectrum(const BlockSymbol& symbol, std::size_t gridsize,
                                       SymbolVariant variant = SymbolVariant::plain) {
    if (gridsize < 1) throw ValidationError("sample_symbol_spectrum: gridsize must be >= 1");
    Spectrum s{{}, SpectrumKind::eigenvalues, {gridsize, symbol.k(), "symbol"}};
    s.values.reserve(gridsize * symbol.k());
    for (double theta : midpoint_grid(gridsize)) {
        const Eigen::MatrixXd f = symbol_matrix(symbol, theta, variant);
        const auto ev = small_eigenvalues(f, variant == SymbolVariant::symmetrized);
        s.values.insert(s.values.end(), ev.begin(), ev.end());
    }
    std::sort(s.values.begin(), s.values.end(), lex_less);
    return s;
}

struct DistributionComparison {
    double sup_sorted_gap = 0.0;
    double wasserstein1 = 0.0;
    double empirical_max_abs_imag = 0.0;
    double reference_max_abs_imag = 0.0;
};

/// Value of the ascending sequence `sorted` at fractional index `position`.
inline double interpolate_sorted(const std::vector<double>& sorted, double position) {
    if (sorted.size() == 1) return sorted.front();
    const double clamped = std::clamp(position, 0.0, static_cast<double>(sorted.size() - 1));
    const auto lo = static_cast<std::size_t>(std::floor(clamped));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double w = clamped - static_cast<double>(lo);
    return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

/// Sorted-quantile comparison of real parts. When the cardinalities differ
/// the reference is resampled at the empirical size by linear interpolation
/// in sorted index.
inline DistributionComparison compare_distributions(const Spectrum& empirical, const Spectrum& reference) {
    if (empirical.empty() || reference.empty()) throw ValidationError("compare_distributions: empty spectrum");
    const std::vector<double> a = empirical.sorted_real_parts();
    std::vector<double> b = reference.sorted_real_parts();
    if (b.size() != a.size()) {
        std::vector<double> resampled(a.size());
        const double last = static_cast<double>(b.size() - 1);
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double position =
                a.size() == 1 ? 0.5 * last : last * static_cast<double>(i) / static_cast<double>(a.size() - 1);
            resampled[i] = interpolate_sorted(b, position);
        }
        b = std::move(resampled);
    }
    DistributionComparison c;
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double gap = std::abs(a[i] - b[i]);
        c.sup_sorted_gap = std::max(c.sup_sorted_gap, gap);
        total += gap;
    }
    c.wasserstein1 = total / static_cast<double>(a.size());
    c.empirical_max_abs_imag = empirical.max_abs_imag();
    c.reference_max_abs_imag = reference.max_abs_imag();
    return c;
}

enum class TestFamily { gaussian_bump, poly_window };

/// Compactly supported continuous test function.
class TestFunction {
public:
    /// exp(-((x - center) / width)^2) cut off at |x - center| > 6 width, where
    /// the untruncated value is below 1e-15.
    static TestFunction gaussian_bump(double center, double width) {
        if (!(width > 0.0)) throw ValidationError("gaussian_bump: width must be positive");
        return TestFunction(TestFamily::gaussian_bump, center, width, 0, center - 6.0 * width,
                            center + 6.0 * width);
    }

    /// ((x - lo)(hi - x))^degree normalized to peak 1 on [lo, hi], zero outside.
    static TestFunction poly_window(int degree, double lo, double hi) {
        if (degree < 1) throw ValidationError("poly_window: degree must be >= 1");
        if (!(lo < hi)) throw ValidationError("poly_window: expected lo < hi");
        return TestFunction(TestFamily::poly_window, 0.5 * (lo + hi), 0.5 * (hi - lo), degree, lo, hi);
    }

    TestFamily family() const noexcept { return family_; }
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

    double operator()(double x) const {
        if (x < lo_ || x > hi_) return 0.0;
        if (family_ == TestFamily::gaussian_bump) {
            const double z = (x - center_) / width_;
            return std::exp(-z * z);
        }
        const double u = (x - lo_) * (hi_ - x) / (width_ * width_);
        return std::pow(u, degree_);
    }

private:
    TestFunction(TestFamily family, double center, double width, int degree, double lo, double hi)
        : family_(family), center_(center), width_(width), degree_(degree), lo_(lo), hi_(hi) {}

    TestFamily family_;
    double center_;
    double width_;
    int degree_;
    double lo_;
    double hi_;
};

/// |(1/kn) sum_i F(Re lambda_i) - (1/2pi) int (1/k) sum_j F(lambda_j(F(theta))) dtheta|,
/// the integral by the midpoint rule at `quadrature_points`.
inline double distribution_residual(const Spectrum& spectrum, const BlockSymbol& symbol, const TestFunction& test,
                                    std::size_t quadrature_points) {
    if (spectrum.empty()) throw ValidationError("distribution_residual: empty spectrum");
    double empirical = 0.0;
    for (const auto& v : spectrum.values) empirical += test(v.real());
    empirical /= static_cast<double>(spectrum.size());

    const Spectrum reference = sample_symbol_spectrum(symbol, quadrature_points, SymbolVariant::plain);
    double integral = 0.0;
    for (const auto& v : reference.values) integral += test(v.real());
    integral /= static_cast<double>(reference.size());
    return std::abs(empirical - integral);
}

/// Frobenius norms scaled by 1/sqrt(order) for a growing list of matrices.
struct ZeroTrend {
    std::vector<std::size_t> orders;
    std::vector<double> scaled_norms;
    Verdict verdict = Verdict::decreasing;
    /// Every norm at roundoff level; the verdict is then vacuous.
    bool exact = false;
};

inline ZeroTrend zero_distribution_trend(const std::vector<DenseMatrix>& matrices) {
    if (matrices.size() < 2) throw ValidationError("zero_distribution_trend: need at least 2 matrices");
    ZeroTrend t;
    bool exact = true;
    for (std::size_t i = 0; i < matrices.size(); ++i) {
        const auto& m = matrices[i];
        if (m.rows() != m.cols() || m.rows() == 0)
            throw ValidationError("zero_distribution_trend: matrices must be square and nonempty");
        if (i > 0 && m.rows() <= static_cast<Eigen::Index>(t.orders.back()))
            throw ValidationError("zero_distribution_trend: orders must increase");
        const double norm = m.norm();
        t.orders.push_back(static_cast<std::size_t>(m.rows()));
        t.scaled_norms.push_back(norm / std::sqrt(static_cast<double>(m.rows())));
        if (norm > kExactZeroRelative) exact = false;
    }
    t.exact = exact;
    t.verdict = exact ? Verdict::decreasing : classify_sequence(t.scaled_norms);
    return t;
}

}  // namespace bts
