#pragma once

// Toeplitz matrices T_n(f) and circulant approximants C_n(f).

#include <bts/dense.hpp>
#include <bts/error.hpp>
#include <bts/fourier.hpp>
#include <bts/spectrum.hpp>
#include <bts/symbol.hpp>

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace bts {

/// Imaginary parts at or below this are treated as roundoff when building T_n.
inline constexpr double kImaginaryResidue = 1e-12;

/// T_n with entry (i, j) = t_{i-j}.
inline DenseMatrix build_toeplitz(const FourierSeries& series, std::size_t n) {
    if (n == 0) throw ValidationError("build_toeplitz: n must be positive");
    if (!series.exact() && series.maxlag() + 1 < n)
        throw ValidationError("build_toeplitz: maxlag " + std::to_string(series.maxlag()) +
                              " insufficient for n=" + std::to_string(n));

    const long order = static_cast<long>(n);
    std::vector<cplx> diag(2 * n - 1);
    bool real = true;
    for (long lag = -(order - 1); lag <= order - 1; ++lag) {
        const cplx v = series.at(lag);
        diag[static_cast<std::size_t>(lag + order - 1)] = v;
        if (std::abs(v.imag()) > kImaginaryResidue) real = false;
    }
    if (real)
        for (auto& v : diag) v = cplx(v.real(), 0.0);

    DenseMatrix t(order, order);
    for (long j = 0; j < order; ++j)
        for (long i = 0; i < order; ++i) t(i, j) = diag[static_cast<std::size_t>(i - j + order - 1)];
    return t;
}

/// T_n(f) straight from the symbol, with maxlag n-1.
inline DenseMatrix build_toeplitz(const SymbolExpr& symbol, std::size_t n,
                                  std::size_t resolution = kDefaultQuadratureResolution) {
    return build_toeplitz(fourier_coefficients(symbol, n - 1, quadrature_resolution_for(n - 1, resolution)), n);
}

/// Circulant with C(i, j) = c_{(i-j) mod n}.
inline DenseMatrix circulant_from_column(const std::vector<cplx>& column) {
    const auto n = static_cast<Eigen::Index>(column.size());
    DenseMatrix c(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) c(i, j) = column[static_cast<std::size_t>((i - j + n) % n)];
    return c;
}

/// The circulant closest to `t` in Frobenius norm: c_j is the mean of the
/// entries on the wrapped diagonal i - j = j (mod n). For Toeplitz input this
/// is c_j = ((n-j) t_j + j t_{j-n}) / n.
inline DenseMatrix optimal_circulant(const DenseMatrix& t) {
    if (t.rows() != t.cols() || t.rows() == 0)
        throw ValidationError("optimal_circulant: expected a nonempty square matrix");
    const Eigen::Index n = t.rows();
    std::vector<cplx> column(static_cast<std::size_t>(n), cplx(0.0, 0.0));
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) column[static_cast<std::size_t>((i - j + n) % n)] += t(i, j);
    for (auto& c : column) c /= static_cast<double>(n);

    if (is_hermitian(t, 1e-13)) {
        // Hermitian input: enforce c_{n-j} = conj(c_j) so the output is exactly Hermitian.
        column[0] = cplx(column[0].real(), 0.0);
        for (Eigen::Index j = 1; 2 * j <= n; ++j) {
            const auto a = static_cast<std::size_t>(j);
            const auto b = static_cast<std::size_t>(n - j);
            const cplx avg = 0.5 * (column[a] + std::conj(column[b]));
            column[a] = avg;
            column[b] = std::conj(avg);
        }
    }
    return circulant_from_column(column);
}

/// Circulant whose eigenvalues are the samples f(2 pi j / n), j = 0..n-1.
inline DenseMatrix symbol_sampled_circulant(const SymbolExpr& symbol, std::size_t n) {
    if (n == 0) throw ValidationError("symbol_sampled_circulant: n must be positive");
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> samples(n);
    for (std::size_t j = 0; j < n; ++j) {
        double theta = two_pi * static_cast<double>(j) / static_cast<double>(n);
        if (theta > std::numbers::pi) theta -= two_pi;
        samples[j] = eval_symbol(symbol, theta);
    }
    // c_m = (1/n) sum_j f(theta_j) e^{-i m theta_j}
    std::vector<cplx> column(n, cplx(0.0, 0.0));
    for (std::size_t m = 0; m < n; ++m) {
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            acc += samples[j] * std::polar(1.0, -two_pi * static_cast<double>((m * j) % n) / static_cast<double>(n));
        column[m] = acc / static_cast<double>(n);
    }
    column[0] = cplx(column[0].real(), 0.0);
    for (std::size_t m = 1; 2 * m <= n; ++m) {
        const cplx avg = 0.5 * (column[m] + std::conj(column[n - m]));
        column[m] = avg;
        column[n - m] = std::conj(avg);
    }
    return circulant_from_column(column);
}

enum class CirculantStrategy { optimal, symbol_sampled };

inline std::string_view to_string(CirculantStrategy s) {
    return s == CirculantStrategy::optimal ? "optimal" : "symbol-sampled";
}

inline CirculantStrategy parse_circulant_strategy(std::string_view text) {
    if (text == "optimal") return CirculantStrategy::optimal;
    if (text == "symbol-sampled" || text == "symbol_sampled") return CirculantStrategy::symbol_sampled;
    throw ValidationError("unknown circulant strategy '" + std::string(text) + "'", "/circulant");
}

/// C_n(f) for the chosen strategy; `toeplitz` must be T_n(f).
inline DenseMatrix build_circulant(const SymbolExpr& symbol, const DenseMatrix& toeplitz,
                                   CirculantStrategy strategy) {
    if (strategy == CirculantStrategy::optimal) return optimal_circulant(toeplitz);
    return symbol_sampled_circulant(symbol, static_cast<std::size_t>(toeplitz.rows()));
}

/// True when every entry matches the first column shifted, to tol * max(1, max|C|).
inline bool is_circulant(const DenseMatrix& c, double tol = 1e-12) {
    if (c.rows() != c.cols()) return false;
    const Eigen::Index n = c.rows();
    const double bound = tol * std::max(1.0, max_abs(c));
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            if (std::abs(c(i, j) - c((i - j + n) % n, 0)) > bound) return false;
    return true;
}

/// Eigenvalues of a circulant as the DFT of its first column.
inline Spectrum circulant_spectrum(const DenseMatrix& c) {
    if (!is_circulant(c)) throw ValidationError("circulant_spectrum: input is not circulant");
    const auto n = static_cast<std::size_t>(c.rows());
    std::vector<cplx> column(n);
    for (std::size_t i = 0; i < n; ++i) column[i] = c(static_cast<Eigen::Index>(i), 0);
    Spectrum s;
    s.kind = SpectrumKind::eigenvalues;
    s.source = {n, 1, "circulant"};
    if (n == 1) {
        s.values = column;
        return s;
    }
    Eigen::FFT<double> fft;
    fft.fwd(s.values, column);
    return s;
}

}  // namespace bts
