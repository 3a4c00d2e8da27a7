#pragma once

// Fourier coefficients t_k = (1/2pi) * integral f(theta) exp(-i k theta) dtheta
// of a scalar symbol, plus a grid probe of its essential range.

#include <bts/error.hpp>
#include <bts/symbol.hpp>

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace bts {

using cplx = std::complex<double>;

/// Default number of midpoint samples for the quadrature path.
inline constexpr std::size_t kDefaultQuadratureResolution = std::size_t{1} << 14;

/// Coefficients t_k for k in [-maxlag, maxlag].
class FourierSeries {
public:
    FourierSeries(std::vector<cplx> coefficients, std::size_t maxlag, bool exact, std::size_t resolution)
        : coefficients_(std::move(coefficients)), maxlag_(maxlag), exact_(exact), resolution_(resolution) {
        if (coefficients_.size() != 2 * maxlag_ + 1)
            throw ValidationError("FourierSeries: coefficient count does not match maxlag");
    }

    std::size_t maxlag() const noexcept { return maxlag_; }
    /// True when the coefficients come from the analytic trig-polynomial path.
    bool exact() const noexcept { return exact_; }
    /// Number of quadrature samples used, 0 on the analytic path.
    std::size_t resolution() const noexcept { return resolution_; }

    /// t_k; lags beyond maxlag are zero for exact series and an error otherwise.
    cplx at(long lag) const {
        const auto magnitude = static_cast<std::size_t>(lag < 0 ? -lag : lag);
        if (magnitude > maxlag_) {
            if (exact_) return {0.0, 0.0};
            throw ValidationError("lag " + std::to_string(lag) + " beyond maxlag " +
                                  std::to_string(maxlag_) + " of a quadrature series");
        }
        return coefficients_[static_cast<std::size_t>(lag + static_cast<long>(maxlag_))];
    }

    cplx operator[](long lag) const { return at(lag); }

private:
    std::vector<cplx> coefficients_;
    std::size_t maxlag_;
    bool exact_;
    std::size_t resolution_;
};

/// Points -pi + (m + 1/2) * 2pi / count, m = 0..count-1.
inline std::vector<double> midpoint_grid(std::size_t count) {
    std::vector<double> grid(count);
    const double h = 2.0 * std::numbers::pi / static_cast<double>(count);
    for (std::size_t m = 0; m < count; ++m)
        grid[m] = -std::numbers::pi + (static_cast<double>(m) + 0.5) * h;
    return grid;
}

/// Exact coefficients of a Sum/Scale combination of Const, Cos and Sin nodes,
/// nullopt when the expression is anything else.
inline std::optional<std::map<long, cplx>> trig_polynomial_coefficients(const SymbolExpr& e) {
    using Coeffs = std::map<long, cplx>;
    if (auto c = e.constant_value()) return Coeffs{{0, cplx(*c, 0.0)}};
    if (const auto* c = e.as<expr::Cos>()) return Coeffs{{-c->harmonic, 0.5}, {c->harmonic, 0.5}};
    if (const auto* s = e.as<expr::Sin>())
        return Coeffs{{-s->harmonic, cplx(0.0, 0.5)}, {s->harmonic, cplx(0.0, -0.5)}};
    if (const auto* s = e.as<expr::Scale>()) {
        auto inner = trig_polynomial_coefficients(s->child);
        if (!inner) return std::nullopt;
        for (auto& [lag, v] : *inner) v *= s->factor;
        return inner;
    }
    if (const auto* s = e.as<expr::Sum>()) {
        Coeffs total;
        for (const auto& term : s->terms) {
            auto inner = trig_polynomial_coefficients(term);
            if (!inner) return std::nullopt;
            for (const auto& [lag, v] : *inner) total[lag] += v;
        }
        return total;
    }
    return std::nullopt;
}

/// Smallest admissible power-of-two resolution for a given maxlag.
inline std::size_t quadrature_resolution_for(std::size_t maxlag,
                                             std::size_t requested = kDefaultQuadratureResolution) {
    const std::size_t floor = std::bit_ceil(std::max<std::size_t>(4 * maxlag, 4));
    return std::max(std::bit_ceil(std::max<std::size_t>(requested, 4)), floor);
}

/// Fourier coefficients up to maxlag. Trig polynomials take the exact path;
/// everything else is sampled at `resolution` midpoints and transformed.
inline FourierSeries fourier_coefficients(const SymbolExpr& e, std::size_t maxlag,
                                          std::size_t resolution = kDefaultQuadratureResolution) {
    if (auto poly = trig_polynomial_coefficients(e)) {
        std::vector<cplx> coeffs(2 * maxlag + 1, cplx(0.0, 0.0));
        for (const auto& [lag, v] : *poly) {
            const auto magnitude = static_cast<std::size_t>(lag < 0 ? -lag : lag);
            if (magnitude <= maxlag) coeffs[static_cast<std::size_t>(lag + static_cast<long>(maxlag))] = v;
        }
        return FourierSeries(std::move(coeffs), maxlag, true, 0);
    }

    if (!std::has_single_bit(resolution) || resolution < 4 * maxlag || resolution < 4)
        throw ValidationError("quadrature resolution " + std::to_string(resolution) +
                              " must be a power of two >= 4*maxlag (maxlag=" + std::to_string(maxlag) +
                              ")");

    const auto grid = midpoint_grid(resolution);
    std::vector<double> samples(resolution);
    for (std::size_t m = 0; m < resolution; ++m) samples[m] = eval_symbol(e, grid[m]);

    Eigen::FFT<double> fft;
    std::vector<cplx> spectrum;
    fft.fwd(spectrum, samples);

    // sum_m f(theta_m) e^{-ik theta_m} = e^{-ik theta_0} * DFT_k with theta_0 = -pi + h/2.
    const double h = 2.0 * std::numbers::pi / static_cast<double>(resolution);
    const double theta0 = -std::numbers::pi + 0.5 * h;
    const double inv_r = 1.0 / static_cast<double>(resolution);
    std::vector<cplx> coeffs(2 * maxlag + 1);
    for (std::size_t k = 0; k <= maxlag; ++k) {
        const cplx phase = std::polar(1.0, -static_cast<double>(k) * theta0);
        const cplx tk = phase * spectrum[k] * inv_r;
        // Real symbol: t_{-k} = conj(t_k) exactly.
        coeffs[maxlag + k] = tk;
        coeffs[maxlag - k] = std::conj(tk);
    }
    coeffs[maxlag] = cplx(coeffs[maxlag].real(), 0.0);
    return FourierSeries(std::move(coeffs), maxlag, false, resolution);
}

struct RangeProbe {
    double min;
    double max;
};

/// Min and max of f over a uniform midpoint grid together with its nodes
/// -pi + 2 pi j / gridsize (which include 0 and +-pi for even sizes, where
/// symbol zeros typically sit). A heuristic witness for essinf/esssup, not a
/// bound.
inline RangeProbe essinf_probe(const SymbolExpr& e, std::size_t gridsize) {
    if (gridsize < 2) throw ValidationError("essinf_probe: gridsize must be >= 2");
    RangeProbe probe{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    auto visit = [&](double theta) {
        const double v = eval_symbol(e, theta);
        probe.min = std::min(probe.min, v);
        probe.max = std::max(probe.max, v);
    };
    for (double theta : midpoint_grid(gridsize)) visit(theta);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(gridsize);
    for (std::size_t j = 0; j <= gridsize; ++j)
        visit(j == gridsize ? std::numbers::pi : -std::numbers::pi + step * static_cast<double>(j));
    return probe;
}

/// Heuristic: no indicator and matching endpoint values, i.e. continuous as a
/// 2pi-periodic function for the expressions the grammar can build.
inline bool is_periodic_continuous(const SymbolExpr& e) {
    if (has_indicator(e)) return false;
    const double left = eval_symbol(e, -std::numbers::pi);
    const double right = eval_symbol(e, std::numbers::pi);
    return std::abs(left - right) <= 1e-12 * std::max(1.0, std::abs(left));
}

}  // namespace bts
