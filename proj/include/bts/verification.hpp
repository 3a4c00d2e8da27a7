#pragma once

// Residual sweeps over n for the circulant, geometric-mean and
// symmetrization approximations, plus the imaginary-part decay table.
//
// A claim of the form ||X_n - Y_n||_F = o(sqrt(n)) cannot be checked from
// finitely many n. Every sweep reports the sqrt(n)-scaled residuals, a
// strict-decrease verdict, and the log-log slope of the raw residuals.

#include <bts/block.hpp>
#include <bts/dense.hpp>
#include <bts/error.hpp>
#include <bts/fourier.hpp>
#include <bts/matrix_functions.hpp>
#include <bts/spectral.hpp>
#include <bts/structured.hpp>
#include <bts/symbol.hpp>
#include <bts/trend.hpp>

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bts {

inline constexpr std::string_view kTrendProxyNote =
    "o(sqrt(n)) proxy: strict decrease of residual/sqrt(n) over the n list, with log-log slope of the raw residual";

/// Frobenius residual norms of the diagonal, sub- and super-diagonal blocks.
struct BlockBreakdown {
    double diagonal = 0.0;
    double sub = 0.0;
    double super = 0.0;
};

struct TrendReport {
    std::string claim;
    std::vector<std::size_t> n_values;
    std::vector<double> residuals;
    std::vector<double> scaled_residuals;
    Verdict verdict = Verdict::decreasing;
    std::optional<double> slope;
    /// All residuals at roundoff level relative to the matrices involved.
    bool exact = false;
    /// False when the verdict is informational only (e.g. jump symbols).
    bool assessed = true;
    /// False when the run is outside the hypothesis of the claim.
    bool hypothesis_satisfied = true;
    std::string note{kTrendProxyNote};
    std::vector<BlockBreakdown> breakdown;
    std::size_t clamped_eigenvalues = 0;
};

struct VerifyOptions {
    std::size_t resolution = kDefaultQuadratureResolution;
    CirculantStrategy strategy = CirculantStrategy::optimal;
    /// Grid used for essinf/esssup probes of hypotheses.
    std::size_t probe_gridsize = 4096;
};

enum class GeomeanMode { plain, inverse_first };

inline std::string_view to_string(GeomeanMode m) { return m == GeomeanMode::plain ? "plain" : "inverse_first"; }

namespace detail {

inline void require_sweep(const std::vector<std::size_t>& n_list) {
    if (n_list.size() < 3) throw ValidationError("sweep needs at least 3 values of n", "/n_list");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1) throw ValidationError("n must be positive", "/n_list");
        if (i > 0 && n_list[i] <= n_list[i - 1]) throw ValidationError("n list must be ascending", "/n_list");
    }
}

inline void require_positive(const SymbolExpr& e, std::string_view label, std::size_t gridsize) {
    const RangeProbe probe = essinf_probe(e, gridsize);
    if (!(probe.min > 0.0))
        throw HypothesisError(std::string(label) + " = " + print_symbol(e) + " has grid essinf " +
                              std::to_string(probe.min) + " <= 0; the claim requires essinf > 0 and does not apply");
}

/// Builds the report; `scales` are per-n magnitudes of the compared matrices.
inline TrendReport finish_report(std::string claim, const std::vector<std::size_t>& n_list,
                                 std::vector<double> residuals, const std::vector<double>& scales) {
    TrendReport r;
    r.claim = std::move(claim);
    r.n_values = n_list;
    r.residuals = std::move(residuals);
    bool exact = true;
    std::vector<double> xs;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        r.scaled_residuals.push_back(r.residuals[i] / std::sqrt(static_cast<double>(n_list[i])));
        if (r.residuals[i] > kExactZeroRelative * std::max(1.0, scales[i])) exact = false;
        xs.push_back(static_cast<double>(n_list[i]));
    }
    r.exact = exact;
    r.verdict = exact ? Verdict::decreasing : classify_sequence(r.scaled_residuals);
    if (!exact) r.slope = loglog_slope(xs, r.residuals);
    if (exact) r.note += "; exact-zero regime, verdict vacuous";
    return r;
}

struct ToeplitzCirculant {
    DenseMatrix t;
    DenseMatrix c;
};

inline ToeplitzCirculant toeplitz_and_circulant(const SymbolExpr& f, std::size_t n, const VerifyOptions& opt) {
    DenseMatrix t = build_toeplitz(f, n, opt.resolution);
    DenseMatrix c = build_circulant(f, t, opt.strategy);
    return {std::move(t), std::move(c)};
}

inline DenseMatrix geomean_mode(const DenseMatrix& a, const DenseMatrix& b, GeomeanMode mode, ClampLog* log) {
    if (mode == GeomeanMode::plain) return geometric_mean(a, b, log);
    return geometric_mean(hpd_power(a, -1.0, log), b, log);
}

}  // namespace detail

/// ||T_n(f) - C_n(f)||_F per n. Symbols that are not continuous as periodic
/// functions are reported without an assessed verdict.
inline TrendReport verify_circulant_approx(const SymbolExpr& f, const std::vector<std::size_t>& n_list,
                                           const VerifyOptions& opt = {}) {
    detail::require_sweep(n_list);
    std::vector<double> residuals, scales;
    for (std::size_t n : n_list) {
        const auto tc = detail::toeplitz_and_circulant(f, n, opt);
        residuals.push_back((tc.t - tc.c).norm());
        scales.push_back(tc.t.norm());
    }
    TrendReport r = detail::finish_report("circ", n_list, std::move(residuals), scales);
    if (!is_periodic_continuous(f)) {
        r.assessed = false;
        r.note += "; symbol has a jump, trend reported without a verdict";
    }
    return r;
}

/// ||G(T_n(f), T_n(g)) - G(C_n(f), C_n(g))||_F (plain) or the same with the
/// first arguments inverted (inverse_first).
inline TrendReport verify_geomean_circulant(const SymbolExpr& f, const SymbolExpr& g,
                                            const std::vector<std::size_t>& n_list, GeomeanMode mode,
                                            const VerifyOptions& opt = {}) {
    detail::require_sweep(n_list);
    detail::require_positive(f, "f", opt.probe_gridsize);
    detail::require_positive(g, "g", opt.probe_gridsize);
    ClampLog log;
    std::vector<double> residuals, scales;
    for (std::size_t n : n_list) {
        const auto f_tc = detail::toeplitz_and_circulant(f, n, opt);
        const auto g_tc = detail::toeplitz_and_circulant(g, n, opt);
        const DenseMatrix exact = detail::geomean_mode(f_tc.t, g_tc.t, mode, &log);
        const DenseMatrix approx = detail::geomean_mode(f_tc.c, g_tc.c, mode, &log);
        residuals.push_back((exact - approx).norm());
        scales.push_back(exact.norm());
    }
    TrendReport r = detail::finish_report(std::string("lemma2_") + std::string(to_string(mode)), n_list,
                                          std::move(residuals), scales);
    r.clamped_eigenvalues = log.clamped_eigenvalues;
    return r;
}

/// Ordered product of geometric means against its circulant counterpart.
inline TrendReport verify_geomean_product(const std::vector<std::pair<SymbolExpr, SymbolExpr>>& pairs,
                                          const std::vector<std::size_t>& n_list, GeomeanMode mode,
                                          const VerifyOptions& opt = {}) {
    if (pairs.empty() || pairs.size() > 4) throw ValidationError("verify_geomean_product: expected 1 to 4 pairs");
    detail::require_sweep(n_list);
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        detail::require_positive(pairs[j].first, "f_" + std::to_string(j + 1), opt.probe_gridsize);
        detail::require_positive(pairs[j].second, "g_" + std::to_string(j + 1), opt.probe_gridsize);
    }
    ClampLog log;
    std::vector<double> residuals, scales;
    for (std::size_t n : n_list) {
        DenseMatrix exact = identity(static_cast<Eigen::Index>(n));
        DenseMatrix approx = identity(static_cast<Eigen::Index>(n));
        for (const auto& [f, g] : pairs) {
            const auto f_tc = detail::toeplitz_and_circulant(f, n, opt);
            const auto g_tc = detail::toeplitz_and_circulant(g, n, opt);
            exact = exact * detail::geomean_mode(f_tc.t, g_tc.t, mode, &log);
            approx = approx * detail::geomean_mode(f_tc.c, g_tc.c, mode, &log);
        }
        residuals.push_back((exact - approx).norm());
        scales.push_back(exact.norm());
    }
    TrendReport r = detail::finish_report(std::string("cor1_") + std::string(to_string(mode)), n_list,
                                          std::move(residuals), scales);
    r.clamped_eigenvalues = log.clamped_eigenvalues;
    return r;
}

/// ||G(T_n(f), T_n(g)^{-1}) T_n(g) - G(T_n(f), T_n(g))||_F per n.
inline TrendReport verify_mixed_mean_identity(const SymbolExpr& f, const SymbolExpr& g,
                                              const std::vector<std::size_t>& n_list,
                                              const VerifyOptions& opt = {}) {
    detail::require_sweep(n_list);
    detail::require_positive(f, "f", opt.probe_gridsize);
    detail::require_positive(g, "g", opt.probe_gridsize);
    ClampLog log;
    std::vector<double> residuals, scales;
    for (std::size_t n : n_list) {
        const DenseMatrix tf = build_toeplitz(f, n, opt.resolution);
        const DenseMatrix tg = build_toeplitz(g, n, opt.resolution);
        const DenseMatrix mixed = geometric_mean(tf, hpd_power(tg, -1.0, &log), &log) * tg;
        const DenseMatrix direct = geometric_mean(tf, tg, &log);
        residuals.push_back((mixed - direct).norm());
        scales.push_back(direct.norm());
    }
    TrendReport r = detail::finish_report("lemma3", n_list, std::move(residuals), scales);
    r.clamped_eigenvalues = log.clamped_eigenvalues;
    return r;
}

/// True when every off-diagonal symbol has a positive grid essinf.
inline bool symmetrization_hypothesis_holds(const BlockSymbol& symbol, std::size_t gridsize) {
    for (std::size_t j = 0; j + 1 < symbol.k(); ++j)
        for (const auto& e : {symbol.at(j, j + 1), symbol.at(j + 1, j)})
            if (!e || !(essinf_probe(*e, gridsize).min > 0.0)) return false;
    return true;
}

/// Residual blocks of E A E^{-1} - A_hat for a tridiagonal block symbol.
inline BlockBreakdown symmetrization_residual(const BlockToeplitz& blocks, ClampLog* log = nullptr) {
    const Symmetrizer s = build_symmetrizer(blocks, log);
    const auto& e = s.blocks;
    const auto& einv = s.inverse_blocks;
    double diag2 = 0.0, sub2 = 0.0, super2 = 0.0;
    for (std::size_t j = 0; j < blocks.k; ++j) {
        if (const auto& a = blocks.block(j, j)) diag2 += (e[j] * *a * einv[j] - *a).squaredNorm();
        if (j + 1 < blocks.k) {
            const DenseMatrix& b = *blocks.block(j + 1, j);
            const DenseMatrix& c = *blocks.block(j, j + 1);
            const DenseMatrix g = detail::with_block_context(j, [&] { return geometric_mean(b, c, log); });
            sub2 += (e[j + 1] * b * einv[j] - g).squaredNorm();
            super2 += (e[j] * c * einv[j + 1] - g).squaredNorm();
        }
    }
    return {std::sqrt(diag2), std::sqrt(sub2), std::sqrt(super2)};
}

/// ||E_n A_n E_n^{-1} - A_hat_n||_F per n with a per-block breakdown. Symbols
/// whose off-diagonals are not strictly positive still run under the clamp
/// policy and are labeled as outside the hypothesis.
inline TrendReport verify_symmetrization(const BlockSymbol& symbol, const std::vector<std::size_t>& n_list,
                                         const VerifyOptions& opt = {}) {
    detail::require_tridiagonal(symbol);
    detail::require_sweep(n_list);
    ClampLog log;
    std::vector<double> residuals, scales;
    std::vector<BlockBreakdown> breakdown;
    for (std::size_t n : n_list) {
        const BlockToeplitz blocks = build_blocks(symbol, n, opt.resolution);
        const BlockBreakdown b = symmetrization_residual(blocks, &log);
        breakdown.push_back(b);
        residuals.push_back(std::sqrt(b.diagonal * b.diagonal + b.sub * b.sub + b.super * b.super));
        scales.push_back(assemble(blocks).norm());
    }
    TrendReport r = detail::finish_report("thm1", n_list, std::move(residuals), scales);
    r.breakdown = std::move(breakdown);
    r.clamped_eigenvalues = log.clamped_eigenvalues;
    r.hypothesis_satisfied = symmetrization_hypothesis_holds(symbol, opt.probe_gridsize);
    if (!r.hypothesis_satisfied) r.note += "; outside the hypothesis (off-diagonal essinf <= 0), run under clamp policy";
    return r;
}

struct ImagTable {
    std::vector<std::size_t> n_values;
    std::vector<double> max_abs_imag;
    std::optional<double> slope;
    /// Every entry at roundoff level (e.g. Hermitian input); slope undefined.
    bool exact = false;
};

/// Imaginary parts at or below this are treated as eigensolver roundoff.
inline constexpr double kNegligibleImaginary = 1e-10;

/// max |Im lambda(A_n)| per n and the log-log slope of the column.
inline ImagTable table_imaginary_decay(const BlockSymbol& symbol, const std::vector<std::size_t>& n_list,
                                       std::size_t resolution = kDefaultQuadratureResolution) {
    if (n_list.empty()) throw ValidationError("n list must be nonempty", "/n_list");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1]) throw ValidationError("n list must be ascending", "/n_list");
    ImagTable table;
    std::vector<double> xs;
    bool exact = true;
    for (std::size_t n : n_list) {
        const Spectrum s = eig_general(assemble(symbol, n, resolution), {n, symbol.k(), "A_n"});
        table.n_values.push_back(n);
        table.max_abs_imag.push_back(s.max_abs_imag());
        xs.push_back(static_cast<double>(n));
        if (s.max_abs_imag() > kNegligibleImaginary) exact = false;
    }
    table.exact = exact;
    if (!exact) table.slope = loglog_slope(xs, table.max_abs_imag);
    return table;
}

/// Explicit constants bounding ||G(T_n(f), T_n(g))|| and
/// ||G(T_n(f)^{-1}, T_n(g))|| uniformly in n:
///   c1 = ||f||_inf ||g||_inf^{1/2} / essinf(f)^{1/2}
///   c2 = ||f||_inf^{1/2} ||g||_inf^{1/2} / essinf(f)
/// with the extrema probed on a grid.
struct GeomeanBounds {
    double c1 = 0.0;
    double c2 = 0.0;
};

inline GeomeanBounds geomean_norm_bounds(const SymbolExpr& f, const SymbolExpr& g, std::size_t gridsize = 4096) {
    detail::require_positive(f, "f", gridsize);
    detail::require_positive(g, "g", gridsize);
    const RangeProbe pf = essinf_probe(f, gridsize);
    const RangeProbe pg = essinf_probe(g, gridsize);
    const double f_sup = std::max(std::abs(pf.min), std::abs(pf.max));
    const double g_sup = std::max(std::abs(pg.min), std::abs(pg.max));
    return {f_sup * std::sqrt(g_sup) / std::sqrt(pf.min), std::sqrt(f_sup) * std::sqrt(g_sup) / pf.min};
}

/// Spectral norms of G(T_n(f), T_n(g)) and G(T_n(f)^{-1}, T_n(g)) per n.
struct GeomeanNorms {
    std::vector<std::size_t> n_values;
    std::vector<double> plain;
    std::vector<double> inverse_first;
};

inline GeomeanNorms geomean_norm_sweep(const SymbolExpr& f, const SymbolExpr& g,
                                       const std::vector<std::size_t>& n_list,
                                       std::size_t resolution = kDefaultQuadratureResolution) {
    GeomeanNorms out;
    for (std::size_t n : n_list) {
        const DenseMatrix tf = build_toeplitz(f, n, resolution);
        const DenseMatrix tg = build_toeplitz(g, n, resolution);
        out.n_values.push_back(n);
        out.plain.push_back(hermitian_spectral_norm(geometric_mean(tf, tg)));
        out.inverse_first.push_back(hermitian_spectral_norm(geometric_mean(hpd_power(tf, -1.0), tg)));
    }
    return out;
}

}  // namespace bts
