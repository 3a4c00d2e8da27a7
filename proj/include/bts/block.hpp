#pragma once

// Block matrices with Toeplitz blocks: the assembled matrix A_n, the
// block-diagonal symmetrizer E_n, the Hermitian target, the block
// interleaving permutation, and the k x k symbol matrices.

#include <bts/dense.hpp>
#include <bts/error.hpp>
#include <bts/fourier.hpp>
#include <bts/matrix_functions.hpp>
#include <bts/structured.hpp>
#include <bts/symbol.hpp>

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bts {

enum class BlockLayout { tridiagonal, full };

inline std::string_view to_string(BlockLayout layout) {
    return layout == BlockLayout::tridiagonal ? "tridiagonal" : "full";
}

/// k x k grid of optional scalar symbols; an absent entry is a zero block.
class BlockSymbol {
public:
    BlockSymbol(std::size_t k, BlockLayout layout) : k_(k), layout_(layout), entries_(k * k) {
        if (k == 0) throw ValidationError("BlockSymbol: k must be positive", "/k");
    }

    std::size_t k() const noexcept { return k_; }
    BlockLayout layout() const noexcept { return layout_; }

    /// Sets entry (i, j), zero-based.
    void set(std::size_t i, std::size_t j, SymbolExpr symbol) {
        check_index(i, j);
        if (layout_ == BlockLayout::tridiagonal && (i > j + 1 || j > i + 1))
            throw ValidationError("tridiagonal layout rejects block (" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + ")");
        entries_[i * k_ + j] = std::move(symbol);
    }

    void set(std::size_t i, std::size_t j, std::string_view text) { set(i, j, parse_symbol(text)); }

    const std::optional<SymbolExpr>& at(std::size_t i, std::size_t j) const {
        check_index(i, j);
        return entries_[i * k_ + j];
    }

    bool present(std::size_t i, std::size_t j) const { return at(i, j).has_value(); }

    /// f_{i,j}(theta), zero for absent entries.
    double eval(std::size_t i, std::size_t j, double theta) const {
        const auto& e = at(i, j);
        return e ? eval_symbol(*e, theta) : 0.0;
    }

    /// True when f_{i,i+1} and f_{i+1,i} are both present for every i.
    bool off_diagonal_pairs_complete() const {
        for (std::size_t i = 0; i + 1 < k_; ++i)
            if (!present(i, i + 1) || !present(i + 1, i)) return false;
        return true;
    }

private:
    void check_index(std::size_t i, std::size_t j) const {
        if (i >= k_ || j >= k_)
            throw ValidationError("block index (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                  ") outside 1.." + std::to_string(k_));
    }

    std::size_t k_;
    BlockLayout layout_;
    std::vector<std::optional<SymbolExpr>> entries_;
};

/// The Toeplitz blocks T_n(f_{i,j}) of one matrix of the sequence.
struct BlockToeplitz {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<std::optional<DenseMatrix>> blocks;

    const std::optional<DenseMatrix>& block(std::size_t i, std::size_t j) const { return blocks[i * k + j]; }

    DenseMatrix block_or_zero(std::size_t i, std::size_t j) const {
        const auto& b = block(i, j);
        return b ? *b : DenseMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    }
};

inline BlockToeplitz build_blocks(const BlockSymbol& symbol, std::size_t n,
                                  std::size_t resolution = kDefaultQuadratureResolution) {
    if (n == 0) throw ValidationError("n must be positive");
    BlockToeplitz out{n, symbol.k(), std::vector<std::optional<DenseMatrix>>(symbol.k() * symbol.k())};
    for (std::size_t i = 0; i < symbol.k(); ++i)
        for (std::size_t j = 0; j < symbol.k(); ++j)
            if (const auto& e = symbol.at(i, j)) out.blocks[i * symbol.k() + j] = build_toeplitz(*e, n, resolution);
    return out;
}

/// The kn x kn matrix with block (i, j) = T_n(f_{i,j}).
inline DenseMatrix assemble(const BlockToeplitz& blocks) {
    const auto n = static_cast<Eigen::Index>(blocks.n);
    const auto k = static_cast<Eigen::Index>(blocks.k);
    DenseMatrix a = DenseMatrix::Zero(k * n, k * n);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            if (const auto& b = blocks.block(static_cast<std::size_t>(i), static_cast<std::size_t>(j)))
                a.block(i * n, j * n, n, n) = *b;
    return a;
}

inline DenseMatrix assemble(const BlockSymbol& symbol, std::size_t n,
                            std::size_t resolution = kDefaultQuadratureResolution) {
    return assemble(build_blocks(symbol, n, resolution));
}

/// Block-diagonal E = diag(E_1..E_k) with E_1 = I and
/// E_j = E_{j-1} G(B_{j-1}^{-1}, C_{j-1}), where B_j = T_n(f_{j+1,j}) and
/// C_j = T_n(f_{j,j+1}). The inverse is accumulated from inverted factors.
struct Symmetrizer {
    std::vector<DenseMatrix> blocks;
    std::vector<DenseMatrix> inverse_blocks;

    DenseMatrix dense() const { return block_diagonal(blocks); }
    DenseMatrix dense_inverse() const { return block_diagonal(inverse_blocks); }
};

namespace detail {

inline void require_symmetrizable(const BlockToeplitz& blocks) {
    for (std::size_t j = 0; j + 1 < blocks.k; ++j)
        if (!blocks.block(j, j + 1) || !blocks.block(j + 1, j))
            throw ValidationError("off-diagonal pair (" + std::to_string(j + 1) + "," + std::to_string(j + 2) +
                                  ") must be present on both sides");
}

inline void require_tridiagonal(const BlockSymbol& symbol) {
    if (symbol.layout() != BlockLayout::tridiagonal)
        throw ValidationError("symmetrization requires the tridiagonal layout", "/layout");
}

template <class F>
auto with_block_context(std::size_t j, F&& f) {
    try {
        return f();
    } catch (const NotHpdError& e) {
        throw NotHpdError("block pair (" + std::to_string(j + 1) + "," + std::to_string(j + 2) + "): " + e.what(),
                          e.min_eigenvalue());
    }
}

}  // namespace detail

inline Symmetrizer build_symmetrizer(const BlockToeplitz& blocks, ClampLog* log = nullptr) {
    detail::require_symmetrizable(blocks);
    const auto n = static_cast<Eigen::Index>(blocks.n);
    Symmetrizer s;
    s.blocks.push_back(identity(n));
    s.inverse_blocks.push_back(identity(n));
    for (std::size_t j = 0; j + 1 < blocks.k; ++j) {
        const DenseMatrix& b = *blocks.block(j + 1, j);
        const DenseMatrix& c = *blocks.block(j, j + 1);
        detail::with_block_context(j, [&] {
            const DenseMatrix factor = geometric_mean(hpd_power(b, -1.0, log), c, log);
            const DenseMatrix inverse_factor = hpd_power(factor, -1.0, log);
            s.blocks.push_back(s.blocks.back() * factor);
            s.inverse_blocks.push_back(inverse_factor * s.inverse_blocks.back());
            return 0;
        });
    }
    return s;
}

inline Symmetrizer build_symmetrizer(const BlockSymbol& symbol, std::size_t n,
                                     std::size_t resolution = kDefaultQuadratureResolution,
                                     ClampLog* log = nullptr) {
    detail::require_tridiagonal(symbol);
    return build_symmetrizer(build_blocks(symbol, n, resolution), log);
}

/// Hermitian block-tridiagonal matrix with diagonal T_n(f_{j,j}) and both
/// off-diagonals G(B_j, C_j).
inline DenseMatrix build_target(const BlockToeplitz& blocks, ClampLog* log = nullptr) {
    detail::require_symmetrizable(blocks);
    const auto n = static_cast<Eigen::Index>(blocks.n);
    const auto k = blocks.k;
    DenseMatrix target = DenseMatrix::Zero(static_cast<Eigen::Index>(k) * n, static_cast<Eigen::Index>(k) * n);
    for (std::size_t j = 0; j < k; ++j) {
        const auto off = static_cast<Eigen::Index>(j) * n;
        if (const auto& d = blocks.block(j, j)) target.block(off, off, n, n) = *d;
        if (j + 1 < k) {
            const DenseMatrix g = detail::with_block_context(
                j, [&] { return geometric_mean(*blocks.block(j + 1, j), *blocks.block(j, j + 1), log); });
            target.block(off + n, off, n, n) = g;
            target.block(off, off + n, n, n) = g;
        }
    }
    return hermitize(target);
}

inline DenseMatrix build_target(const BlockSymbol& symbol, std::size_t n,
                                std::size_t resolution = kDefaultQuadratureResolution, ClampLog* log = nullptr) {
    detail::require_tridiagonal(symbol);
    return build_target(build_blocks(symbol, n, resolution), log);
}

/// Options for build_bundle; the optional members are skipped when false.
struct BundleOptions {
    std::size_t resolution = kDefaultQuadratureResolution;
    CirculantStrategy circulant = CirculantStrategy::optimal;
    bool symmetrizer = false;
    bool target = false;
    bool permutation = false;
};

/// A_n and the derived objects of one n, with the numerical settings used.
struct AssemblyBundle {
    std::size_t n = 0;
    std::size_t k = 0;
    DenseMatrix matrix;
    std::optional<Symmetrizer> symmetrizer;
    std::optional<DenseMatrix> target;
    std::optional<DenseMatrix> permutation;
    std::vector<std::string> symbol_texts;
    CirculantStrategy circulant = CirculantStrategy::optimal;
    std::size_t resolution = kDefaultQuadratureResolution;
    ClampLog clamp;
};

inline DenseMatrix shuffle_permutation(std::size_t n, std::size_t k);

inline AssemblyBundle build_bundle(const BlockSymbol& symbol, std::size_t n, const BundleOptions& options = {}) {
    AssemblyBundle bundle;
    bundle.n = n;
    bundle.k = symbol.k();
    bundle.circulant = options.circulant;
    bundle.resolution = options.resolution;
    for (std::size_t i = 0; i < symbol.k(); ++i)
        for (std::size_t j = 0; j < symbol.k(); ++j)
            if (const auto& e = symbol.at(i, j))
                bundle.symbol_texts.push_back("f" + std::to_string(i + 1) + std::to_string(j + 1) + " = " +
                                              print_symbol(*e));
    const BlockToeplitz blocks = build_blocks(symbol, n, options.resolution);
    bundle.matrix = assemble(blocks);
    if (options.symmetrizer || options.target) detail::require_tridiagonal(symbol);
    if (options.symmetrizer) bundle.symmetrizer = build_symmetrizer(blocks, &bundle.clamp);
    if (options.target) bundle.target = build_target(blocks, &bundle.clamp);
    if (options.permutation) bundle.permutation = shuffle_permutation(n, symbol.k());
    return bundle;
}

/// destination[block-ordered index j*n + i] = interleaved index i*k + j (zero-based).
inline std::vector<std::size_t> shuffle_indices(std::size_t n, std::size_t k) {
    std::vector<std::size_t> destination(n * k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i) destination[j * n + i] = i * k + j;
    return destination;
}

/// Permutation matrix P with (P x)[i*k + j] = x[j*n + i].
inline DenseMatrix shuffle_permutation(std::size_t n, std::size_t k) {
    if (n == 0 || k == 0) throw ValidationError("shuffle_permutation: n and k must be positive");
    const auto destination = shuffle_indices(n, k);
    const auto order = static_cast<Eigen::Index>(n * k);
    DenseMatrix p = DenseMatrix::Zero(order, order);
    for (std::size_t src = 0; src < destination.size(); ++src)
        p(static_cast<Eigen::Index>(destination[src]), static_cast<Eigen::Index>(src)) = 1.0;
    return p;
}

enum class SymbolVariant { plain, symmetrized };

/// F(theta) (plain) or its symmetric companion with off-diagonals
/// sqrt(f_{i,i+1} f_{i+1,i}) (symmetrized).
inline Eigen::MatrixXd symbol_matrix(const BlockSymbol& symbol, double theta, SymbolVariant variant) {
    const auto k = symbol.k();
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    if (variant == SymbolVariant::plain) {
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = symbol.eval(i, j, theta);
        return f;
    }
    detail::require_tridiagonal(symbol);
    for (std::size_t i = 0; i < k; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        f(ii, ii) = symbol.eval(i, i, theta);
        if (i + 1 < k) {
            const double product = symbol.eval(i, i + 1, theta) * symbol.eval(i + 1, i, theta);
            if (product < 0.0)
                throw EvaluationError("symmetrized symbol undefined: f(" + std::to_string(i + 1) + "," +
                                      std::to_string(i + 2) + ") * f(" + std::to_string(i + 2) + "," +
                                      std::to_string(i + 1) + ") < 0 at theta=" + std::to_string(theta));
            f(ii, ii + 1) = f(ii + 1, ii) = std::sqrt(product);
        }
    }
    return f;
}

/// Outcome of the cycle-product check on the block sparsity graph.
struct CycleReport {
    bool holds = true;
    /// f_{i,j} present iff f_{j,i} present.
    bool structurally_symmetric = true;
    double worst_theta = 0.0;
    double worst_gap = 0.0;
    std::size_t cycles_checked = 0;
};

inline constexpr std::size_t kMaxCycleBlocks = 6;

/// Simple cycles (as vertex sequences, each undirected cycle once) of the
/// graph with an edge i-j whenever both f_{i,j} and f_{j,i} are present.
inline std::vector<std::vector<std::size_t>> enumerate_cycles(const BlockSymbol& symbol) {
    const auto k = symbol.k();
    auto edge = [&](std::size_t a, std::size_t b) { return a != b && symbol.present(a, b) && symbol.present(b, a); };
    std::vector<std::vector<std::size_t>> cycles;
    std::vector<std::size_t> path;
    std::vector<bool> on_path(k, false);
    std::function<void(std::size_t)> extend = [&](std::size_t v) {
        for (std::size_t w = 0; w < k; ++w) {
            if (!edge(v, w)) continue;
            if (w == path.front()) {
                if (path.size() == 2 || (path.size() > 2 && path[1] < path.back())) cycles.push_back(path);
            } else if (w > path.front() && !on_path[w]) {
                path.push_back(w);
                on_path[w] = true;
                extend(w);
                on_path[w] = false;
                path.pop_back();
            }
        }
    };
    for (std::size_t s = 0; s < k; ++s) {
        path = {s};
        on_path.assign(k, false);
        on_path[s] = true;
        extend(s);
    }
    return cycles;
}

/// Checks prod f_{i_l,i_{l+1}} = prod f_{i_{l+1},i_l} over every cycle on a
/// uniform midpoint grid.
inline CycleReport check_cycle_condition(const BlockSymbol& symbol, std::size_t gridsize, double tol) {
    if (symbol.k() > kMaxCycleBlocks)
        throw ValidationError("cycle enumeration supports k <= " + std::to_string(kMaxCycleBlocks), "/k");
    if (gridsize < 2) throw ValidationError("check_cycle_condition: gridsize must be >= 2");
    CycleReport report;
    for (std::size_t i = 0; i < symbol.k(); ++i)
        for (std::size_t j = 0; j < symbol.k(); ++j)
            if (symbol.present(i, j) != symbol.present(j, i)) report.structurally_symmetric = false;

    const auto cycles = enumerate_cycles(symbol);
    report.cycles_checked = cycles.size();
    for (double theta : midpoint_grid(gridsize)) {
        for (const auto& cycle : cycles) {
            double forward = 1.0;
            double backward = 1.0;
            for (std::size_t l = 0; l < cycle.size(); ++l) {
                const std::size_t a = cycle[l];
                const std::size_t b = cycle[(l + 1) % cycle.size()];
                forward *= symbol.eval(a, b, theta);
                backward *= symbol.eval(b, a, theta);
            }
            const double gap = std::abs(forward - backward);
            if (gap > report.worst_gap) {
                report.worst_gap = gap;
                report.worst_theta = theta;
            }
        }
    }
    report.holds = report.structurally_symmetric && report.worst_gap <= tol;
    return report;
}

}  // namespace bts
