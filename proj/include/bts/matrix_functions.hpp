#pragma once

// Functions of Hermitian positive definite matrices through a full
// eigendecomposition, the two-matrix geometric mean, and matrix norms.

#include <bts/dense.hpp>
#include <bts/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

namespace bts {

/// Eigenvalues in [-lower * |A|, floor * |A|] are lifted to floor * |A|;
/// anything below -lower * |A| means the input is not HPD.
struct ClampPolicy {
    double lower_relative = 1e-10;
    double floor_relative = 1e-12;
};

inline constexpr ClampPolicy kDefaultClampPolicy{};

/// Running tally of clamped eigenvalues, owned by the caller.
struct ClampLog {
    std::size_t clamped_eigenvalues = 0;
    std::size_t factorizations = 0;
};

/// A = Q diag(lambda) Q* with all lambda > 0 after clamping.
struct HpdFactorization {
    Eigen::VectorXd eigenvalues;
    DenseMatrix eigenvectors;
    std::size_t clamped = 0;

    Eigen::Index order() const { return eigenvalues.size(); }

    /// Q diag(lambda^p) Q*, re-Hermitized.
    DenseMatrix power(double p) const {
        const Eigen::VectorXd scaled = eigenvalues.array().pow(p).matrix();
        DenseMatrix m = eigenvectors * scaled.asDiagonal() * eigenvectors.adjoint();
        return hermitize(m);
    }

    DenseMatrix reconstruct() const { return power(1.0); }
};

inline HpdFactorization hpd_factorize(const DenseMatrix& a, ClampLog* log = nullptr,
                                      const ClampPolicy& policy = kDefaultClampPolicy) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw ValidationError("hpd_factorize: expected a nonempty square matrix");
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(hermitize(a));
    if (solver.info() != Eigen::Success) throw NumericalError("hpd_factorize: eigensolver did not converge");

    HpdFactorization f{solver.eigenvalues(), solver.eigenvectors(), 0};
    const double scale = f.eigenvalues.cwiseAbs().maxCoeff();
    const double min_eig = f.eigenvalues.minCoeff();
    if (scale == 0.0) throw NotHpdError("matrix is zero", 0.0);
    if (min_eig < -policy.lower_relative * scale)
        throw NotHpdError("matrix is not positive definite (min eigenvalue " + std::to_string(min_eig) +
                              ", norm " + std::to_string(scale) + ")",
                          min_eig);
    const double floor = policy.floor_relative * scale;
    for (Eigen::Index i = 0; i < f.eigenvalues.size(); ++i) {
        if (f.eigenvalues[i] < floor) {
            f.eigenvalues[i] = floor;
            ++f.clamped;
        }
    }
    if (log) {
        log->clamped_eigenvalues += f.clamped;
        ++log->factorizations;
    }
    return f;
}

/// A^p for Hermitian A under the clamp policy.
inline DenseMatrix hpd_power(const DenseMatrix& a, double p, ClampLog* log = nullptr) {
    return hpd_factorize(a, log).power(p);
}

/// G(A, B) = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}.
inline DenseMatrix geometric_mean(const DenseMatrix& a, const DenseMatrix& b, ClampLog* log = nullptr) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError("geometric_mean: shape mismatch");
    HpdFactorization fa = [&] {
        try {
            return hpd_factorize(a, log);
        } catch (const NotHpdError& e) {
            throw NotHpdError(std::string("geometric_mean, first argument: ") + e.what(), e.min_eigenvalue());
        }
    }();
    const DenseMatrix root = fa.power(0.5);
    const DenseMatrix inv_root = fa.power(-0.5);
    const DenseMatrix inner = hermitize(inv_root * b * inv_root);
    DenseMatrix inner_root = [&] {
        try {
            return hpd_power(inner, 0.5, log);
        } catch (const NotHpdError& e) {
            throw NotHpdError(std::string("geometric_mean, second argument: ") + e.what(), e.min_eigenvalue());
        }
    }();
    return hermitize(root * inner_root * root);
}

enum class NormKind { frobenius, spectral, schatten };

/// Norm selector; `p` is only read for schatten.
struct Norm {
    NormKind kind = NormKind::frobenius;
    double p = 2.0;

    static constexpr Norm frobenius() { return {NormKind::frobenius, 2.0}; }
    static constexpr Norm spectral() { return {NormKind::spectral, 0.0}; }
    static constexpr Norm schatten(double p) { return {NormKind::schatten, p}; }
};

inline Eigen::VectorXd singular_value_vector(const DenseMatrix& a) {
    if (a.size() == 0) return {};
    Eigen::BDCSVD<DenseMatrix> svd(a);
    return svd.singularValues();
}

inline double norm(const DenseMatrix& a, Norm kind = Norm::frobenius()) {
    switch (kind.kind) {
        case NormKind::frobenius:
            return a.norm();
        case NormKind::spectral: {
            const Eigen::VectorXd s = singular_value_vector(a);
            return s.size() ? s.maxCoeff() : 0.0;
        }
        case NormKind::schatten: {
            if (!(kind.p >= 1.0)) throw ValidationError("schatten norm requires p >= 1");
            const Eigen::VectorXd s = singular_value_vector(a);
            if (std::isinf(kind.p)) return s.size() ? s.maxCoeff() : 0.0;
            return std::pow(s.array().pow(kind.p).sum(), 1.0 / kind.p);
        }
    }
    return 0.0;
}

/// Spectral norm of a Hermitian matrix from its eigenvalues.
inline double hermitian_spectral_norm(const DenseMatrix& a) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(hermitize(a), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace bts
