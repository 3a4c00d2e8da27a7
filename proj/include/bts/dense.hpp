#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>

namespace bts {

using cplx = std::complex<double>;

/// Square dense matrix carrier. Real matrices are stored with zero imaginary
/// parts; is_real() recovers the scalar kind.
using DenseMatrix = Eigen::MatrixXcd;

inline double max_abs(const DenseMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline bool is_real(const DenseMatrix& a) {
    return a.size() == 0 || a.imag().cwiseAbs().maxCoeff() == 0.0;
}

/// max|A - A*| <= tol * max|A|.
inline bool is_hermitian(const DenseMatrix& a, double tol = 1e-12) {
    if (a.rows() != a.cols()) return false;
    return max_abs(a - a.adjoint()) <= tol * max_abs(a);
}

/// (A + A*) / 2.
inline DenseMatrix hermitize(const DenseMatrix& a) { return (a + a.adjoint()) * 0.5; }

inline DenseMatrix identity(Eigen::Index n) { return DenseMatrix::Identity(n, n); }

/// Copies a block-diagonal list into one dense matrix.
template <class Blocks>
DenseMatrix block_diagonal(const Blocks& blocks) {
    Eigen::Index total = 0;
    for (const auto& b : blocks) total += b.rows();
    DenseMatrix out = DenseMatrix::Zero(total, total);
    Eigen::Index offset = 0;
    for (const auto& b : blocks) {
        out.block(offset, offset, b.rows(), b.cols()) = b;
        offset += b.rows();
    }
    return out;
}

}  // namespace bts
