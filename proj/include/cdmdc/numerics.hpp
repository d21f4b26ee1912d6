/*
 Copyright 2026 The cdmdc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

// Dense linear-algebra kernels shared by every decomposition in the library.
// SVD and eigen-solvers are backed by Eigen; this header fixes the conventions
// (rank truncation, eigenvector phase, spectrum ordering) on top of them.

#include "cdmdc/types.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace cdmdc {

/// Relative singular-value cutoff used for every rank decision.
inline constexpr double kRankTolerance = 1e-12;

/// Rank-r factorization M ~ U diag(S) V^T.
struct TruncatedSvd {
    RealMatrix U;  ///< rows(M) x rank, orthonormal columns
    RealVector S;  ///< nonincreasing, strictly positive
    RealMatrix V;  ///< cols(M) x rank, orthonormal columns
    Index requested_rank = 0;

    Index rank() const { return S.size(); }
    bool truncated() const { return rank() < requested_rank; }
    RealMatrix reconstruct() const { return U * S.asDiagonal() * V.transpose(); }
};

namespace detail {

// Thin SVD of a matrix with rows >= cols. Tall inputs are reduced with a
// Householder QR first so the SVD itself only sees a cols x cols factor.
inline void thin_svd_tall(const RealMatrix& M, Index keep, RealMatrix& U, RealVector& S, RealMatrix& V) {
    const Index n = M.rows();
    const Index m = M.cols();
    if (n > m + m / 2) {
        Eigen::HouseholderQR<RealMatrix> qr(M);
        RealMatrix R = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
        Eigen::BDCSVD<RealMatrix> svd(R, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Index k = std::min(keep, m);
        U = RealMatrix::Zero(n, k);
        U.topRows(m) = svd.matrixU().leftCols(k);
        U.applyOnTheLeft(qr.householderQ());
        S = svd.singularValues().head(k);
        V = svd.matrixV().leftCols(k);
    } else {
        Eigen::BDCSVD<RealMatrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Index k = std::min(keep, m);
        U = svd.matrixU().leftCols(k);
        S = svd.singularValues().head(k);
        V = svd.matrixV().leftCols(k);
    }
}

}  // namespace detail

/// Best rank-r approximation of M. Singular values below rel_tol * sigma_1
/// are dropped, so the returned rank may be smaller than r (see truncated()).
inline TruncatedSvd truncated_svd(const RealMatrix& M, Index r, double rel_tol = kRankTolerance) {
    detail::require(M.rows() >= 1 && M.cols() >= 1, "truncated_svd: empty matrix");
    detail::require(r >= 1 && r <= std::min(M.rows(), M.cols()),
                    "truncated_svd: rank " + std::to_string(r) + " out of range for " +
                        detail::shape(M.rows(), M.cols()) + " matrix");
    detail::require_finite(M, "truncated_svd");

    TruncatedSvd out;
    out.requested_rank = r;
    RealMatrix U, V;
    RealVector S;
    if (M.rows() >= M.cols()) {
        detail::thin_svd_tall(M, r, U, S, V);
    } else {
        detail::thin_svd_tall(M.transpose(), r, V, S, U);
    }

    Index keep = 0;
    const double cutoff = S.size() > 0 ? rel_tol * S(0) : 0.0;
    while (keep < S.size() && S(keep) > cutoff && S(keep) > 0.0) ++keep;
    out.U = U.leftCols(keep);
    out.S = S.head(keep);
    out.V = V.leftCols(keep);
    return out;
}

/// All singular values of M, nonincreasing.
inline RealVector singular_values(const RealMatrix& M) {
    detail::require_finite(M, "singular_values");
    Eigen::BDCSVD<RealMatrix> svd(M);
    return svd.singularValues();
}

/// Number of singular values above rel_tol * sigma_1.
inline Index numerical_rank(const RealMatrix& M, double rel_tol = kRankTolerance) {
    if (M.size() == 0) return 0;
    const RealVector s = singular_values(M);
    if (s.size() == 0 || s(0) == 0.0) return 0;
    Index k = 0;
    while (k < s.size() && s(k) > rel_tol * s(0)) ++k;
    return k;
}

/// Smallest rank whose squared singular values reach `fraction` of the total.
inline Index energy_rank(const RealVector& s, double fraction = 0.99) {
    detail::require(fraction > 0.0 && fraction <= 1.0, "energy_rank: fraction must lie in (0, 1]");
    const double total = s.squaredNorm();
    if (total == 0.0) return 0;
    double acc = 0.0;
    for (Index k = 0; k < s.size(); ++k) {
        acc += s(k) * s(k);
        if (acc >= fraction * total * (1.0 - 1e-15)) return k + 1;
    }
    return s.size();
}

/// Moore-Penrose pseudoinverse via SVD; singular values below
/// rel_tol * sigma_1 are treated as zero. The zero matrix maps to zero.
inline RealMatrix pseudoinverse(const RealMatrix& M, double rel_tol = kRankTolerance) {
    detail::require_finite(M, "pseudoinverse");
    if (M.size() == 0 || M.isZero(0.0)) return RealMatrix::Zero(M.cols(), M.rows());
    const auto svd = truncated_svd(M, std::min(M.rows(), M.cols()), rel_tol);
    return svd.V * svd.S.cwiseInverse().asDiagonal() * svd.U.transpose();
}

// ---------------------------------------------------------------------------
// Eigendecomposition

struct EigenDecomposition {
    ComplexMatrix vectors;  ///< unit-norm columns, largest-modulus entry real positive
    ComplexVector values;   ///< ordered, see spectrum_order()
};

/// Scales v to unit norm and rotates its phase so that its largest-modulus
/// entry is real and positive. Zero vectors are left untouched.
template <typename Derived>
void normalize_phase(Eigen::MatrixBase<Derived>&& v) {
    const double nrm = v.norm();
    if (nrm == 0.0) return;
    v /= nrm;
    double best = 0.0;
    for (Index i = 0; i < v.size(); ++i) best = std::max(best, std::abs(v(i)));
    Index pivot = 0;
    for (Index i = 0; i < v.size(); ++i) {
        // first entry within rounding of the maximum, so ties resolve by index
        if (std::abs(v(i)) >= best * (1.0 - 1e-12)) {
            pivot = i;
            break;
        }
    }
    const Complex p = v(pivot);
    v *= std::conj(p) / std::abs(p);
}

template <typename Derived>
void normalize_phase(Eigen::MatrixBase<Derived>& v) {
    normalize_phase(std::move(v));
}

/// Applies normalize_phase to every column.
inline void normalize_columns(ComplexMatrix& M) {
    for (Index j = 0; j < M.cols(); ++j) normalize_phase(M.col(j));
}

/// Sort order for a discrete spectrum: descending real part of the
/// continuous eigenvalue ln(lambda)/dt, ties by ascending |Im|, then positive
/// imaginary part first. Since dt > 0 only scales both parts, the order is
/// independent of dt: it is descending |lambda|, then ascending |arg lambda|.
inline std::vector<Index> spectrum_order(const ComplexVector& lambda) {
    std::vector<Index> idx(static_cast<std::size_t>(lambda.size()));
    std::iota(idx.begin(), idx.end(), Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
        const double ma = std::abs(lambda(a)), mb = std::abs(lambda(b));
        if (ma != mb) return ma > mb;
        const double pa = ma == 0.0 ? 0.0 : std::arg(lambda(a));
        const double pb = mb == 0.0 ? 0.0 : std::arg(lambda(b));
        if (std::abs(pa) != std::abs(pb)) return std::abs(pa) < std::abs(pb);
        return pa > pb;
    });
    return idx;
}

namespace detail {

inline EigenDecomposition finish_eig(ComplexMatrix W, const ComplexVector& values) {
    normalize_columns(W);
    const auto order = spectrum_order(values);
    EigenDecomposition out;
    out.vectors.resize(W.rows(), W.cols());
    out.values.resize(values.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        out.vectors.col(static_cast<Index>(k)) = W.col(order[k]);
        out.values(static_cast<Index>(k)) = values(order[k]);
    }
    return out;
}

}  // namespace detail

/// Eigendecomposition of a real square matrix.
inline EigenDecomposition eig(const RealMatrix& A) {
    detail::require(A.rows() == A.cols(), "eig: matrix must be square, got " + detail::shape(A.rows(), A.cols()));
    detail::require_finite(A, "eig");
    if (A.rows() == 0) return {};
    Eigen::EigenSolver<RealMatrix> es(A, true);
    if (es.info() != Eigen::Success) throw NumericalError("eig: eigen-solver did not converge");
    return detail::finish_eig(es.eigenvectors(), es.eigenvalues());
}

/// Eigendecomposition of a complex square matrix.
inline EigenDecomposition eig(const ComplexMatrix& A) {
    detail::require(A.rows() == A.cols(), "eig: matrix must be square, got " + detail::shape(A.rows(), A.cols()));
    detail::require_finite(A, "eig");
    if (A.rows() == 0) return {};
    Eigen::ComplexEigenSolver<ComplexMatrix> es(A, true);
    if (es.info() != Eigen::Success) throw NumericalError("eig: eigen-solver did not converge");
    return detail::finish_eig(es.eigenvectors(), es.eigenvalues());
}

// ---------------------------------------------------------------------------
// Orthonormal DCT-II

/// Column k of the orthonormal DCT-II synthesis matrix of size n.
inline RealVector dct_column(Index n, Index k) {
    detail::require(n >= 1, "dct_column: n must be positive");
    detail::require(k >= 0 && k < n, "dct_column: wavenumber out of range");
    const double scale = k == 0 ? std::sqrt(1.0 / static_cast<double>(n)) : std::sqrt(2.0 / static_cast<double>(n));
    RealVector c(n);
    const double w = std::numbers::pi * static_cast<double>(k) / (2.0 * static_cast<double>(n));
    for (Index i = 0; i < n; ++i) c(i) = scale * std::cos(w * static_cast<double>(2 * i + 1));
    return c;
}

/// Orthonormal DCT-II synthesis matrix Psi (n x n); column j is the j-th
/// cosine mode and Psi^T Psi = I.
inline RealMatrix dct_basis(Index n) {
    detail::require(n >= 1, "dct_basis: n must be positive");
    RealMatrix psi(n, n);
    for (Index j = 0; j < n; ++j) psi.col(j) = dct_column(n, j);
    return psi;
}

}  // namespace cdmdc
