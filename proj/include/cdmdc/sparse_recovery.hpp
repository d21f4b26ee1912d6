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

// CoSaMP (compressive sampling matching pursuit, Needell & Tropp) for real
// and complex right-hand sides over a real sensing matrix Theta = C Psi.

#include "cdmdc/measurement.hpp"
#include "cdmdc/numerics.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace cdmdc {

struct SparseRecoveryConfig {
    Index sparsity = 4;           ///< K: maximum number of nonzero coefficients
    Index max_iterations = 10;
    double residual_tol = 1e-10;  ///< stop once ||y - Theta s|| <= residual_tol * ||y||
    double success_tol = 1e-6;    ///< relative residual above this is reported as a failed recovery

    void validate() const {
        detail::require(sparsity >= 1, "sparse recovery: sparsity K must be at least 1");
        detail::require(max_iterations >= 1, "sparse recovery: max_iterations must be at least 1");
        detail::require(residual_tol >= 0.0, "sparse recovery: residual_tol must be nonnegative");
    }
};

template <typename Scalar>
struct SparseSolution {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> coefficients;
    std::vector<Index> support;     ///< ascending
    double relative_residual = 0.0;  ///< ||y - Theta s|| / ||y|| (0 when y = 0)
    Index iterations = 0;
    bool success = true;  ///< relative_residual <= success_tol
    std::vector<std::string> warnings;
};

namespace detail {

// M v for a real matrix and a real or complex vector, without promoting M.
template <typename Derived, typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> real_times(const Eigen::MatrixBase<Derived>& M,
                                                    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v) {
    if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(M.rows());
        out.real() = M * v.real();
        out.imag() = M * v.imag();
        return out;
    } else {
        return M * v;
    }
}

// Indices of the k largest entries of `magnitude`, ties broken by lower
// index; returned in ascending index order.
inline std::vector<Index> largest_entries(const RealVector& magnitude, Index k) {
    std::vector<Index> idx(static_cast<std::size_t>(magnitude.size()));
    std::iota(idx.begin(), idx.end(), Index{0});
    k = std::min<Index>(k, magnitude.size());
    auto by_size = [&](Index a, Index b) {
        if (magnitude(a) != magnitude(b)) return magnitude(a) > magnitude(b);
        return a < b;
    };
    std::nth_element(idx.begin(), idx.begin() + k, idx.end(), by_size);
    idx.resize(static_cast<std::size_t>(k));
    std::sort(idx.begin(), idx.end());
    return idx;
}

template <typename Scalar>
struct SupportFit {
    std::vector<Index> support;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;  // one per support entry
    double residual = 0.0;
};

// Least squares of y on the columns of Theta listed in `support`.
template <typename Scalar>
SupportFit<Scalar> fit_support(const RealMatrix& theta, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y,
                               std::vector<Index> support) {
    SupportFit<Scalar> fit;
    fit.support = std::move(support);
    const auto k = static_cast<Index>(fit.support.size());
    RealMatrix sub(theta.rows(), k);
    for (Index j = 0; j < k; ++j) sub.col(j) = theta.col(fit.support[static_cast<std::size_t>(j)]);
    fit.values = real_times(pseudoinverse(sub), y);
    fit.residual = (y - real_times(sub, fit.values)).norm();
    return fit;
}

}  // namespace detail

/// Recovers a K-sparse s with y ~ Theta s.
///
/// Each iteration correlates the residual with Theta, merges the 2K largest
/// proxy entries with the current support, solves least squares there, prunes
/// to the K largest coefficients and re-solves on that K-support. Complex
/// right-hand sides select support on coefficient modulus. The loop is
/// warm-started from the one-step greedy estimate (K largest correlations)
/// and the best iterate seen is returned.
template <typename Scalar>
SparseSolution<Scalar> cosamp(const RealMatrix& theta, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y,
                              const SparseRecoveryConfig& cfg) {
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    cfg.validate();
    detail::require(theta.rows() >= 1 && theta.cols() >= 1, "cosamp: empty sensing matrix");
    detail::require(y.size() == theta.rows(), "cosamp: measurement vector has length " + std::to_string(y.size()) +
                                                  " but sensing matrix has " + std::to_string(theta.rows()) + " rows");
    detail::require_finite(y, "cosamp right-hand side");

    const Index n = theta.cols();
    const Index p = theta.rows();
    SparseSolution<Scalar> out;
    out.coefficients = Vec::Zero(n);
    const double ynorm = y.norm();
    if (ynorm == 0.0) return out;

    const Index K = std::min(cfg.sparsity, n);
    if (2 * K > p) {
        out.warnings.push_back("cosamp: 2K = " + std::to_string(2 * K) + " exceeds p = " + std::to_string(p) +
                               "; recovery guarantees do not apply");
    }

    auto modulus = [](const Vec& v) -> RealVector { return v.cwiseAbs(); };

    Vec proxy = detail::real_times(theta.transpose(), y);
    auto current = detail::fit_support<Scalar>(theta, y, detail::largest_entries(modulus(proxy), K));
    auto best = current;

    Index it = 0;
    while (it < cfg.max_iterations && current.residual > cfg.residual_tol * ynorm) {
        ++it;
        Vec r = y;
        for (std::size_t j = 0; j < current.support.size(); ++j)
            r -= current.values(static_cast<Index>(j)) * theta.col(current.support[j]).template cast<Scalar>();
        proxy = detail::real_times(theta.transpose(), r);

        std::vector<Index> merged = detail::largest_entries(modulus(proxy), 2 * K);
        merged.insert(merged.end(), current.support.begin(), current.support.end());
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

        const auto wide = detail::fit_support<Scalar>(theta, y, merged);
        RealVector mags = RealVector::Zero(n);
        for (std::size_t j = 0; j < wide.support.size(); ++j) mags(wide.support[j]) = std::abs(wide.values(static_cast<Index>(j)));
        std::vector<Index> pruned = detail::largest_entries(mags, K);
        pruned.erase(std::remove_if(pruned.begin(), pruned.end(), [&](Index i) { return mags(i) == 0.0; }),
                     pruned.end());
        if (pruned.empty()) break;

        current = detail::fit_support<Scalar>(theta, y, std::move(pruned));
        if (current.residual < best.residual) best = current;
    }

    for (std::size_t j = 0; j < best.support.size(); ++j)
        out.coefficients(best.support[j]) = best.values(static_cast<Index>(j));
    out.support = best.support;
    out.relative_residual = best.residual / ynorm;
    out.iterations = it;
    out.success = out.relative_residual <= cfg.success_tol;
    return out;
}

/// Result of recovering a block of columns.
struct ColumnRecovery {
    ComplexMatrix vectors;          ///< n x k full-state columns
    ComplexMatrix coefficients;     ///< n x k sparse coefficients in the basis
    std::vector<double> residuals;  ///< per-column relative residual in measurement space
    std::vector<bool> success;
    std::vector<std::string> warnings;

    bool all_succeeded() const { return std::all_of(success.begin(), success.end(), [](bool b) { return b; }); }
    double max_residual() const {
        double m = 0.0;
        for (double r : residuals) m = std::max(m, r);
        return m;
    }
};

/// Recovers full-state columns x_j = Psi s_j from compressed columns
/// y_j = C x_j, one CoSaMP solve per column against Theta = C Psi.
/// With normalize = true each column is scaled to unit norm and given the
/// library's phase convention (used for modes); otherwise the recovered
/// scale is kept (used for actuation matrices).
inline ColumnRecovery recover_columns(const ComplexMatrix& compressed, const MeasurementOperator& C,
                                      const RealMatrix& psi, const SparseRecoveryConfig& cfg, bool normalize) {
    detail::require(compressed.rows() == C.rows(), "recover: compressed columns have " +
                                                        std::to_string(compressed.rows()) + " rows, operator has " +
                                                        std::to_string(C.rows()));
    detail::require(psi.rows() == C.cols() && psi.cols() == C.cols(), "recover: basis must be n x n with n = cols(C)");
    const Index n = C.cols();
    const Index k = compressed.cols();
    ColumnRecovery out;
    out.vectors = ComplexMatrix::Zero(n, k);
    out.coefficients = ComplexMatrix::Zero(n, k);
    if (k == 0) return out;

    const RealMatrix theta = C.apply(psi);
    for (Index j = 0; j < k; ++j) {
        const ComplexVector y = compressed.col(j);
        auto sol = cosamp<Complex>(theta, y, cfg);
        out.coefficients.col(j) = sol.coefficients;
        for (Index i : sol.support) out.vectors.col(j) += sol.coefficients(i) * psi.col(i).cast<Complex>();
        if (normalize) normalize_phase(out.vectors.col(j));
        out.residuals.push_back(sol.relative_residual);
        out.success.push_back(sol.success);
        for (auto& w : sol.warnings) out.warnings.push_back("column " + std::to_string(j) + ": " + w);
        if (!sol.success) {
            out.warnings.push_back("column " + std::to_string(j) + ": sparse recovery residual " +
                                   std::to_string(sol.relative_residual) + " above tolerance");
        }
    }
    return out;
}

/// Unit-normalized full-state modes from compressed modes.
inline ColumnRecovery recover_full_vectors(const ComplexMatrix& compressed, const MeasurementOperator& C,
                                           const RealMatrix& psi, const SparseRecoveryConfig& cfg) {
    return recover_columns(compressed, C, psi, cfg, true);
}

}  // namespace cdmdc
