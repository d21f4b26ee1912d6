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

// Exact DMD and DMD with control.
//
// Notation follows the usual DMD literature: X, X' are the snapshot and
// shifted-snapshot matrices (n x m), Upsilon the input snapshots (q x m),
// Omega = [X; Upsilon]. Reduced operators are never lifted to n x n.

#include "cdmdc/numerics.hpp"

#include <Eigen/QR>

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace cdmdc {

/// Paired snapshot matrices with optional inputs.
struct SnapshotSet {
    RealMatrix X;                       ///< n x m
    RealMatrix Xp;                      ///< n x m, one step ahead of X
    std::optional<RealMatrix> inputs;   ///< q x m (Upsilon)
    double dt = 1.0;

    Index n() const { return X.rows(); }
    Index m() const { return X.cols(); }
    Index q() const { return inputs ? inputs->rows() : 0; }

    void validate() const {
        detail::require(X.rows() >= 1 && X.cols() >= 1, "snapshots: X is empty");
        detail::require(X.rows() == Xp.rows() && X.cols() == Xp.cols(),
                        "snapshots: X is " + detail::shape(X.rows(), X.cols()) + " but X' is " +
                            detail::shape(Xp.rows(), Xp.cols()));
        detail::require(dt > 0.0, "snapshots: dt must be positive");
        if (inputs) {
            detail::require(inputs->cols() == X.cols(), "snapshots: input matrix has " +
                                                            std::to_string(inputs->cols()) + " columns, expected " +
                                                            std::to_string(X.cols()));
            detail::require(inputs->rows() >= 1, "snapshots: input matrix has no rows");
            detail::require_finite(*inputs, "input snapshots");
        }
        detail::require_finite(X, "snapshot matrix X");
        detail::require_finite(Xp, "snapshot matrix X'");
    }

    /// Splits a sequence [x_0 ... x_m] into X = [x_0 ... x_{m-1}] and
    /// X' = [x_1 ... x_m]. Inputs, if given, must have at least m columns;
    /// only the first m are used.
    static SnapshotSet from_sequence(const RealMatrix& seq, std::optional<RealMatrix> inputs, double dt) {
        detail::require(seq.cols() >= 2, "snapshots: a sequence needs at least two snapshots");
        SnapshotSet s;
        const Index m = seq.cols() - 1;
        s.X = seq.leftCols(m);
        s.Xp = seq.rightCols(m);
        if (inputs) {
            detail::require(inputs->cols() >= m, "snapshots: input sequence has " + std::to_string(inputs->cols()) +
                                                     " columns, need " + std::to_string(m));
            s.inputs = inputs->leftCols(m);
        }
        s.dt = dt;
        s.validate();
        return s;
    }
};

/// SVD pieces of DMDc: the r~-rank SVD of Omega split into state and input
/// blocks, and the r-rank SVD of X'.
struct AugmentedSvd {
    RealMatrix Utilde1;      ///< n x r~
    RealMatrix Utilde2;      ///< q x r~
    RealVector Sigma_tilde;  ///< r~
    RealMatrix Vtilde;       ///< m x r~
    RealMatrix Uhat;         ///< n x r
    RealVector Sigma_hat;    ///< r
    RealMatrix Vhat;         ///< m x r

    Index rank_tilde() const { return Sigma_tilde.size(); }
    Index rank() const { return Sigma_hat.size(); }
};

/// Output of every decomposition in the library.
struct DmdModel {
    std::string algorithm;
    Index r = 0;                         ///< retained rank (effective)
    double dt = 1.0;
    ComplexMatrix Atilde;                ///< r x r reduced operator
    ComplexMatrix W;                     ///< eigenvectors of Atilde
    ComplexVector eigenvalues;           ///< discrete-time, ordered
    ComplexVector omega;                 ///< ln(lambda) / dt
    ComplexMatrix modes;                 ///< n x r, unit-norm columns
    ComplexVector amplitudes;            ///< least-squares fit of x_0 onto the modes
    std::optional<RealMatrix> B_hat;     ///< n x q actuation estimate (or echo of known B)
    std::optional<TruncatedSvd> svd;     ///< rank-r SVD of X (exact DMD paths)
    std::optional<AugmentedSvd> augmented;
    std::vector<std::string> warnings;

    Index n() const { return modes.rows(); }
};

/// omega_i = ln(lambda_i) / dt on the principal branch. A zero eigenvalue
/// maps to -infinity (decay marker).
inline ComplexVector continuous_spectrum(const ComplexVector& lambda, double dt) {
    detail::require(dt > 0.0, "continuous_spectrum: dt must be positive");
    ComplexVector omega(lambda.size());
    for (Index i = 0; i < lambda.size(); ++i) {
        omega(i) = lambda(i) == Complex(0.0, 0.0) ? Complex(-std::numeric_limits<double>::infinity(), 0.0)
                                                   : std::log(lambda(i)) / dt;
    }
    return omega;
}

/// Smallest rank whose singular values hold `fraction` of the energy of M.
inline Index rank_for_energy(const RealMatrix& M, double fraction = 0.99) {
    return energy_rank(singular_values(M), fraction);
}

/// Default r~ for DMDc on (X, Upsilon): the 99% energy rank of Omega, raised
/// to r + q when Omega has that many numerically nonzero singular values.
inline Index default_augmented_rank(const RealMatrix& X, const RealMatrix& inputs, Index r) {
    detail::require(X.cols() == inputs.cols(), "default_augmented_rank: X and inputs differ in column count");
    RealMatrix omega(X.rows() + inputs.rows(), X.cols());
    omega << X, inputs;
    const RealVector s = singular_values(omega);
    Index numerical = 0;
    while (numerical < s.size() && s(numerical) > kRankTolerance * s(0)) ++numerical;
    return std::max(energy_rank(s), std::min(r + inputs.rows(), numerical));
}

namespace detail {

/// Whether lambda_i counts as zero: |lambda_i| <= tol * max |lambda|.
inline bool is_zero_eigenvalue(const ComplexVector& lambda, Index i) {
    const double scale = lambda.size() > 0 ? lambda.cwiseAbs().maxCoeff() : 0.0;
    return std::abs(lambda(i)) <= kRankTolerance * scale;
}

/// Least-squares amplitudes b = argmin ||Phi b - x||.
inline ComplexVector fit_amplitudes(const ComplexMatrix& modes, const ComplexVector& x) {
    if (modes.cols() == 0) return {};
    Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod(modes);
    return cod.solve(x);
}

inline ComplexMatrix to_complex(const RealMatrix& M) { return M.cast<Complex>(); }

/// Pieces of the DMDc regression on one data set: SVDs, the shifted map
/// X' V~ Sigma~^-1 (n x r~), reduced operator and its eigendecomposition.
struct DmdcRegression {
    AugmentedSvd svd;
    RealMatrix shifted_map;  // X' V~ Sigma~^-1
    RealMatrix U1t_Uhat;     // U~1^T U^
    RealMatrix Atilde;
    EigenDecomposition spectrum;
};

inline DmdcRegression dmdc_regression(const RealMatrix& X, const RealMatrix& Xp, const RealMatrix& inputs, Index r,
                                      Index r_tilde, std::vector<std::string>& warnings) {
    const Index n = X.rows();
    const Index q = inputs.rows();
    const Index m = X.cols();
    require(r >= 1 && r <= n, "dmdc: rank r = " + std::to_string(r) + " must lie in [1, " + std::to_string(n) + "]");
    require(r_tilde >= 1 && r_tilde <= std::min(n + q, m),
            "dmdc: rank r~ = " + std::to_string(r_tilde) + " must lie in [1, min(n + q, m) = " +
                std::to_string(std::min(n + q, m)) + "]");
    require(r <= m, "dmdc: rank r = " + std::to_string(r) + " exceeds snapshot count " + std::to_string(m));
    if (r > r_tilde) warnings.push_back("dmdc: r = " + std::to_string(r) + " exceeds r~ = " + std::to_string(r_tilde));

    RealMatrix omega(n + q, m);
    omega.topRows(n) = X;
    omega.bottomRows(q) = inputs;
    const auto aug = truncated_svd(omega, r_tilde);
    if (aug.rank() == 0) throw NumericalError("dmdc: augmented data matrix has rank 0");
    if (aug.truncated())
        warnings.push_back("dmdc: Omega has numerical rank " + std::to_string(aug.rank()) + " < r~ = " +
                           std::to_string(r_tilde) + "; truncated");
    const auto hat = truncated_svd(Xp, r);
    if (hat.rank() == 0) throw NumericalError("dmdc: shifted data matrix has rank 0");
    if (hat.truncated())
        warnings.push_back("dmdc: X' has numerical rank " + std::to_string(hat.rank()) + " < r = " +
                           std::to_string(r) + "; truncated");

    DmdcRegression out;
    out.svd.Utilde1 = aug.U.topRows(n);
    out.svd.Utilde2 = aug.U.bottomRows(q);
    out.svd.Sigma_tilde = aug.S;
    out.svd.Vtilde = aug.V;
    out.svd.Uhat = hat.U;
    out.svd.Sigma_hat = hat.S;
    out.svd.Vhat = hat.V;

    out.shifted_map = Xp * (aug.V * aug.S.cwiseInverse().asDiagonal());
    out.U1t_Uhat = out.svd.Utilde1.transpose() * hat.U;
    out.Atilde = (hat.U.transpose() * out.shifted_map) * out.U1t_Uhat;
    out.spectrum = eig(out.Atilde);
    return out;
}

/// Modes lifted through `lift` (n x r~, e.g. X' V~ Sigma~^-1); zero
/// eigenvalues use `zero_lift` (n x r~, e.g. U~1) instead.
inline ComplexMatrix dmdc_modes(const RealMatrix& lift, const RealMatrix& zero_lift, const DmdcRegression& reg) {
    const ComplexMatrix inner = to_complex(reg.U1t_Uhat) * reg.spectrum.vectors;  // r~ x r
    ComplexMatrix modes = to_complex(lift) * inner;
    for (Index i = 0; i < modes.cols(); ++i) {
        if (is_zero_eigenvalue(reg.spectrum.values, i)) modes.col(i) = to_complex(zero_lift) * inner.col(i);
    }
    normalize_columns(modes);
    return modes;
}

inline void finish_model(DmdModel& model, const ComplexVector& x0) {
    model.r = model.eigenvalues.size();
    model.omega = continuous_spectrum(model.eigenvalues, model.dt);
    model.amplitudes = fit_amplitudes(model.modes, x0);
}

}  // namespace detail

/// Exact DMD: rank-r SVD of X, A~ = U^T X' V S^-1, Phi = X' V S^-1 W
/// (Phi_i = U w_i for a zero eigenvalue). Inputs, if any, are ignored.
inline DmdModel exact_dmd(const SnapshotSet& snaps, Index r) {
    snaps.validate();
    detail::require(r >= 1 && r <= std::min(snaps.n(), snaps.m()),
                    "exact_dmd: rank " + std::to_string(r) + " must lie in [1, " +
                        std::to_string(std::min(snaps.n(), snaps.m())) + "]");
    DmdModel model;
    model.algorithm = "dmd";
    model.dt = snaps.dt;

    auto svd = truncated_svd(snaps.X, r);
    if (svd.rank() == 0) throw NumericalError("exact_dmd: snapshot matrix has rank 0");
    if (svd.truncated())
        model.warnings.push_back("exact_dmd: X has numerical rank " + std::to_string(svd.rank()) + " < r = " +
                                 std::to_string(r) + "; truncated");

    const RealMatrix lift = snaps.Xp * (svd.V * svd.S.cwiseInverse().asDiagonal());  // X' V S^-1
    const RealMatrix Atilde = svd.U.transpose() * lift;
    auto ed = eig(Atilde);

    model.modes = detail::to_complex(lift) * ed.vectors;
    for (Index i = 0; i < model.modes.cols(); ++i) {
        if (detail::is_zero_eigenvalue(ed.values, i)) model.modes.col(i) = detail::to_complex(svd.U) * ed.vectors.col(i);
    }
    normalize_columns(model.modes);
    model.Atilde = detail::to_complex(Atilde);
    model.W = ed.vectors;
    model.eigenvalues = ed.values;
    model.svd = std::move(svd);
    detail::finish_model(model, snaps.X.col(0).cast<Complex>());
    return model;
}

/// DMDc with known actuation: exact DMD on (X, X' - B Upsilon); B is echoed.
inline DmdModel dmdc_known_b(const SnapshotSet& snaps, const RealMatrix& B, Index r) {
    snaps.validate();
    detail::require(snaps.inputs.has_value(), "dmdc_known_b: input snapshots are required");
    detail::require(B.rows() == snaps.n() && B.cols() == snaps.q(),
                    "dmdc_known_b: B is " + detail::shape(B.rows(), B.cols()) + ", expected " +
                        detail::shape(snaps.n(), snaps.q()));
    detail::require_finite(B, "actuation matrix B");
    SnapshotSet corrected{snaps.X, snaps.Xp - B * (*snaps.inputs), snaps.inputs, snaps.dt};
    auto model = exact_dmd(corrected, r);
    model.algorithm = "dmdc-known-b";
    model.B_hat = B;
    return model;
}

/// DMDc with unknown actuation: regression X' = [A B] Omega through the
/// r~-rank SVD of Omega and the r-rank SVD of X'.
inline DmdModel dmdc_unknown_b(const SnapshotSet& snaps, Index r, Index r_tilde) {
    snaps.validate();
    detail::require(snaps.inputs.has_value(), "dmdc_unknown_b: input snapshots are required");
    DmdModel model;
    model.algorithm = "dmdc";
    model.dt = snaps.dt;
    auto reg = detail::dmdc_regression(snaps.X, snaps.Xp, *snaps.inputs, r, r_tilde, model.warnings);

    model.modes = detail::dmdc_modes(reg.shifted_map, reg.svd.Utilde1, reg);
    model.B_hat = reg.shifted_map * reg.svd.Utilde2.transpose();
    model.Atilde = detail::to_complex(reg.Atilde);
    model.W = reg.spectrum.vectors;
    model.eigenvalues = reg.spectrum.values;
    model.augmented = std::move(reg.svd);
    detail::finish_model(model, snaps.X.col(0).cast<Complex>());
    return model;
}

/// Rolls the identified model forward from x0:
///   z_0 = Phi^+ x0,  z_{k+1} = Lambda z_k + Phi^+ B^ u_k,  x_k = Re(Phi z_k).
/// Returns n x (steps + 1). `inputs` (q x >= steps) requires B_hat.
inline RealMatrix predict(const DmdModel& model, const RealVector& x0, const std::optional<RealMatrix>& inputs,
                          Index steps) {
    detail::require(steps >= 0, "predict: steps must be nonnegative");
    detail::require(x0.size() == model.n(), "predict: x0 has length " + std::to_string(x0.size()) + ", model has n = " +
                                                std::to_string(model.n()));
    if (inputs) {
        detail::require(model.B_hat.has_value(), "predict: inputs given but the model has no actuation matrix");
        detail::require(inputs->rows() == model.B_hat->cols(), "predict: input dimension mismatch");
        detail::require(inputs->cols() >= steps, "predict: " + std::to_string(inputs->cols()) +
                                                     " input columns for " + std::to_string(steps) + " steps");
    }
    Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod(model.modes);
    ComplexVector z = cod.solve(x0.cast<Complex>());
    ComplexMatrix G;
    if (inputs) G = cod.solve(model.B_hat->cast<Complex>());

    RealMatrix out(model.n(), steps + 1);
    out.col(0) = (model.modes * z).real();
    for (Index k = 0; k < steps; ++k) {
        z = model.eigenvalues.cwiseProduct(z);
        if (inputs) z += G * inputs->col(k).cast<Complex>();
        out.col(k + 1) = (model.modes * z).real();
    }
    return out;
}

}  // namespace cdmdc
