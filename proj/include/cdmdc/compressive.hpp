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

// Compressive DMD and compressive DMD with control.
//
// The reduced eigenproblem is always solved on compressed data Y = C X.
// Full-state modes come from one of two routes:
//   projection - lift through full-state snapshots X' (when available);
//   sensing    - sparse recovery of each compressed mode in a basis Psi.

#include "cdmdc/dmd.hpp"
#include "cdmdc/measurement.hpp"
#include "cdmdc/sparse_recovery.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace cdmdc {

enum class RecoveryPath { CompressedProjection, CompressedSensing };

inline std::string_view to_string(RecoveryPath p) {
    return p == RecoveryPath::CompressedProjection ? "compressed" : "compressed-sensing";
}

struct FullState {
    RealMatrix X;
    RealMatrix Xp;
};

struct CompressiveInputs {
    RealMatrix Y;                       ///< p x m
    RealMatrix Yp;                      ///< p x m
    MeasurementOperator C;
    std::optional<RealMatrix> inputs;   ///< q x m
    double dt = 1.0;
    std::optional<FullState> full_state;
    std::optional<RealMatrix> B_known;  ///< n x q
    Index r = 0;                        ///< 0: smallest rank holding 99% of the energy of Y
    Index r_tilde = 0;                  ///< 0: default_augmented_rank(Y, Upsilon, r)
    std::optional<RealMatrix> psi;      ///< n x n; defaults to the DCT-II basis
    SparseRecoveryConfig recovery;
    std::optional<Index> sparsity_B;    ///< K for actuation columns; defaults to recovery.sparsity
    bool check_consistency = true;      ///< verify C X = Y when X is supplied

    Index n() const { return C.cols(); }
    Index p() const { return Y.rows(); }
    Index m() const { return Y.cols(); }

    void validate() const {
        detail::require(Y.rows() >= 1 && Y.cols() >= 1, "compressive: Y is empty");
        detail::require(Y.rows() == Yp.rows() && Y.cols() == Yp.cols(),
                        "compressive: Y is " + detail::shape(Y.rows(), Y.cols()) + " but Y' is " +
                            detail::shape(Yp.rows(), Yp.cols()));
        detail::require(Y.rows() == C.rows(), "compressive: Y has " + std::to_string(Y.rows()) +
                                                  " rows but C has " + std::to_string(C.rows()));
        detail::require(dt > 0.0, "compressive: dt must be positive");
        detail::require_finite(Y, "compressed snapshots Y");
        detail::require_finite(Yp, "compressed snapshots Y'");
        if (inputs) {
            detail::require(inputs->cols() == m(), "compressive: input matrix has " + std::to_string(inputs->cols()) +
                                                       " columns, expected " + std::to_string(m()));
            detail::require_finite(*inputs, "input snapshots");
        }
        if (B_known) {
            detail::require(inputs.has_value(), "compressive: B given without input snapshots");
            detail::require(B_known->rows() == n() && B_known->cols() == inputs->rows(),
                            "compressive: B is " + detail::shape(B_known->rows(), B_known->cols()) + ", expected " +
                                detail::shape(n(), inputs->rows()));
            detail::require_finite(*B_known, "actuation matrix B");
        }
        if (psi) {
            detail::require(psi->rows() == n() && psi->cols() == n(), "compressive: basis must be " +
                                                                          detail::shape(n(), n()));
        }
        if (full_state) {
            const auto& fs = *full_state;
            detail::require(fs.X.rows() == n() && fs.X.cols() == m() && fs.Xp.rows() == n() && fs.Xp.cols() == m(),
                            "compressive: full-state snapshots must be " + detail::shape(n(), m()));
            detail::require_finite(fs.X, "snapshot matrix X");
            detail::require_finite(fs.Xp, "snapshot matrix X'");
            if (check_consistency) {
                check_measured(fs.X, Y, "Y");
                check_measured(fs.Xp, Yp, "Y'");
            }
        }
    }

private:
    // C X = Y on all columns for stored operators, on the first and last
    // columns when the operator is regenerated row by row.
    void check_measured(const RealMatrix& X, const RealMatrix& Yref, const char* name) const {
        const bool streamed = C.kind() != MeasurementKind::SinglePixel &&
                              C.rows() * C.cols() > MeasurementOperator::kDenseEntryLimit;
        RealMatrix Xs, Ys;
        if (streamed && X.cols() > 2) {
            Xs.resize(X.rows(), 2);
            Xs << X.col(0), X.col(X.cols() - 1);
            Ys.resize(Yref.rows(), 2);
            Ys << Yref.col(0), Yref.col(Yref.cols() - 1);
        } else {
            Xs = X;
            Ys = Yref;
        }
        const double scale = std::max(Ys.norm(), 1e-300);
        const double res = (C.apply(Xs) - Ys).norm() / scale;
        if (!(res <= 1e-10)) {
            throw InvalidArgument(std::string("compressive: measurement operator is inconsistent with the data, ||C X - ") +
                                  name + "|| / ||" + name + "|| = " + std::to_string(res));
        }
    }
};

/// Compresses a full snapshot set with C. The full state is kept only when
/// keep_full_state is true.
inline CompressiveInputs measure(const SnapshotSet& snaps, const MeasurementOperator& C, bool keep_full_state) {
    snaps.validate();
    CompressiveInputs in;
    in.Y = C.apply(snaps.X);
    in.Yp = C.apply(snaps.Xp);
    in.C = C;
    in.inputs = snaps.inputs;
    in.dt = snaps.dt;
    if (keep_full_state) in.full_state = FullState{snaps.X, snaps.Xp};
    return in;
}

struct CompressiveModel : DmdModel {
    std::string branch;
    RecoveryPath path = RecoveryPath::CompressedProjection;
    ComplexVector eigenvalues_Y;         ///< identical to eigenvalues
    ComplexMatrix modes_Y;               ///< p x r, unit-norm
    std::optional<RealMatrix> B_Y;       ///< p x q
    std::optional<TruncatedSvd> svd_Y;   ///< rank-r SVD of Y (cdmd paths)
    std::vector<double> mode_residuals;  ///< sparse-recovery residual per mode
    std::vector<double> actuation_residuals;
    bool recovery_succeeded = true;
};

namespace detail {

inline RealMatrix basis_or_dct(const CompressiveInputs& in) { return in.psi ? *in.psi : dct_basis(in.n()); }

inline void attach_recovery(CompressiveModel& model, const ColumnRecovery& rec, std::vector<double>& residuals) {
    residuals = rec.residuals;
    if (!rec.all_succeeded()) model.recovery_succeeded = false;
    for (const auto& w : rec.warnings) model.warnings.push_back("sparse recovery: " + w);
}

// Compressed DMD on (Y, Y') with optional full-state lift (X, X').
inline CompressiveModel cdmd_core(const RealMatrix& Y, const RealMatrix& Yp, const CompressiveInputs& in,
                                  const std::optional<FullState>& full) {
    const Index r = in.r > 0 ? in.r : rank_for_energy(Y);
    require(r >= 1 && r <= std::min(Y.rows(), Y.cols()),
            "cdmd: rank " + std::to_string(r) + " exceeds min(p, m) = " + std::to_string(std::min(Y.rows(), Y.cols())));
    CompressiveModel model;
    model.dt = in.dt;

    auto svd = truncated_svd(Y, r);
    if (svd.rank() == 0) throw NumericalError("cdmd: compressed data has rank 0");
    if (svd.truncated())
        model.warnings.push_back("cdmd: Y has numerical rank " + std::to_string(svd.rank()) + " < r = " +
                                 std::to_string(r) + "; truncated");

    const RealMatrix VSinv = svd.V * svd.S.cwiseInverse().asDiagonal();
    const RealMatrix liftY = Yp * VSinv;
    const RealMatrix AtildeY = svd.U.transpose() * liftY;
    auto ed = eig(AtildeY);

    model.modes_Y = to_complex(liftY) * ed.vectors;
    for (Index i = 0; i < model.modes_Y.cols(); ++i)
        if (is_zero_eigenvalue(ed.values, i)) model.modes_Y.col(i) = to_complex(svd.U) * ed.vectors.col(i);
    normalize_columns(model.modes_Y);

    if (full) {
        model.path = RecoveryPath::CompressedProjection;
        model.modes = to_complex(RealMatrix(full->Xp * VSinv)) * ed.vectors;
        const bool any_zero = [&] {
            for (Index i = 0; i < ed.values.size(); ++i)
                if (is_zero_eigenvalue(ed.values, i)) return true;
            return false;
        }();
        if (any_zero) {
            // X V_Y S_Y^-1 is the full-state counterpart of U_Y
            const ComplexMatrix zero_lift = to_complex(RealMatrix(full->X * VSinv));
            for (Index i = 0; i < model.modes.cols(); ++i)
                if (is_zero_eigenvalue(ed.values, i)) model.modes.col(i) = zero_lift * ed.vectors.col(i);
        }
        normalize_columns(model.modes);
        model.amplitudes = fit_amplitudes(model.modes, full->X.col(0).cast<Complex>());
    } else {
        model.path = RecoveryPath::CompressedSensing;
        const auto rec = recover_full_vectors(model.modes_Y, in.C, basis_or_dct(in), in.recovery);
        model.modes = rec.vectors;
        attach_recovery(model, rec, model.mode_residuals);
        model.amplitudes = fit_amplitudes(in.C.apply(model.modes), Y.col(0).cast<Complex>());
    }

    model.Atilde = to_complex(AtildeY);
    model.W = ed.vectors;
    model.eigenvalues = ed.values;
    model.eigenvalues_Y = ed.values;
    model.svd_Y = std::move(svd);
    model.r = model.eigenvalues.size();
    model.omega = continuous_spectrum(model.eigenvalues, model.dt);
    return model;
}

}  // namespace detail

/// Compressive DMD. Input snapshots, if any, are ignored.
inline CompressiveModel cdmd(const CompressiveInputs& in) {
    in.validate();
    auto model = detail::cdmd_core(in.Y, in.Yp, in, in.full_state);
    model.algorithm = "cdmd";
    model.branch = in.full_state ? "cdmd-projection" : "cdmd-sensing";
    return model;
}

/// Compressive DMD with control. The branch follows from which of the
/// full-state snapshots X and the actuation matrix B are supplied:
///   X known,   B known   : compressed DMD on (Y, Y' - C B Upsilon), lifted with X' - B Upsilon
///   X known,   B unknown : DMDc on (Y, Y', Upsilon), modes and B^ lifted with X'
///   X unknown, B known   : compressed-sensing DMD on (Y, Y' - C B Upsilon)
///   X unknown, B unknown : DMDc on (Y, Y', Upsilon), sparse recovery of modes and of B^_Y
inline CompressiveModel cdmdc(const CompressiveInputs& in) {
    in.validate();
    detail::require(in.inputs.has_value(), "cdmdc: input snapshots are required");
    const RealMatrix& Ups = *in.inputs;

    if (in.B_known) {
        const RealMatrix& B = *in.B_known;
        const RealMatrix CB = in.C.apply(B);
        const RealMatrix Ypc = in.Yp - CB * Ups;
        std::optional<FullState> full;
        if (in.full_state) full = FullState{in.full_state->X, in.full_state->Xp - B * Ups};
        auto model = detail::cdmd_core(in.Y, Ypc, in, full);
        model.algorithm = "cdmdc";
        model.branch = in.full_state ? "x-known-b-known" : "x-unknown-b-known";
        model.B_hat = B;
        model.B_Y = CB;
        return model;
    }

    CompressiveModel model;
    model.algorithm = "cdmdc";
    model.dt = in.dt;
    const Index r = in.r > 0 ? in.r : rank_for_energy(in.Y);
    const Index r_tilde = in.r_tilde > 0 ? in.r_tilde : default_augmented_rank(in.Y, Ups, r);
    auto reg = detail::dmdc_regression(in.Y, in.Yp, Ups, r, r_tilde, model.warnings);

    model.modes_Y = detail::dmdc_modes(reg.shifted_map, reg.svd.Utilde1, reg);
    model.B_Y = reg.shifted_map * reg.svd.Utilde2.transpose();

    if (in.full_state) {
        model.branch = "x-known-b-unknown";
        model.path = RecoveryPath::CompressedProjection;
        const RealMatrix VSinv = reg.svd.Vtilde * reg.svd.Sigma_tilde.cwiseInverse().asDiagonal();
        const RealMatrix lift = in.full_state->Xp * VSinv;
        model.modes = detail::dmdc_modes(lift, in.full_state->X * VSinv, reg);
        model.B_hat = lift * reg.svd.Utilde2.transpose();
        model.amplitudes = detail::fit_amplitudes(model.modes, in.full_state->X.col(0).cast<Complex>());
    } else {
        model.branch = "x-unknown-b-unknown";
        model.path = RecoveryPath::CompressedSensing;
        const RealMatrix psi = detail::basis_or_dct(in);
        const auto modes = recover_full_vectors(model.modes_Y, in.C, psi, in.recovery);
        model.modes = modes.vectors;
        detail::attach_recovery(model, modes, model.mode_residuals);

        SparseRecoveryConfig cfg_b = in.recovery;
        if (in.sparsity_B) cfg_b.sparsity = *in.sparsity_B;
        const auto act = recover_columns(model.B_Y->cast<Complex>(), in.C, psi, cfg_b, false);
        model.B_hat = act.vectors.real();
        detail::attach_recovery(model, act, model.actuation_residuals);
        model.amplitudes = detail::fit_amplitudes(in.C.apply(model.modes), in.Y.col(0).cast<Complex>());
    }

    model.Atilde = detail::to_complex(reg.Atilde);
    model.W = reg.spectrum.vectors;
    model.eigenvalues = reg.spectrum.values;
    model.eigenvalues_Y = reg.spectrum.values;
    model.augmented = std::move(reg.svd);
    model.r = model.eigenvalues.size();
    model.omega = continuous_spectrum(model.eigenvalues, model.dt);
    return model;
}

}  // namespace cdmdc
