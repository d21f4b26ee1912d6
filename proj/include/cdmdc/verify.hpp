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

// Commutation identities between full-state and compressed DMDc operators,
// controllability, and the error metrics used to compare models.
//
// A = X' V~ S~^-1 U~1^T and A_Y = Y' V~_Y S~_Y^-1 U~_{Y,1}^T are kept in
// factored form; nothing n x n is ever formed.

#include "cdmdc/compressive.hpp"
#include "cdmdc/dmd.hpp"
#include "cdmdc/measurement.hpp"
#include "cdmdc/numerics.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cdmdc {

inline constexpr double kIdentityTolerance = 1e-8;

struct TheoremReport {
    std::string name;
    double lhs_norm = 0.0;
    double rhs_norm = 0.0;
    double residual = 0.0;  ///< relative
    double tolerance = kIdentityTolerance;
    bool pass = true;
    bool advisory = false;  ///< reported only; never counted as a failure
    std::map<std::string, double> assumptions;
    std::string note;
};

inline TheoremReport make_report(std::string name, double tol = kIdentityTolerance) {
    TheoremReport rep;
    rep.name = std::move(name);
    rep.tolerance = tol;
    return rep;
}

inline bool any_failure(const std::vector<TheoremReport>& reports) {
    return std::any_of(reports.begin(), reports.end(), [](const TheoremReport& r) { return !r.advisory && !r.pass; });
}

/// L R^T applied factor by factor.
struct LowRankOperator {
    RealMatrix left;   ///< rows x k
    RealMatrix right;  ///< cols x k

    Index rows() const { return left.rows(); }
    Index cols() const { return right.rows(); }

    template <typename Derived>
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> apply(
        const Eigen::MatrixBase<Derived>& M) const {
        using S = typename Derived::Scalar;
        detail::require(M.rows() == cols(), "operator: dimension mismatch");
        return left.template cast<S>() * (right.transpose().template cast<S>() * M);
    }

    template <typename Derived>
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> power_apply(
        const Eigen::MatrixBase<Derived>& M, Index k) const {
        Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out = M;
        for (Index i = 0; i < k; ++i) out = apply(out);
        return out;
    }

    double spectral_norm() const {
        if (left.cols() == 0) return 0.0;
        Eigen::HouseholderQR<RealMatrix> ql(left), qr(right);
        const Index k = left.cols();
        const Index kl = std::min(k, left.rows()), kr = std::min(k, right.rows());
        const RealMatrix Rl = ql.matrixQR().topRows(kl).triangularView<Eigen::Upper>();
        const RealMatrix Rr = qr.matrixQR().topRows(kr).triangularView<Eigen::Upper>();
        const RealMatrix core = Rl * Rr.transpose();
        return singular_values(core)(0);
    }
};

struct DmdcOperators {
    LowRankOperator A;
    RealMatrix B;
};

/// A = Xp V~ S~^-1 U~1^T and B = Xp V~ S~^-1 U~2^T.
inline DmdcOperators dmdc_operators(const RealMatrix& Xp, const AugmentedSvd& aug) {
    detail::require(Xp.cols() == aug.Vtilde.rows(), "dmdc_operators: snapshot count mismatch");
    const RealMatrix lift = Xp * (aug.Vtilde * aug.Sigma_tilde.cwiseInverse().asDiagonal());
    return {{lift, aug.Utilde1}, lift * aug.Utilde2.transpose()};
}

// ---------------------------------------------------------------------------
// Assumption scores (0 when the assumption holds exactly)

/// ||V~_Y V~_Y^T V~ - V~||_F / ||V~||_F.
inline double assumption1_score(const AugmentedSvd& full, const AugmentedSvd& compressed) {
    const RealMatrix& V = full.Vtilde;
    const RealMatrix& VY = compressed.Vtilde;
    return (VY * (VY.transpose() * V) - V).norm() / std::max(V.norm(), 1e-300);
}

/// ||U~1 U~1^T X' - X'||_F / ||X'||_F.
inline double assumption2_score(const AugmentedSvd& full, const RealMatrix& Xp) {
    const RealMatrix& U1 = full.Utilde1;
    return (U1 * (U1.transpose() * Xp) - Xp).norm() / std::max(Xp.norm(), 1e-300);
}

/// ||U~2 U~2^T U~_{Y,2} - U~_{Y,2}||_F / ||U~_{Y,2}||_F.
inline double assumption3_score(const AugmentedSvd& full, const AugmentedSvd& compressed) {
    const RealMatrix& U2 = full.Utilde2;
    const RealMatrix& UY2 = compressed.Utilde2;
    return (U2 * (U2.transpose() * UY2) - UY2).norm() / std::max(UY2.norm(), 1e-300);
}

namespace detail {

template <typename A, typename B>
void compare(TheoremReport& rep, const A& lhs, const B& rhs) {
    rep.lhs_norm = lhs.norm();
    rep.rhs_norm = rhs.norm();
    const double diff = (lhs - rhs).norm();
    const double scale = rep.lhs_norm > 0.0 ? rep.lhs_norm : rep.rhs_norm;
    rep.residual = scale > 0.0 ? diff / scale : 0.0;
    rep.pass = rep.residual <= rep.tolerance;
}

inline void check_shapes(const AugmentedSvd& full, const AugmentedSvd& compressed, const MeasurementOperator& C) {
    require(full.Vtilde.rows() == compressed.Vtilde.rows(), "verify: snapshot counts differ");
    require(full.Utilde1.rows() == C.cols(), "verify: C has " + std::to_string(C.cols()) + " columns but n = " +
                                                 std::to_string(full.Utilde1.rows()));
    require(compressed.Utilde1.rows() == C.rows(), "verify: C has " + std::to_string(C.rows()) +
                                                       " rows but p = " + std::to_string(compressed.Utilde1.rows()));
    require(full.Utilde2.rows() == compressed.Utilde2.rows(), "verify: input dimensions differ");
}

}  // namespace detail

/// V~ S~^-1 = V~_Y S~_Y^-1 U~_{Y,1}^T C U~1.
inline TheoremReport check_lemma1(const AugmentedSvd& full, const AugmentedSvd& compressed,
                                  const MeasurementOperator& C, double tol = kIdentityTolerance) {
    detail::check_shapes(full, compressed, C);
    auto rep = make_report("lemma 1", tol);
    const RealMatrix lhs = full.Vtilde * full.Sigma_tilde.cwiseInverse().asDiagonal();
    const RealMatrix core = compressed.Utilde1.transpose() * C.apply(full.Utilde1);
    const RealMatrix rhs = compressed.Vtilde * compressed.Sigma_tilde.cwiseInverse().asDiagonal() * core;
    detail::compare(rep, lhs, rhs);
    rep.assumptions["assumption 1"] = assumption1_score(full, compressed);
    return rep;
}

/// V~ S~^-1 = V~_Y S~_Y^-1 U~_{Y,2}^T U~2.
inline TheoremReport check_lemma2(const AugmentedSvd& full, const AugmentedSvd& compressed,
                                  const MeasurementOperator& C, double tol = kIdentityTolerance) {
    detail::check_shapes(full, compressed, C);
    auto rep = make_report("lemma 2", tol);
    const RealMatrix lhs = full.Vtilde * full.Sigma_tilde.cwiseInverse().asDiagonal();
    const RealMatrix rhs = compressed.Vtilde * compressed.Sigma_tilde.cwiseInverse().asDiagonal() *
                           (compressed.Utilde2.transpose() * full.Utilde2);
    detail::compare(rep, lhs, rhs);
    rep.assumptions["assumption 1"] = assumption1_score(full, compressed);
    rep.assumptions["assumption 3"] = assumption3_score(full, compressed);
    return rep;
}

/// V~ S~^-1 = V~_Y S~_Y^-1 (U~_{Y,1}^T C U~1 + U~_{Y,2}^T U~2): the two
/// single-block identities combined, which follows from Omega_Y = diag(C, I) Omega.
inline TheoremReport check_augmented_identity(const AugmentedSvd& full, const AugmentedSvd& compressed,
                                              const MeasurementOperator& C, double tol = kIdentityTolerance) {
    detail::check_shapes(full, compressed, C);
    auto rep = make_report("augmented identity", tol);
    const RealMatrix lhs = full.Vtilde * full.Sigma_tilde.cwiseInverse().asDiagonal();
    const RealMatrix core = compressed.Utilde1.transpose() * C.apply(full.Utilde1) +
                            compressed.Utilde2.transpose() * full.Utilde2;
    const RealMatrix rhs = compressed.Vtilde * compressed.Sigma_tilde.cwiseInverse().asDiagonal() * core;
    detail::compare(rep, lhs, rhs);
    rep.assumptions["assumption 1"] = assumption1_score(full, compressed);
    return rep;
}

/// C A X' = A_Y C X'.
inline TheoremReport check_theorem1(const LowRankOperator& A, const LowRankOperator& A_Y, const MeasurementOperator& C,
                                    const RealMatrix& Xp, double tol = kIdentityTolerance) {
    auto rep = make_report("theorem 1", tol);
    const RealMatrix lhs = C.apply(A.apply(Xp));
    const RealMatrix rhs = A_Y.apply(C.apply(Xp));
    detail::compare(rep, lhs, rhs);
    return rep;
}

/// C B = B_Y.
inline TheoremReport check_theorem2(const RealMatrix& B, const RealMatrix& B_Y, const MeasurementOperator& C,
                                    double tol = kIdentityTolerance) {
    detail::require(B_Y.rows() == C.rows() && B.cols() == B_Y.cols(), "theorem 2: dimension mismatch");
    auto rep = make_report("theorem 2", tol);
    detail::compare(rep, C.apply(B), B_Y);
    return rep;
}

/// A_Y C phi = lambda C phi for every full-state eigenpair. The residual is
/// ||A_Y C phi - lambda C phi|| / (max(||A_Y||, |lambda|) ||C phi||); modes
/// with ||C phi|| < 1e-10 ||phi|| lie in null(C) and pass trivially.
inline std::vector<TheoremReport> check_theorem3(const ComplexMatrix& modes, const ComplexVector& lambda,
                                                 const LowRankOperator& A_Y, const MeasurementOperator& C,
                                                 double tol = kIdentityTolerance) {
    detail::require(modes.cols() == lambda.size(), "theorem 3: modes and eigenvalues differ in count");
    const ComplexMatrix Cphi = C.apply(modes);
    const ComplexMatrix ACphi = A_Y.apply(Cphi);
    const double anorm = A_Y.spectral_norm();
    std::vector<TheoremReport> out;
    for (Index i = 0; i < modes.cols(); ++i) {
        auto rep = make_report("theorem 3 mode " + std::to_string(i), tol);
        const double cn = Cphi.col(i).norm();
        rep.lhs_norm = ACphi.col(i).norm();
        rep.rhs_norm = std::abs(lambda(i)) * cn;
        if (cn < 1e-10 * modes.col(i).norm()) {
            rep.residual = 0.0;
            rep.note = "mode in null space of C";
        } else {
            const double scale = std::max(anorm, std::abs(lambda(i))) * cn;
            rep.residual = (ACphi.col(i) - lambda(i) * Cphi.col(i)).norm() / scale;
        }
        rep.pass = rep.residual <= tol;
        out.push_back(std::move(rep));
    }
    return out;
}

/// C A^k B = A_Y^k C B = A_Y^k B_Y for k = 0 .. k_max. Each report carries the
/// larger residual of the two equalities.
inline std::vector<TheoremReport> check_markov(const LowRankOperator& A, const RealMatrix& B, const LowRankOperator& A_Y,
                                               const RealMatrix& B_Y, const MeasurementOperator& C, Index k_max = 5,
                                               double tol = kIdentityTolerance) {
    detail::require(k_max >= 0, "markov: k_max must be nonnegative");
    std::vector<TheoremReport> out;
    RealMatrix AkB = B;
    RealMatrix AYkCB = C.apply(B);
    RealMatrix AYkBY = B_Y;
    for (Index k = 0; k <= k_max; ++k) {
        if (k > 0) {
            AkB = A.apply(AkB);
            AYkCB = A_Y.apply(AYkCB);
            AYkBY = A_Y.apply(AYkBY);
        }
        const RealMatrix lhs = C.apply(AkB);
        TheoremReport a = make_report("markov k=" + std::to_string(k), tol), b = a;
        detail::compare(a, lhs, AYkCB);
        detail::compare(b, lhs, AYkBY);
        TheoremReport& worst = a.residual >= b.residual ? a : b;
        worst.pass = a.pass && b.pass;
        out.push_back(worst);
    }
    return out;
}

struct ControllabilityResult {
    RealMatrix matrix;  ///< [B AB ... A^{h-1} B]
    Index rank = 0;
};

inline constexpr double kControllabilityRankTolerance = 1e-10;

template <typename Apply>
RealMatrix krylov_blocks(const Apply& apply, const RealMatrix& B, Index horizon) {
    RealMatrix K(B.rows(), B.cols() * horizon);
    RealMatrix block = B;
    for (Index h = 0; h < horizon; ++h) {
        if (h > 0) block = apply(block);
        K.middleCols(h * B.cols(), B.cols()) = block;
    }
    return K;
}

/// Controllability matrix of (A, B) over `horizon` blocks (default: rows(A)).
inline ControllabilityResult controllability(const RealMatrix& A, const RealMatrix& B, Index horizon = 0) {
    detail::require(A.rows() == A.cols(), "controllability: A must be square");
    detail::require(B.rows() == A.rows() && B.cols() >= 1, "controllability: B must have rows(A) rows");
    if (horizon <= 0) horizon = A.rows();
    ControllabilityResult out;
    out.matrix = krylov_blocks([&](const RealMatrix& M) { return RealMatrix(A * M); }, B, horizon);
    out.rank = B.isZero(0.0) ? 0 : numerical_rank(out.matrix, kControllabilityRankTolerance);
    return out;
}

inline ControllabilityResult controllability(const LowRankOperator& A, const RealMatrix& B, Index horizon) {
    detail::require(horizon >= 1, "controllability: horizon must be positive");
    ControllabilityResult out;
    out.matrix = krylov_blocks([&](const RealMatrix& M) { return RealMatrix(A.apply(M)); }, B, horizon);
    out.rank = B.isZero(0.0) ? 0 : numerical_rank(out.matrix, kControllabilityRankTolerance);
    return out;
}

/// C [B AB ...] = [B_Y A_Y B_Y ...] over `horizon` blocks.
inline TheoremReport check_controllability(const LowRankOperator& A, const RealMatrix& B, const LowRankOperator& A_Y,
                                           const RealMatrix& B_Y, const MeasurementOperator& C, Index horizon,
                                           double tol = kIdentityTolerance) {
    auto rep = make_report("controllability", tol);
    const auto full = controllability(A, B, horizon);
    const auto comp = controllability(A_Y, B_Y, horizon);
    detail::compare(rep, C.apply(full.matrix), comp.matrix);
    rep.note = "rank " + std::to_string(full.rank) + " full, " + std::to_string(comp.rank) + " compressed";
    return rep;
}

// ---------------------------------------------------------------------------
// Theorem suite on one data set

struct TheoremSuiteConfig {
    Index r = 2;
    Index r_tilde = 3;
    Index k_max = 5;
    Index horizon = 10;
    double tolerance = kIdentityTolerance;
    bool advisory = false;  ///< e.g. for noisy data
};

struct TheoremSuite {
    std::vector<TheoremReport> reports;
    double assumption1 = 0.0;
    double assumption2 = 0.0;
    double assumption3 = 0.0;

    bool all_pass() const { return !any_failure(reports); }
};

/// Runs DMDc on (X, X', Upsilon) and on (C X, C X', Upsilon) and checks
/// every identity between the two. Theorem 3 and the Markov sequence are
/// collapsed to their worst case.
inline TheoremSuite run_theorem_suite(const SnapshotSet& snaps, const MeasurementOperator& C,
                                      const TheoremSuiteConfig& cfg) {
    snaps.validate();
    detail::require(snaps.inputs.has_value(), "verify: input snapshots are required");
    const auto full = dmdc_unknown_b(snaps, cfg.r, cfg.r_tilde);
    const RealMatrix Y = C.apply(snaps.X), Yp = C.apply(snaps.Xp);
    std::vector<std::string> warnings;
    const auto reg = detail::dmdc_regression(Y, Yp, *snaps.inputs, cfg.r, cfg.r_tilde, warnings);
    const AugmentedSvd& aug = *full.augmented;
    const AugmentedSvd& augY = reg.svd;

    const auto ops = dmdc_operators(snaps.Xp, aug);
    const auto opsY = dmdc_operators(Yp, augY);

    TheoremSuite suite;
    suite.assumption1 = assumption1_score(aug, augY);
    suite.assumption2 = assumption2_score(aug, snaps.Xp);
    suite.assumption3 = assumption3_score(aug, augY);

    auto& R = suite.reports;
    R.push_back(check_lemma1(aug, augY, C, cfg.tolerance));
    R.push_back(check_lemma2(aug, augY, C, cfg.tolerance));
    R.push_back(check_augmented_identity(aug, augY, C, cfg.tolerance));
    R.push_back(check_theorem1(ops.A, opsY.A, C, snaps.Xp, cfg.tolerance));
    R.push_back(check_theorem2(ops.B, opsY.B, C, cfg.tolerance));

    auto worst_of = [](std::vector<TheoremReport> v, const std::string& name) {
        auto it = std::max_element(v.begin(), v.end(),
                                   [](const TheoremReport& a, const TheoremReport& b) { return a.residual < b.residual; });
        TheoremReport rep = *it;
        rep.pass = !any_failure(v);
        rep.note = (rep.note.empty() ? "" : rep.note + "; ") + "worst of " + std::to_string(v.size()) + ": " + it->name;
        rep.name = name;
        return rep;
    };
    R.push_back(worst_of(check_theorem3(full.modes, full.eigenvalues, opsY.A, C, cfg.tolerance), "theorem 3"));
    auto markov = check_markov(ops.A, ops.B, opsY.A, opsY.B, C, std::max<Index>(cfg.k_max, 1), cfg.tolerance);
    R.push_back(markov[1]);
    R.back().name = "theorem 4";
    R.push_back(worst_of(std::vector<TheoremReport>(markov.begin() + 1, markov.end()), "corollary 1"));
    R.push_back(check_controllability(ops.A, ops.B, opsY.A, opsY.B, C, cfg.horizon, cfg.tolerance));

    for (auto& rep : R) {
        rep.advisory = cfg.advisory;
        rep.assumptions["assumption 1"] = suite.assumption1;
        rep.assumptions["assumption 2"] = suite.assumption2;
        rep.assumptions["assumption 3"] = suite.assumption3;
    }
    return suite;
}

// ---------------------------------------------------------------------------
// Pairing and error metrics

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method,
/// O(k^3)). Returns assignment[i] = column matched to row i.
inline std::vector<Index> hungarian(const RealMatrix& cost) {
    detail::require(cost.rows() == cost.cols(), "hungarian: cost matrix must be square");
    const Index k = cost.rows();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(k + 1), 0.0), v(static_cast<std::size_t>(k + 1), 0.0);
    std::vector<Index> p(static_cast<std::size_t>(k + 1), 0), way(static_cast<std::size_t>(k + 1), 0);
    auto at = [](auto& vec, Index i) -> auto& { return vec[static_cast<std::size_t>(i)]; };
    for (Index i = 1; i <= k; ++i) {
        at(p, 0) = i;
        Index j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(k + 1), inf);
        std::vector<char> used(static_cast<std::size_t>(k + 1), 0);
        do {
            at(used, j0) = 1;
            const Index i0 = at(p, j0);
            double delta = inf;
            Index j1 = 0;
            for (Index j = 1; j <= k; ++j) {
                if (at(used, j)) continue;
                const double cur = cost(i0 - 1, j - 1) - at(u, i0) - at(v, j);
                if (cur < at(minv, j)) {
                    at(minv, j) = cur;
                    at(way, j) = j0;
                }
                if (at(minv, j) < delta) {
                    delta = at(minv, j);
                    j1 = j;
                }
            }
            for (Index j = 0; j <= k; ++j) {
                if (at(used, j)) {
                    at(u, at(p, j)) += delta;
                    at(v, j) -= delta;
                } else {
                    at(minv, j) -= delta;
                }
            }
            j0 = j1;
        } while (at(p, j0) != 0);
        do {
            const Index j1 = at(way, j0);
            at(p, j0) = at(p, j1);
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<Index> assignment(static_cast<std::size_t>(k), 0);
    for (Index j = 1; j <= k; ++j)
        if (at(p, j) > 0) assignment[static_cast<std::size_t>(at(p, j) - 1)] = j - 1;
    return assignment;
}

/// Pairs estimated eigenvalues with reference ones by |lambda_ref - lambda_est|.
inline std::vector<Index> pair_by_eigenvalues(const ComplexVector& ref, const ComplexVector& est) {
    detail::require(ref.size() == est.size(), "pairing: eigenvalue counts differ (" + std::to_string(ref.size()) +
                                                  " vs " + std::to_string(est.size()) + ")");
    RealMatrix cost(ref.size(), est.size());
    for (Index i = 0; i < ref.size(); ++i)
        for (Index j = 0; j < est.size(); ++j) cost(i, j) = std::abs(ref(i) - est(j));
    return hungarian(cost);
}

/// Pairs columns by 1 - |cos angle|.
inline std::vector<Index> pair_by_direction(const ComplexMatrix& ref, const ComplexMatrix& est) {
    RealMatrix cost(ref.cols(), est.cols());
    for (Index i = 0; i < ref.cols(); ++i)
        for (Index j = 0; j < est.cols(); ++j) {
            const double d = ref.col(i).norm() * est.col(j).norm();
            cost(i, j) = d > 0.0 ? 1.0 - std::abs(est.col(j).dot(ref.col(i))) / d : 1.0;
        }
    return hungarian(cost);
}

/// ||Phi_ref - Phi_est'||_F / ||Phi_ref||_F, where Phi_est' is Phi_est with
/// columns paired to the reference (by eigenvalue when both spectra are
/// given, else by direction) and each column rescaled by the complex
/// least-squares factor against its reference column.
inline double mode_error(const ComplexMatrix& ref, const ComplexMatrix& est,
                         const std::optional<ComplexVector>& lambda_ref = std::nullopt,
                         const std::optional<ComplexVector>& lambda_est = std::nullopt) {
    detail::require(ref.cols() == est.cols(), "mode_error: column counts differ (" + std::to_string(ref.cols()) +
                                                  " vs " + std::to_string(est.cols()) + ")");
    detail::require(ref.rows() == est.rows(), "mode_error: row counts differ");
    if (ref.cols() == 0) return 0.0;
    const auto pairing = lambda_ref && lambda_est ? pair_by_eigenvalues(*lambda_ref, *lambda_est)
                                                  : pair_by_direction(ref, est);
    double err2 = 0.0;
    for (Index i = 0; i < ref.cols(); ++i) {
        const auto e = est.col(pairing[static_cast<std::size_t>(i)]);
        const double en = e.squaredNorm();
        const Complex alpha = en > 0.0 ? e.dot(ref.col(i)) / en : Complex(0.0, 0.0);
        err2 += (ref.col(i) - alpha * e).squaredNorm();
    }
    const double rn = ref.norm();
    return rn > 0.0 ? std::sqrt(err2) / rn : std::sqrt(err2);
}

/// ||B - B^||_2 / ||B||_2 (absolute when B = 0).
inline double b_error(const RealMatrix& B, const RealMatrix& B_hat) {
    detail::require(B.rows() == B_hat.rows() && B.cols() == B_hat.cols(), "b_error: shapes differ (" +
                                                                              detail::shape(B.rows(), B.cols()) + " vs " +
                                                                              detail::shape(B_hat.rows(), B_hat.cols()) + ")");
    const auto spectral = [](const RealMatrix& M) { return M.size() == 0 ? 0.0 : singular_values(M)(0); };
    const double nb = spectral(B);
    const double d = spectral(B - B_hat);
    return nb > 0.0 ? d / nb : d;
}

/// |lambda - lambda^| / |lambda| per reference eigenvalue, after pairing.
inline std::vector<double> eig_errors(const ComplexVector& ref, const ComplexVector& est) {
    const auto pairing = pair_by_eigenvalues(ref, est);
    std::vector<double> out;
    for (Index i = 0; i < ref.size(); ++i) {
        const double d = std::abs(ref(i) - est(pairing[static_cast<std::size_t>(i)]));
        out.push_back(std::abs(ref(i)) > 0.0 ? d / std::abs(ref(i)) : d);
    }
    return out;
}

struct ErrorMetrics {
    double mode_error = 0.0;
    std::optional<double> b_error;
    std::vector<double> eig_errors;

    double max_eig_error() const {
        return eig_errors.empty() ? 0.0 : *std::max_element(eig_errors.begin(), eig_errors.end());
    }
    double mean_eig_error() const {
        if (eig_errors.empty()) return 0.0;
        double s = 0.0;
        for (double e : eig_errors) s += e;
        return s / static_cast<double>(eig_errors.size());
    }
};

/// Errors of `est` against reference modes, spectrum and (optionally) B.
inline ErrorMetrics compare_models(const ComplexMatrix& Phi_ref, const ComplexVector& lambda_ref, const DmdModel& est,
                                   const std::optional<RealMatrix>& B_ref = std::nullopt) {
    ErrorMetrics m;
    m.mode_error = mode_error(Phi_ref, est.modes, lambda_ref, est.eigenvalues);
    m.eig_errors = eig_errors(lambda_ref, est.eigenvalues);
    if (B_ref && est.B_hat) m.b_error = b_error(*B_ref, *est.B_hat);
    return m;
}

}  // namespace cdmdc
