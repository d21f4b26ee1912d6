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

#include "cdmdc/random.hpp"
#include "cdmdc/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace cdmdc {

enum class MeasurementKind {
    UniformRandom,    ///< entries U(-1, 1) / sqrt(n)
    GaussianRandom,   ///< entries N(0, 1/p)
    BernoulliRandom,  ///< entries +-1/sqrt(p), equiprobable
    SinglePixel,      ///< p distinct rows of the identity
    Explicit,         ///< user-supplied matrix (e.g. loaded from file)
};

inline std::string_view to_string(MeasurementKind k) {
    switch (k) {
        case MeasurementKind::UniformRandom: return "uniform";
        case MeasurementKind::GaussianRandom: return "gaussian";
        case MeasurementKind::BernoulliRandom: return "bernoulli";
        case MeasurementKind::SinglePixel: return "single-pixel";
        case MeasurementKind::Explicit: return "explicit";
    }
    return "unknown";
}

inline MeasurementKind parse_measurement_kind(std::string_view s) {
    if (s == "uniform") return MeasurementKind::UniformRandom;
    if (s == "gaussian") return MeasurementKind::GaussianRandom;
    if (s == "bernoulli") return MeasurementKind::BernoulliRandom;
    if (s == "single-pixel" || s == "single_pixel" || s == "pixel") return MeasurementKind::SinglePixel;
    throw InvalidArgument("unknown measurement kind '" + std::string(s) +
                          "' (expected uniform, gaussian, bernoulli or single-pixel)");
}

inline constexpr MeasurementKind kRandomMeasurementKinds[] = {
    MeasurementKind::UniformRandom, MeasurementKind::GaussianRandom, MeasurementKind::BernoulliRandom,
    MeasurementKind::SinglePixel};

struct MeasurementSpec {
    MeasurementKind kind = MeasurementKind::GaussianRandom;
    Index p = 1;
    Index n = 1;
    std::uint64_t seed = 0;
};

/// The p x n compression operator C.
///
/// Random kinds derive row i from the stream Rng(seed, i), so rows can be
/// produced independently and a large operator never has to be stored: when
/// p * n exceeds kDenseEntryLimit, apply() regenerates rows block by block.
class MeasurementOperator {
public:
    static constexpr Index kDenseEntryLimit = Index{1} << 25;

    MeasurementOperator() = default;

    explicit MeasurementOperator(const MeasurementSpec& spec) : spec_(spec) {
        detail::require(spec.p >= 1, "measurement: p must be at least 1");
        detail::require(spec.n >= 1, "measurement: n must be at least 1");
        detail::require(spec.p <= spec.n, "measurement: p = " + std::to_string(spec.p) +
                                              " exceeds state dimension n = " + std::to_string(spec.n));
        detail::require(spec.kind != MeasurementKind::Explicit, "measurement: explicit operators use from_matrix()");
        if (spec.kind == MeasurementKind::SinglePixel) {
            indices_ = sample_indices(spec.n, spec.p, spec.seed);
        } else if (spec.p * spec.n <= kDenseEntryLimit) {
            RowBlock rows(spec.p, spec.n);
            fill_rows(0, spec.p, rows);
            dense_ = rows;
        }
    }

    /// Single-pixel operator selecting the given state indices, in order.
    static MeasurementOperator from_indices(Index n, std::vector<Index> indices) {
        detail::require(!indices.empty(), "measurement: empty index set");
        detail::require(static_cast<Index>(indices.size()) <= n, "measurement: more indices than states");
        std::vector<Index> sorted = indices;
        std::sort(sorted.begin(), sorted.end());
        detail::require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                        "measurement: duplicate single-pixel index");
        detail::require(sorted.front() >= 0 && sorted.back() < n, "measurement: index out of range");
        MeasurementOperator op;
        op.spec_ = {MeasurementKind::SinglePixel, static_cast<Index>(indices.size()), n, 0};
        op.indices_ = std::move(indices);
        return op;
    }

    /// Operator backed by an explicit matrix.
    static MeasurementOperator from_matrix(RealMatrix C) {
        detail::require(C.rows() >= 1 && C.cols() >= 1, "measurement: empty matrix");
        detail::require_finite(C, "measurement matrix");
        MeasurementOperator op;
        op.spec_ = {MeasurementKind::Explicit, C.rows(), C.cols(), 0};
        op.dense_ = std::move(C);
        return op;
    }

    const MeasurementSpec& spec() const { return spec_; }
    MeasurementKind kind() const { return spec_.kind; }
    Index rows() const { return spec_.p; }
    Index cols() const { return spec_.n; }
    const std::vector<Index>& indices() const { return indices_; }

    /// Dense p x n matrix (materialized on each call for streamed operators).
    RealMatrix matrix() const {
        if (dense_) return *dense_;
        RealMatrix C = RealMatrix::Zero(spec_.p, spec_.n);
        if (spec_.kind == MeasurementKind::SinglePixel) {
            for (Index i = 0; i < spec_.p; ++i) C(i, indices_[static_cast<std::size_t>(i)]) = 1.0;
        } else {
            RowBlock rows(spec_.p, spec_.n);
            fill_rows(0, spec_.p, rows);
            C = rows;
        }
        return C;
    }

    /// Y = C X.
    template <typename Derived>
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> apply(
        const Eigen::MatrixBase<Derived>& X) const {
        using Out = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
        detail::require(X.rows() == spec_.n, "compress: operator has " + std::to_string(spec_.n) +
                                                 " columns but data has " + std::to_string(X.rows()) + " rows");
        if (spec_.kind == MeasurementKind::SinglePixel) {
            Out Y(spec_.p, X.cols());
            for (Index i = 0; i < spec_.p; ++i) Y.row(i) = X.row(indices_[static_cast<std::size_t>(i)]);
            return Y;
        }
        if (dense_) {
            if constexpr (std::is_same_v<typename Derived::Scalar, double>) return *dense_ * X;
            else return (*dense_).template cast<typename Derived::Scalar>() * X;
        }
        Out Y(spec_.p, X.cols());
        constexpr Index block = 64;
        RowBlock rows_buf;
        for (Index r0 = 0; r0 < spec_.p; r0 += block) {
            const Index nb = std::min(block, spec_.p - r0);
            rows_buf.resize(nb, spec_.n);
            fill_rows(r0, nb, rows_buf);
            if constexpr (std::is_same_v<typename Derived::Scalar, double>)
                Y.middleRows(r0, nb).noalias() = rows_buf * X;
            else
                Y.middleRows(r0, nb).noalias() = rows_buf.template cast<typename Derived::Scalar>() * X;
        }
        return Y;
    }

private:
    using RowBlock = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    static std::vector<Index> sample_indices(Index n, Index p, std::uint64_t seed) {
        // partial Fisher-Yates: the first p slots are a uniform sample without replacement
        std::vector<Index> all(static_cast<std::size_t>(n));
        std::iota(all.begin(), all.end(), Index{0});
        Rng rng(seed, 0);
        for (Index i = 0; i < p; ++i) {
            const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
            std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
        }
        all.resize(static_cast<std::size_t>(p));
        return all;
    }

    // Writes rows [first, first + count) of C into out (count x n).
    template <typename Derived>
    void fill_rows(Index first, Index count, Eigen::MatrixBase<Derived>& out) const {
        const Index n = spec_.n;
        const double inv_sqrt_p = 1.0 / std::sqrt(static_cast<double>(spec_.p));
        const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
        for (Index i = 0; i < count; ++i) {
            Rng rng(spec_.seed, static_cast<std::uint64_t>(first + i));
            switch (spec_.kind) {
                case MeasurementKind::UniformRandom:
                    for (Index j = 0; j < n; ++j) out(i, j) = rng.uniform(-1.0, 1.0) * inv_sqrt_n;
                    break;
                case MeasurementKind::GaussianRandom:
                    for (Index j = 0; j < n; ++j) out(i, j) = rng.normal() * inv_sqrt_p;
                    break;
                case MeasurementKind::BernoulliRandom:
                    for (Index j = 0; j < n; ++j) out(i, j) = rng.coin() ? inv_sqrt_p : -inv_sqrt_p;
                    break;
                default:
                    throw InvalidArgument("measurement: kind has no random rows");
            }
        }
    }

    MeasurementSpec spec_{};
    std::optional<RealMatrix> dense_;
    std::vector<Index> indices_;
};

/// Builds the operator for a spec; deterministic in (kind, p, n, seed).
inline MeasurementOperator build_measurement(const MeasurementSpec& spec) { return MeasurementOperator(spec); }

/// Y = C X. Single-pixel operators select rows without forming the product.
template <typename Derived>
auto compress(const MeasurementOperator& C, const Eigen::MatrixBase<Derived>& X) {
    return C.apply(X);
}

}  // namespace cdmdc
