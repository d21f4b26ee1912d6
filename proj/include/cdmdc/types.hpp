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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdmdc {

using Index = Eigen::Index;
using Complex = std::complex<double>;

/// Dense real matrix, column-major.
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments: wrong shapes, ranks out of range, missing inputs.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Numerical breakdown: degenerate rank, failed recovery.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Malformed or unreadable data files.
class FormatError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline std::string shape(Index rows, Index cols) {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < m.rows(); ++i) {
            using std::isfinite;
            const auto v = m(i, j);
            bool ok;
            if constexpr (Eigen::NumTraits<typename Derived::Scalar>::IsComplex) {
                ok = isfinite(v.real()) && isfinite(v.imag());
            } else {
                ok = isfinite(v);
            }
            if (!ok) {
                throw InvalidArgument(std::string(what) + ": non-finite entry at (" +
                                      std::to_string(i) + ", " + std::to_string(j) + ")");
            }
        }
    }
}

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidArgument(msg);
}

}  // namespace detail
}  // namespace cdmdc
