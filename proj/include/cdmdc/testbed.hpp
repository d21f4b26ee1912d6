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

// Synthetic low-rank plants lifted into a DCT-sparse high-dimensional state,
// forcing and noise generators, and the matrix file formats.

#include "cdmdc/dmd.hpp"
#include "cdmdc/numerics.hpp"
#include "cdmdc/random.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace cdmdc {

/// x~_{k+1} = A~ x~_k + B~ u_k in k dimensions, observed as x = P x~.
struct LowRankPlant {
    RealMatrix Atilde;  ///< k x k
    RealMatrix Btilde;  ///< k x q
    RealMatrix P;       ///< n x k
    double dt = 0.1;

    Index n() const { return P.rows(); }
    Index k() const { return Atilde.rows(); }
    Index q() const { return Btilde.cols(); }

    void validate() const {
        detail::require(Atilde.rows() >= 1 && Atilde.rows() == Atilde.cols(), "plant: A~ must be square");
        detail::require(Btilde.rows() == k() && Btilde.cols() >= 1, "plant: B~ must have k rows");
        detail::require(P.cols() == k() && P.rows() >= k(), "plant: P must be n x k with n >= k");
        detail::require(dt > 0.0, "plant: dt must be positive");
        detail::require(numerical_rank(P) == k(), "plant: columns of P are linearly dependent");
    }

    RealMatrix B() const { return P * Btilde; }
};

/// Default reduced system: a stable controllable spiral.
inline RealMatrix spiral_A() { return (RealMatrix(2, 2) << 0.9, 0.2, -0.1, 0.9).finished(); }
inline RealMatrix spiral_B() { return (RealMatrix(2, 1) << 0.1, 0.01).finished(); }
inline RealVector spiral_x0() { return (RealVector(2) << 0.25, 0.25).finished(); }

/// Wavenumbers and per-column magnitudes shared by the default lifting.
inline const std::vector<Index>& default_wavenumbers() {
    static const std::vector<Index> k{4, 11, 19, 33};
    return k;
}
inline const std::vector<std::vector<double>>& default_magnitudes() {
    static const std::vector<std::vector<double>> m{{0.8, 0.5, 0.3, 0.1}, {-0.3, 0.2, 0.5, -0.1}};
    return m;
}

/// Lifting modes P: column j = Psi s_j, where s_j is nonzero exactly at
/// `wavenumbers` with values magnitudes[j]; each column is normalized.
inline RealMatrix build_lifting_modes(Index n, const std::vector<Index>& wavenumbers,
                                      const std::vector<std::vector<double>>& magnitudes) {
    detail::require(n >= 1, "lifting: n must be positive");
    detail::require(!wavenumbers.empty(), "lifting: K_P must be at least 1");
    detail::require(!magnitudes.empty(), "lifting: at least one column is required");
    std::set<Index> seen;
    for (Index w : wavenumbers) {
        detail::require(w >= 0 && w < n, "lifting: wavenumber " + std::to_string(w) + " out of range for n = " +
                                             std::to_string(n));
        detail::require(seen.insert(w).second, "lifting: duplicate wavenumber " + std::to_string(w));
    }
    RealMatrix P = RealMatrix::Zero(n, static_cast<Index>(magnitudes.size()));
    for (std::size_t j = 0; j < magnitudes.size(); ++j) {
        detail::require(magnitudes[j].size() == wavenumbers.size(),
                        "lifting: column " + std::to_string(j) + " needs " + std::to_string(wavenumbers.size()) +
                            " magnitudes");
        for (std::size_t t = 0; t < wavenumbers.size(); ++t) {
            detail::require(magnitudes[j][t] != 0.0, "lifting: zero magnitude would drop a wavenumber");
            P.col(static_cast<Index>(j)) += magnitudes[j][t] * dct_column(n, wavenumbers[t]);
        }
        P.col(static_cast<Index>(j)).normalize();
    }
    return P;
}

/// k lifting modes with K_P random wavenumbers each (drawn from [1, max_wavenumber))
/// and N(0, 1) magnitudes; columns may use different supports.
inline RealMatrix random_lifting_modes(Index n, Index k, Index K_P, Index max_wavenumber, std::uint64_t seed) {
    detail::require(max_wavenumber > K_P && max_wavenumber <= n, "lifting: wavenumber range too small");
    Rng rng(seed, 0x11f7);
    RealMatrix P(n, k);
    for (Index j = 0; j < k; ++j) {
        std::set<Index> support;
        while (static_cast<Index>(support.size()) < K_P)
            support.insert(1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(max_wavenumber - 1))));
        RealVector col = RealVector::Zero(n);
        for (Index w : support) {
            double a = rng.normal();
            while (std::abs(a) < 0.1) a = rng.normal();
            col += a * dct_column(n, w);
        }
        P.col(j) = col.normalized();
    }
    return P;
}

/// The default plant: spiral dynamics lifted to n = 1024 with K_P = 4.
inline LowRankPlant default_plant(Index n = 1024) {
    return {spiral_A(), spiral_B(), build_lifting_modes(n, default_wavenumbers(), default_magnitudes()), 0.1};
}

/// i.i.d. N(0, sigma^2) inputs, q x steps.
inline RealMatrix gaussian_forcing(Index q, Index steps, std::uint64_t seed, double sigma = 1.0) {
    detail::require(q >= 1 && steps >= 0, "forcing: bad dimensions");
    Rng rng(seed, 0xf0c1);
    RealMatrix U(q, steps);
    for (Index k = 0; k < steps; ++k)
        for (Index i = 0; i < q; ++i) U(i, k) = sigma * rng.normal();
    return U;
}

enum class ActuationKind {
    InSpan,         ///< B = P B~
    DctComplement,  ///< DCT-sparse, supported off the wavenumbers of P
    DenseRandom,    ///< Gaussian entries
};

inline std::string_view to_string(ActuationKind k) {
    switch (k) {
        case ActuationKind::InSpan: return "in-span";
        case ActuationKind::DctComplement: return "dct-complement";
        case ActuationKind::DenseRandom: return "dense";
    }
    return "unknown";
}

inline ActuationKind parse_actuation_kind(std::string_view s) {
    if (s == "in-span" || s == "span") return ActuationKind::InSpan;
    if (s == "dct-complement" || s == "complement") return ActuationKind::DctComplement;
    if (s == "dense") return ActuationKind::DenseRandom;
    throw InvalidArgument("unknown actuation kind '" + std::string(s) + "' (expected in-span, dct-complement or dense)");
}

/// Actuation matrix of the given kind, scaled to the spectral norm of P B~.
/// The complement kind uses K_B wavenumbers that avoid those of P's DCT
/// support, so B is orthogonal to span(P).
inline RealMatrix build_actuation(const LowRankPlant& plant, ActuationKind kind, std::uint64_t seed, Index K_B = 4) {
    const RealMatrix Bspan = plant.B();
    if (kind == ActuationKind::InSpan) return Bspan;
    const Index n = plant.n();
    const double target = Bspan.norm();
    Rng rng(seed, 0xacc7);
    RealMatrix B(n, plant.q());
    if (kind == ActuationKind::DenseRandom) {
        for (Index j = 0; j < B.cols(); ++j)
            for (Index i = 0; i < n; ++i) B(i, j) = rng.normal();
    } else {
        const RealMatrix coeffs = dct_basis(n).transpose() * plant.P;
        std::vector<Index> free;
        for (Index w = 1; w < n; ++w)
            if (coeffs.row(w).cwiseAbs().maxCoeff() <= 1e-12) free.push_back(w);
        detail::require(static_cast<Index>(free.size()) >= K_B, "actuation: not enough free wavenumbers");
        B.setZero();
        for (Index j = 0; j < B.cols(); ++j) {
            std::vector<Index> pool = free;
            for (Index t = 0; t < K_B; ++t) {
                const auto pick = static_cast<std::size_t>(t) +
                                  static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(pool.size()) -
                                                                     static_cast<std::uint64_t>(t)));
                std::swap(pool[static_cast<std::size_t>(t)], pool[pick]);
                double a = rng.normal();
                while (std::abs(a) < 0.1) a = rng.normal();
                B.col(j) += a * dct_column(n, pool[static_cast<std::size_t>(t)]);
            }
        }
    }
    const double nb = B.norm();
    if (nb > 0.0) B *= target / nb;
    return B;
}

/// Output of one simulated trajectory.
struct SyntheticRun {
    SnapshotSet snapshots;     ///< X, X', Upsilon
    RealMatrix sequence;       ///< n x (m + 1), x_0 ... x_m
    RealMatrix reduced;        ///< k x (m + 1) when the state stays in span(P)
    RealMatrix inputs;         ///< q x m
    RealMatrix B_true;         ///< n x q
    ComplexMatrix Phi_true;    ///< n x k, unit-norm, phase-normalized
    ComplexVector lambda_true; ///< eigenvalues of A~, library order
    std::uint64_t seed = 0;
};

/// Simulates `snapshots` states (m = snapshots - 1 transitions) driven by
/// `inputs` (q x >= m). With B = P B~ the reduced state is iterated and lifted;
/// with another B the full state follows x_{k+1} = P A~ P^+ x_k + B u_k.
inline SyntheticRun simulate(const LowRankPlant& plant, const RealVector& x0_reduced, const RealMatrix& inputs,
                             Index snapshots, const std::optional<RealMatrix>& B_override = std::nullopt,
                             std::uint64_t seed = 0) {
    plant.validate();
    detail::require(snapshots >= 2, "simulate: at least two snapshots are required");
    const Index m = snapshots - 1;
    detail::require(x0_reduced.size() == plant.k(), "simulate: x0 must have k entries");
    detail::require(inputs.rows() == plant.q() && inputs.cols() >= m,
                    "simulate: inputs must be " + detail::shape(plant.q(), m) + " or wider");

    SyntheticRun run;
    run.seed = seed;
    run.inputs = inputs.leftCols(m);
    if (!B_override) {
        run.reduced.resize(plant.k(), snapshots);
        run.reduced.col(0) = x0_reduced;
        for (Index t = 0; t < m; ++t)
            run.reduced.col(t + 1) = plant.Atilde * run.reduced.col(t) + plant.Btilde * run.inputs.col(t);
        run.sequence = plant.P * run.reduced;
        run.B_true = plant.B();
    } else {
        const RealMatrix& B = *B_override;
        detail::require(B.rows() == plant.n() && B.cols() == plant.q(), "simulate: B must be n x q");
        const RealMatrix Pplus = pseudoinverse(plant.P);
        const RealMatrix PA = plant.P * plant.Atilde;
        run.sequence.resize(plant.n(), snapshots);
        run.sequence.col(0) = plant.P * x0_reduced;
        for (Index t = 0; t < m; ++t)
            run.sequence.col(t + 1) = PA * (Pplus * run.sequence.col(t)) + B * run.inputs.col(t);
        run.B_true = B;
    }
    auto ed = eig(plant.Atilde);
    run.lambda_true = ed.values;
    run.Phi_true = plant.P.cast<Complex>() * ed.vectors;
    normalize_columns(run.Phi_true);
    run.snapshots = SnapshotSet::from_sequence(run.sequence, run.inputs, plant.dt);
    return run;
}

/// Default experiment: spiral plant, unit Gaussian forcing, 301 snapshots.
inline SyntheticRun default_run(std::uint64_t seed = 0, Index n = 1024, Index snapshots = 301) {
    const auto plant = default_plant(n);
    return simulate(plant, spiral_x0(), gaussian_forcing(plant.q(), snapshots - 1, seed), snapshots, std::nullopt,
                    seed);
}

/// Adds i.i.d. N(0, sigma^2) noise with sigma = eta * max_i std(row i).
inline RealMatrix add_noise(const RealMatrix& X, double eta, std::uint64_t seed, std::uint64_t stream = 0) {
    detail::require(eta >= 0.0, "add_noise: eta must be nonnegative");
    if (eta == 0.0 || X.size() == 0) return X;
    double max_std = 0.0;
    for (Index i = 0; i < X.rows(); ++i) {
        const double mean = X.row(i).mean();
        const double var = (X.row(i).array() - mean).square().sum() / static_cast<double>(X.cols());
        max_std = std::max(max_std, std::sqrt(var));
    }
    const double sigma = eta * max_std;
    Rng rng(seed, stream ^ 0x9015eULL);
    RealMatrix out = X;
    for (Index j = 0; j < X.cols(); ++j)
        for (Index i = 0; i < X.rows(); ++i) out(i, j) += sigma * rng.normal();
    return out;
}

// ---------------------------------------------------------------------------
// Matrix files
//
// Binary: "CDMC" | u16 version (1) | u8 dtype (0 real64, 1 complex128) |
//         u8 reserved | u64 rows | u64 cols | payload, column-major, little-endian.
// CSV:    one row per spatial index, one column per snapshot, no header.

enum class MatrixFormat { Binary, Csv };

inline MatrixFormat format_from_path(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".csv" ? MatrixFormat::Csv : MatrixFormat::Binary;
}

struct MatrixFile {
    bool is_complex = false;
    RealMatrix real;
    ComplexMatrix complex;
};

namespace detail {

inline constexpr std::size_t kHeaderBytes = 24;
inline constexpr std::uint16_t kFormatVersion = 1;

template <typename T>
void put_le(std::string& buf, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    buf.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(const char* p) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T v;
    std::memcpy(&v, bytes, sizeof(T));
    return v;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& data) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write '" + path.string() + "'");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw FormatError("write failed for '" + path.string() + "'");
}

inline std::string header(std::uint8_t dtype, Index rows, Index cols) {
    std::string buf = "CDMC";
    put_le<std::uint16_t>(buf, kFormatVersion);
    put_le<std::uint8_t>(buf, dtype);
    put_le<std::uint8_t>(buf, 0);
    put_le<std::uint64_t>(buf, static_cast<std::uint64_t>(rows));
    put_le<std::uint64_t>(buf, static_cast<std::uint64_t>(cols));
    return buf;
}

inline void reject_non_finite(double v, Index i, Index j, const std::filesystem::path& path) {
    if (!std::isfinite(v))
        throw FormatError("'" + path.string() + "': non-finite entry at row " + std::to_string(i) + ", column " +
                          std::to_string(j));
}

}  // namespace detail

inline void write_matrix(const std::filesystem::path& path, const RealMatrix& M) {
    std::string buf = detail::header(0, M.rows(), M.cols());
    buf.reserve(detail::kHeaderBytes + static_cast<std::size_t>(M.size()) * 8);
    for (Index k = 0; k < M.size(); ++k) detail::put_le<double>(buf, M.data()[k]);
    detail::write_file(path, buf);
}

inline void write_matrix(const std::filesystem::path& path, const ComplexMatrix& M) {
    std::string buf = detail::header(1, M.rows(), M.cols());
    buf.reserve(detail::kHeaderBytes + static_cast<std::size_t>(M.size()) * 16);
    for (Index k = 0; k < M.size(); ++k) {
        detail::put_le<double>(buf, M.data()[k].real());
        detail::put_le<double>(buf, M.data()[k].imag());
    }
    detail::write_file(path, buf);
}

inline MatrixFile read_matrix(const std::filesystem::path& path) {
    const std::string data = detail::read_file(path);
    const auto fail = [&](const std::string& msg) { return FormatError("'" + path.string() + "': " + msg); };
    if (data.size() < detail::kHeaderBytes)
        throw fail("truncated header: expected " + std::to_string(detail::kHeaderBytes) + " bytes, found " +
                   std::to_string(data.size()));
    if (data.compare(0, 4, "CDMC") != 0) throw fail("bad magic bytes (not a CDMC matrix file)");
    const auto version = detail::get_le<std::uint16_t>(data.data() + 4);
    if (version != detail::kFormatVersion) throw fail("unsupported version " + std::to_string(version));
    const auto dtype = detail::get_le<std::uint8_t>(data.data() + 6);
    if (dtype > 1) throw fail("unknown dtype " + std::to_string(dtype));
    const auto rows = detail::get_le<std::uint64_t>(data.data() + 8);
    const auto cols = detail::get_le<std::uint64_t>(data.data() + 16);
    const std::uint64_t width = dtype == 0 ? 8 : 16;
    if (rows == 0 || cols == 0) throw fail("empty matrix (" + std::to_string(rows) + "x" + std::to_string(cols) + ")");
    if (rows > (std::uint64_t{1} << 40) / cols) throw fail("implausible dimensions");
    const std::uint64_t expected = detail::kHeaderBytes + rows * cols * width;
    if (data.size() != expected)
        throw fail("size mismatch: header declares " + std::to_string(rows) + "x" + std::to_string(cols) +
                   " so expected " + std::to_string(expected) + " bytes, found " + std::to_string(data.size()));

    MatrixFile out;
    const auto R = static_cast<Index>(rows), Cn = static_cast<Index>(cols);
    const char* p = data.data() + detail::kHeaderBytes;
    if (dtype == 0) {
        out.real.resize(R, Cn);
        for (Index j = 0; j < Cn; ++j)
            for (Index i = 0; i < R; ++i, p += 8) {
                out.real(i, j) = detail::get_le<double>(p);
                detail::reject_non_finite(out.real(i, j), i, j, path);
            }
    } else {
        out.is_complex = true;
        out.complex.resize(R, Cn);
        for (Index j = 0; j < Cn; ++j)
            for (Index i = 0; i < R; ++i, p += 16) {
                const double re = detail::get_le<double>(p), im = detail::get_le<double>(p + 8);
                detail::reject_non_finite(re, i, j, path);
                detail::reject_non_finite(im, i, j, path);
                out.complex(i, j) = Complex(re, im);
            }
    }
    return out;
}

inline void write_csv(const std::filesystem::path& path, const RealMatrix& M) {
    std::string buf;
    char num[32];
    for (Index i = 0; i < M.rows(); ++i) {
        for (Index j = 0; j < M.cols(); ++j) {
            if (j) buf.push_back(',');
            const auto res = std::to_chars(num, num + sizeof(num), M(i, j));
            buf.append(num, res.ptr);
        }
        buf.push_back('\n');
    }
    detail::write_file(path, buf);
}

inline RealMatrix read_csv(const std::filesystem::path& path) {
    const std::string data = detail::read_file(path);
    std::vector<std::vector<double>> rows;
    std::size_t pos = 0;
    Index line_no = 0;
    while (pos < data.size()) {
        std::size_t end = data.find('\n', pos);
        if (end == std::string::npos) end = data.size();
        std::string_view line(data.data() + pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
        std::vector<double> row;
        std::size_t start = 0;
        for (;;) {
            std::size_t comma = line.find(',', start);
            std::string_view cell = line.substr(start, comma == std::string_view::npos ? line.size() - start : comma - start);
            while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
            while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
            if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            const auto col = static_cast<Index>(row.size());
            if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size())
                throw FormatError("'" + path.string() + "': cannot parse '" + std::string(cell) + "' at row " +
                                  std::to_string(rows.size()) + ", column " + std::to_string(col) + " (line " +
                                  std::to_string(line_no) + ")");
            detail::reject_non_finite(v, static_cast<Index>(rows.size()), col, path);
            row.push_back(v);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw FormatError("'" + path.string() + "': row " + std::to_string(rows.size()) + " has " +
                              std::to_string(row.size()) + " columns, expected " + std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FormatError("'" + path.string() + "': no data");
    RealMatrix M(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < M.rows(); ++i)
        for (Index j = 0; j < M.cols(); ++j) M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return M;
}

/// Reads a real matrix in either format.
inline RealMatrix load_matrix(const std::filesystem::path& path, std::optional<MatrixFormat> format = std::nullopt) {
    if (format.value_or(format_from_path(path)) == MatrixFormat::Csv) return read_csv(path);
    auto f = read_matrix(path);
    if (f.is_complex) throw FormatError("'" + path.string() + "': expected a real matrix, found complex");
    return std::move(f.real);
}

inline void save_matrix(const std::filesystem::path& path, const RealMatrix& M,
                        std::optional<MatrixFormat> format = std::nullopt) {
    if (format.value_or(format_from_path(path)) == MatrixFormat::Csv)
        write_csv(path, M);
    else
        write_matrix(path, M);
}

/// A snapshot file holds the sequence x_0 ... x_m as columns.
inline SnapshotSet load_snapshots(const std::filesystem::path& path, std::optional<MatrixFormat> format = std::nullopt,
                                  std::optional<RealMatrix> inputs = std::nullopt, double dt = 1.0) {
    return SnapshotSet::from_sequence(load_matrix(path, format), std::move(inputs), dt);
}

/// Writes the sequence [X, last column of X']. The set must come from a single
/// trajectory (X' equal to X shifted by one column).
inline void save_snapshots(const SnapshotSet& set, const std::filesystem::path& path,
                           std::optional<MatrixFormat> format = std::nullopt) {
    set.validate();
    const Index m = set.m();
    if (m > 1 && set.Xp.leftCols(m - 1) != set.X.rightCols(m - 1))
        throw InvalidArgument("save_snapshots: X' is not X shifted by one snapshot");
    RealMatrix seq(set.n(), m + 1);
    seq.leftCols(m) = set.X;
    seq.col(m) = set.Xp.col(m - 1);
    save_matrix(path, seq, format);
}

}  // namespace cdmdc
