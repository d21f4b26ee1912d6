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

// Sweep configuration: one `key = value` per line, `#` starts a comment,
// lists are comma separated. Unknown keys are rejected.
//
//   axis          compression | noise | measurement
//   values        comma list (ratios p/n, noise levels, or measurement kinds)
//   realizations  ensemble size per point (>= 1)
//   seed          master seed
//   n, snapshots  synthetic plant size and snapshot count
//   actuation     in-span | dct-complement | dense
//   algorithm     dmd | dmdc | cdmd | cdmdc
//   path          projection | sensing
//   b_known       true | false
//   measurement   kind used when the axis is not `measurement`
//   p             rows of C when the axis is not `compression`
//   noise         noise level when the axis is not `noise`
//   rank, rank_tilde, sparsity, sparsity_b, threads
//   snapshots_file, inputs_file   ingest data instead of synthesizing

#include "cdmdc/cdmdc.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cdmdc::cli {

enum class SweepAxis { Compression, Noise, Measurement };

struct SweepConfig {
    SweepAxis axis = SweepAxis::Compression;
    std::vector<std::string> values;
    Index realizations = 1;
    std::uint64_t seed = 0;
    Index n = 1024;
    Index snapshots = 301;
    ActuationKind actuation = ActuationKind::InSpan;
    std::string algorithm = "cdmdc";
    RecoveryPath path = RecoveryPath::CompressedProjection;
    bool b_known = false;
    MeasurementKind measurement = MeasurementKind::GaussianRandom;
    Index p = 128;
    double noise = 0.0;
    Index rank = 2;
    Index rank_tilde = 3;
    Index sparsity = 4;
    std::optional<Index> sparsity_b;
    Index threads = 0;  ///< 0: hardware concurrency
    std::optional<std::filesystem::path> snapshots_file;
    std::optional<std::filesystem::path> inputs_file;
};

inline std::string_view to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::Compression: return "compression";
        case SweepAxis::Noise: return "noise";
        case SweepAxis::Measurement: return "measurement";
    }
    return "unknown";
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        const auto item = trim(s.substr(pos, comma == std::string_view::npos ? s.npos : comma - pos));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

template <typename T>
T parse_number(const std::string& v, const std::string& key, int line) {
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw InvalidArgument("config line " + std::to_string(line) + ": '" + key + "' expects a number, got '" + v +
                              "'");
    return out;
}

inline bool parse_bool(const std::string& v, const std::string& key, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw InvalidArgument("config line " + std::to_string(line) + ": '" + key + "' expects true or false");
}

}  // namespace detail

inline RecoveryPath parse_recovery_path(std::string_view s) {
    if (s == "projection" || s == "compressed") return RecoveryPath::CompressedProjection;
    if (s == "sensing" || s == "compressed-sensing") return RecoveryPath::CompressedSensing;
    throw InvalidArgument("unknown recovery path '" + std::string(s) + "' (expected projection or sensing)");
}

inline SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig cfg;
    bool have_axis = false;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string text = detail::trim(raw);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("config line " + std::to_string(line) + ": expected key = value");
        const std::string key = detail::trim(std::string_view(text).substr(0, eq));
        const std::string val = detail::trim(std::string_view(text).substr(eq + 1));
        auto integer = [&] { return detail::parse_number<Index>(val, key, line); };

        if (key == "axis") {
            if (val == "compression") cfg.axis = SweepAxis::Compression;
            else if (val == "noise") cfg.axis = SweepAxis::Noise;
            else if (val == "measurement") cfg.axis = SweepAxis::Measurement;
            else throw InvalidArgument("config line " + std::to_string(line) + ": unknown axis '" + val + "'");
            have_axis = true;
        } else if (key == "values") {
            cfg.values = detail::split_list(val);
        } else if (key == "realizations") {
            cfg.realizations = integer();
        } else if (key == "seed") {
            cfg.seed = detail::parse_number<std::uint64_t>(val, key, line);
        } else if (key == "n") {
            cfg.n = integer();
        } else if (key == "snapshots") {
            cfg.snapshots = integer();
        } else if (key == "actuation") {
            cfg.actuation = parse_actuation_kind(val);
        } else if (key == "algorithm") {
            if (val != "dmd" && val != "dmdc" && val != "cdmd" && val != "cdmdc")
                throw InvalidArgument("config line " + std::to_string(line) + ": unknown algorithm '" + val + "'");
            cfg.algorithm = val;
        } else if (key == "path") {
            cfg.path = parse_recovery_path(val);
        } else if (key == "b_known") {
            cfg.b_known = detail::parse_bool(val, key, line);
        } else if (key == "measurement") {
            cfg.measurement = parse_measurement_kind(val);
        } else if (key == "p") {
            cfg.p = integer();
        } else if (key == "noise") {
            cfg.noise = detail::parse_number<double>(val, key, line);
        } else if (key == "rank") {
            cfg.rank = integer();
        } else if (key == "rank_tilde") {
            cfg.rank_tilde = integer();
        } else if (key == "sparsity") {
            cfg.sparsity = integer();
        } else if (key == "sparsity_b") {
            cfg.sparsity_b = integer();
        } else if (key == "threads") {
            cfg.threads = integer();
        } else if (key == "snapshots_file") {
            cfg.snapshots_file = val;
        } else if (key == "inputs_file") {
            cfg.inputs_file = val;
        } else {
            throw InvalidArgument("config line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
    }
    if (!have_axis) throw InvalidArgument("sweep config: no axis declared");
    if (cfg.values.empty()) throw InvalidArgument("sweep config: empty sweep axis");
    if (cfg.realizations < 1) throw InvalidArgument("sweep config: realizations must be at least 1");
    if (cfg.snapshots < 3) throw InvalidArgument("sweep config: snapshots must be at least 3");
    if (cfg.snapshots_file && !std::filesystem::exists(*cfg.snapshots_file))
        throw InvalidArgument("sweep config: snapshots_file '" + cfg.snapshots_file->string() + "' does not exist");
    if (cfg.inputs_file && !std::filesystem::exists(*cfg.inputs_file))
        throw InvalidArgument("sweep config: inputs_file '" + cfg.inputs_file->string() + "' does not exist");
    for (const auto& v : cfg.values) {
        if (cfg.axis == SweepAxis::Measurement) {
            parse_measurement_kind(v);
        } else {
            const double x = detail::parse_number<double>(v, "values", 0);
            if (cfg.axis == SweepAxis::Compression && !(x > 0.0 && x <= 1.0))
                throw InvalidArgument("sweep config: compression ratio " + v + " is outside (0, 1]");
            if (cfg.axis == SweepAxis::Noise && !(x >= 0.0))
                throw InvalidArgument("sweep config: noise level " + v + " is negative");
        }
    }
    return cfg;
}

inline SweepConfig parse_sweep_config(const std::string& text) {
    std::istringstream in(text);
    return parse_sweep_config(in);
}

inline SweepConfig load_sweep_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open sweep config '" + path.string() + "'");
    return parse_sweep_config(in);
}

}  // namespace cdmdc::cli
