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

// JSON views of models, reports and metrics. Complex numbers are [re, im]
// pairs; matrices live in CDMC files referenced by relative path; a
// non-finite real (the decay marker of a zero eigenvalue) is written as null.

#include "cdmdc/cdmdc.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

namespace cdmdc::cli {

using nlohmann::json;

inline json real_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline double real_from_json(const json& j) {
    return j.is_null() ? -std::numeric_limits<double>::infinity() : j.get<double>();
}

inline json complex_json(Complex z) { return json::array({real_json(z.real()), real_json(z.imag())}); }

inline Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw FormatError("expected a [re, im] pair");
    return {real_from_json(j[0]), real_from_json(j[1])};
}

inline json vector_json(const ComplexVector& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
    return out;
}

inline ComplexVector vector_from_json(const json& j) {
    ComplexVector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j[i]);
    return v;
}

inline json report_json(const TheoremReport& r) {
    json a = json::object();
    for (const auto& [k, v] : r.assumptions) a[k] = real_json(v);
    return {{"name", r.name},         {"lhs_norm", real_json(r.lhs_norm)},
            {"rhs_norm", real_json(r.rhs_norm)}, {"residual", real_json(r.residual)},
            {"tolerance", r.tolerance}, {"pass", r.pass},
            {"advisory", r.advisory}, {"assumptions", a},
            {"note", r.note}};
}

inline json metrics_json(const ErrorMetrics& m) {
    json out = {{"mode_error", real_json(m.mode_error)}, {"eig_errors", json::array()}};
    for (double e : m.eig_errors) out["eig_errors"].push_back(real_json(e));
    out["b_error"] = m.b_error ? real_json(*m.b_error) : json(nullptr);
    return out;
}

/// Writes the model's matrices next to `json_path` and returns the manifest.
inline json model_json(const DmdModel& model, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    json out;
    out["algorithm"] = model.algorithm;
    out["rank"] = model.r;
    out["dt"] = model.dt;
    out["n"] = model.n();
    out["eigenvalues"] = vector_json(model.eigenvalues);
    out["omega"] = vector_json(model.omega);
    out["amplitudes"] = vector_json(model.amplitudes);
    write_matrix(dir / "modes.cdmc", model.modes);
    write_matrix(dir / "Atilde.cdmc", model.Atilde);
    out["files"] = {{"modes", "modes.cdmc"}, {"Atilde", "Atilde.cdmc"}};
    if (model.B_hat) {
        write_matrix(dir / "B_hat.cdmc", *model.B_hat);
        out["files"]["B_hat"] = "B_hat.cdmc";
    }
    out["warnings"] = model.warnings;
    return out;
}

inline json model_json(const CompressiveModel& model, const std::filesystem::path& dir) {
    json out = model_json(static_cast<const DmdModel&>(model), dir);
    out["branch"] = model.branch;
    out["path"] = std::string(to_string(model.path));
    out["eigenvalues_Y"] = vector_json(model.eigenvalues_Y);
    write_matrix(dir / "modes_Y.cdmc", model.modes_Y);
    out["files"]["modes_Y"] = "modes_Y.cdmc";
    if (model.B_Y) {
        write_matrix(dir / "B_Y.cdmc", *model.B_Y);
        out["files"]["B_Y"] = "B_Y.cdmc";
    }
    out["recovery"] = {{"succeeded", model.recovery_succeeded},
                       {"mode_residuals", model.mode_residuals},
                       {"actuation_residuals", model.actuation_residuals}};
    return out;
}

inline void write_json(const std::filesystem::path& path, const json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

inline json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError("'" + path.string() + "': " + e.what());
    }
}

/// Rebuilds a model from model.json and the matrix files beside it.
inline DmdModel load_model(const std::filesystem::path& json_path) {
    const json j = read_json(json_path);
    const auto dir = json_path.parent_path();
    DmdModel m;
    try {
        m.algorithm = j.at("algorithm").get<std::string>();
        m.dt = j.at("dt").get<double>();
        m.eigenvalues = vector_from_json(j.at("eigenvalues"));
        m.omega = vector_from_json(j.at("omega"));
        m.amplitudes = vector_from_json(j.at("amplitudes"));
        const auto& files = j.at("files");
        auto modes = read_matrix(dir / files.at("modes").get<std::string>());
        m.modes = modes.is_complex ? modes.complex : modes.real.cast<Complex>();
        auto At = read_matrix(dir / files.at("Atilde").get<std::string>());
        m.Atilde = At.is_complex ? At.complex : At.real.cast<Complex>();
        if (files.contains("B_hat")) m.B_hat = load_matrix(dir / files.at("B_hat").get<std::string>());
        m.warnings = j.value("warnings", std::vector<std::string>{});
    } catch (const json::exception& e) {
        throw FormatError("'" + json_path.string() + "': " + e.what());
    }
    m.r = m.eigenvalues.size();
    return m;
}

}  // namespace cdmdc::cli
