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

#include "cli/config.hpp"
#include "cli/serialization.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <thread>

namespace cdmdc::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3, kVerification = 4 };

inline fs::path default_output_dir() {
    if (const char* env = std::getenv("CDMDC_OUTPUT_DIR"); env && *env) return env;
    return "cdmdc-out";
}

/// Measurement operator from a matrix file, or built from a spec.
struct MeasurementChoice {
    std::optional<fs::path> file;
    std::string kind = "gaussian";
    Index p = 0;
    std::uint64_t seed = 0;

    bool given() const { return file.has_value() || p > 0; }

    MeasurementOperator build(Index n) const {
        if (file) {
            auto C = load_matrix(*file);
            if (n > 0 && C.cols() != n)
                throw InvalidArgument("measurement file '" + file->string() + "' has " + std::to_string(C.cols()) +
                                      " columns, the state has n = " + std::to_string(n));
            return MeasurementOperator::from_matrix(std::move(C));
        }
        if (p <= 0) throw InvalidArgument("a measurement operator needs --C or --p");
        return build_measurement({parse_measurement_kind(kind), p, n, seed});
    }
};

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
    fs::path out;
    Index n = 1024;
    Index snapshots = 301;
    std::uint64_t seed = 0;
    double dt = 0.1;
    std::string actuation = "in-span";
    double noise = 0.0;
    MeasurementChoice measurement;
};

inline json spectrum_json(const ComplexVector& lambda, double dt) {
    return {{"eigenvalues", vector_json(lambda)}, {"omega", vector_json(continuous_spectrum(lambda, dt))}};
}

inline int cmd_synth(const SynthOptions& o, std::ostream& log) {
    if (o.snapshots < 2) throw InvalidArgument("synth: at least two snapshots are required");
    auto plant = default_plant(o.n);
    plant.dt = o.dt;
    const auto kind = parse_actuation_kind(o.actuation);
    const RealMatrix U = gaussian_forcing(plant.q(), o.snapshots - 1, o.seed);
    std::optional<RealMatrix> B;
    if (kind != ActuationKind::InSpan) B = build_actuation(plant, kind, o.seed);
    const auto run = simulate(plant, spiral_x0(), U, o.snapshots, B, o.seed);
    const RealMatrix X = o.noise > 0.0 ? add_noise(run.sequence, o.noise, o.seed) : run.sequence;

    fs::create_directories(o.out);
    write_matrix(o.out / "X.cdmc", X);
    write_matrix(o.out / "U.cdmc", run.inputs);
    write_matrix(o.out / "B_true.cdmc", run.B_true);
    write_matrix(o.out / "Phi_true.cdmc", run.Phi_true);

    json truth = spectrum_json(run.lambda_true, plant.dt);
    truth["n"] = plant.n();
    truth["snapshots"] = o.snapshots;
    truth["q"] = plant.q();
    truth["dt"] = plant.dt;
    truth["seed"] = o.seed;
    truth["actuation"] = std::string(to_string(kind));
    truth["noise"] = o.noise;
    truth["files"] = {{"snapshots", "X.cdmc"}, {"inputs", "U.cdmc"}, {"B", "B_true.cdmc"}, {"modes", "Phi_true.cdmc"}};
    if (o.measurement.given()) {
        const auto C = o.measurement.build(plant.n());
        write_matrix(o.out / "Y.cdmc", RealMatrix(C.apply(X)));
        write_matrix(o.out / "C.cdmc", C.matrix());
        truth["files"]["measurements"] = "Y.cdmc";
        truth["files"]["C"] = "C.cdmc";
        truth["measurement"] = {{"kind", std::string(to_string(C.kind()))}, {"p", C.rows()}, {"seed", o.measurement.seed}};
    }
    write_json(o.out / "truth.json", truth);
    log << "wrote " << X.rows() << "x" << X.cols() << " snapshots to " << o.out.string() << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------
// run

struct RunOptions {
    std::string algorithm;
    std::optional<fs::path> snapshots, inputs, B, measurements, truth;
    MeasurementChoice measurement;
    std::string path = "auto";  ///< auto: projection when --snapshots is given
    Index rank = 0;
    Index rank_tilde = 0;
    Index sparsity = 4;
    std::optional<Index> sparsity_b;
    double dt = 0.1;
    fs::path out;
};

struct Truth {
    ComplexMatrix modes;
    ComplexVector eigenvalues;
    std::optional<RealMatrix> B;
};

inline Truth load_truth(const fs::path& path) {
    const json j = read_json(path);
    const auto dir = path.parent_path();
    Truth t;
    try {
        t.eigenvalues = vector_from_json(j.at("eigenvalues"));
        const auto& files = j.at("files");
        auto modes = read_matrix(dir / files.at("modes").get<std::string>());
        t.modes = modes.is_complex ? modes.complex : modes.real.cast<Complex>();
        if (files.contains("B")) t.B = load_matrix(dir / files.at("B").get<std::string>());
    } catch (const json::exception& e) {
        throw FormatError("'" + path.string() + "': " + e.what());
    }
    return t;
}

inline json assumption_json(const SnapshotSet& full, const AugmentedSvd& augY, Index r) {
    const auto ref = dmdc_unknown_b(full, r, augY.Vtilde.cols());
    const auto& aug = *ref.augmented;
    if (aug.Vtilde.cols() != augY.Vtilde.cols()) return json(nullptr);
    return {{"assumption 1", real_json(assumption1_score(aug, augY))},
            {"assumption 2", real_json(assumption2_score(aug, full.Xp))},
            {"assumption 3", real_json(assumption3_score(aug, augY))}};
}

inline int cmd_run(const RunOptions& o, std::ostream& log) {
    const auto& alg = o.algorithm;
    if (alg != "dmd" && alg != "dmdc" && alg != "cdmd" && alg != "cdmdc")
        throw InvalidArgument("run: unknown algorithm '" + alg + "' (expected dmd, dmdc, cdmd or cdmdc)");
    const bool compressed = alg == "cdmd" || alg == "cdmdc";
    const bool controlled = alg == "dmdc" || alg == "cdmdc";
    if (!compressed && !o.snapshots) throw InvalidArgument("run " + alg + ": --snapshots is required");
    if (compressed && !o.measurements)
        throw InvalidArgument("run " + alg + ": --measurements (the compressed snapshot file Y) is required");
    if (controlled && !o.inputs) throw InvalidArgument("run " + alg + ": --inputs is required");
    if (alg == "cdmdc" && o.B && o.sparsity_b) throw InvalidArgument("run cdmdc: --sparsity-b has no effect with --B");

    std::optional<RealMatrix> U;
    if (o.inputs) U = load_matrix(*o.inputs);
    std::optional<SnapshotSet> full;
    if (o.snapshots) full = load_snapshots(*o.snapshots, std::nullopt, U, o.dt);
    std::optional<RealMatrix> B;
    if (o.B) B = load_matrix(*o.B);

    json out;
    DmdModel* model_ptr = nullptr;
    DmdModel plain;
    CompressiveModel comp;
    bool recovery_failed = false;

    if (!compressed) {
        const Index r = o.rank > 0 ? o.rank : rank_for_energy(full->X);
        if (alg == "dmd") {
            plain = exact_dmd(*full, r);
        } else if (B) {
            plain = dmdc_known_b(*full, *B, r);
        } else {
            const Index rt = o.rank_tilde > 0 ? o.rank_tilde : default_augmented_rank(full->X, *full->inputs, r);
            plain = dmdc_unknown_b(*full, r, rt);
        }
        out = model_json(plain, o.out);
        model_ptr = &plain;
    } else {
        const RealMatrix Yseq = load_matrix(*o.measurements);
        const auto ysnaps = SnapshotSet::from_sequence(Yseq, U, o.dt);
        const Index n = full ? full->n() : (o.measurement.file || !B ? Index{0} : B->rows());
        if (!o.measurement.given()) throw InvalidArgument("run " + alg + ": --C or --measurement/--p is required");
        if (!o.measurement.file && n == 0)
            throw InvalidArgument("run " + alg + ": the state dimension is unknown; give --snapshots, --B or --C");
        CompressiveInputs in;
        in.C = o.measurement.build(n);
        if (in.C.rows() != Yseq.rows())
            throw InvalidArgument("run " + alg + ": C has " + std::to_string(in.C.rows()) + " rows but Y has " +
                                  std::to_string(Yseq.rows()));
        in.Y = ysnaps.X;
        in.Yp = ysnaps.Xp;
        in.inputs = ysnaps.inputs;
        in.dt = o.dt;
        const bool project = o.path == "auto" ? full.has_value()
                                              : parse_recovery_path(o.path) == RecoveryPath::CompressedProjection;
        if (project && !full)
            throw InvalidArgument("run " + alg + ": the projection path needs the full snapshots (--snapshots)");
        if (project) in.full_state = FullState{full->X, full->Xp};
        if (alg == "cdmdc") in.B_known = B;
        in.r = o.rank;
        in.r_tilde = o.rank_tilde;
        in.recovery.sparsity = o.sparsity;
        in.sparsity_B = o.sparsity_b;
        comp = alg == "cdmd" ? cdmd(in) : cdmdc::cdmdc(in);
        out = model_json(comp, o.out);
        if (project && comp.augmented && alg == "cdmdc") out["assumptions"] = assumption_json(*full, *comp.augmented, comp.r);
        recovery_failed = !comp.recovery_succeeded;
        model_ptr = &comp;
    }

    if (o.truth) {
        const auto t = load_truth(*o.truth);
        out["metrics"] = metrics_json(compare_models(t.modes, t.eigenvalues, *model_ptr, t.B));
    }
    write_json(o.out / "model.json", out);

    log << alg << ": r = " << model_ptr->r;
    if (compressed) log << ", branch " << comp.branch;
    log << ", wrote " << (o.out / "model.json").string() << '\n';
    for (Index i = 0; i < model_ptr->eigenvalues.size(); ++i) {
        const Complex l = model_ptr->eigenvalues(i);
        log << "  lambda " << i << " = " << std::setprecision(10) << l.real() << (l.imag() < 0 ? " - " : " + ")
            << std::abs(l.imag()) << "i\n";
    }
    for (const auto& w : model_ptr->warnings) log << "  warning: " << w << '\n';
    if (recovery_failed) {
        log << "sparse recovery did not reach its residual tolerance\n";
        return kNumerical;
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
    std::optional<fs::path> snapshots, inputs, measurements;
    MeasurementChoice measurement;
    std::vector<std::string> kinds = {"uniform", "gaussian", "bernoulli", "single-pixel"};
    Index seeds = 10;
    Index p = 128;
    double noise = 0.0;
    double dt = 0.1;
    Index rank = 2;
    Index rank_tilde = 3;
    Index k_max = 5;
    Index horizon = 10;
    double tolerance = kIdentityTolerance;
    fs::path out;
};

struct VerifyCase {
    std::string label;
    TheoremSuite suite;
};

inline int cmd_verify(const VerifyOptions& o, std::ostream& log) {
    TheoremSuiteConfig cfg;
    cfg.r = o.rank;
    cfg.r_tilde = o.rank_tilde;
    cfg.k_max = o.k_max;
    cfg.horizon = o.horizon;
    cfg.tolerance = o.tolerance;
    cfg.advisory = o.noise > 0.0;

    std::vector<VerifyCase> cases;
    if (o.snapshots) {
        if (!o.inputs) throw InvalidArgument("verify: --inputs is required with --snapshots");
        auto snaps = load_snapshots(*o.snapshots, std::nullopt, load_matrix(*o.inputs), o.dt);
        if (o.noise > 0.0) {
            RealMatrix seq(snaps.n(), snaps.m() + 1);
            seq << snaps.X, snaps.Xp.rightCols(1);
            snaps = SnapshotSet::from_sequence(add_noise(seq, o.noise, 0), snaps.inputs, snaps.dt);
        }
        MeasurementChoice mc = o.measurement;
        if (!mc.given()) mc.p = o.p;
        const auto C = mc.build(snaps.n());
        if (o.measurements) {
            const RealMatrix Y = load_matrix(*o.measurements);
            RealMatrix seq(snaps.n(), snaps.m() + 1);
            seq << snaps.X, snaps.Xp.rightCols(1);
            if (Y.rows() != C.rows() || Y.cols() != seq.cols())
                throw InvalidArgument("verify: consistency precondition C X = Y failed: Y is " +
                                      cdmdc::detail::shape(Y.rows(), Y.cols()) + ", C X is " +
                                      cdmdc::detail::shape(C.rows(), seq.cols()));
            const double res = (C.apply(seq) - Y).norm() / std::max(Y.norm(), 1e-300);
            if (!(res <= 1e-10))
                throw InvalidArgument("verify: consistency precondition C X = Y failed: ||C X - Y|| / ||Y|| = " +
                                      std::to_string(res));
        }
        cases.push_back({"input/" + std::string(to_string(C.kind())), run_theorem_suite(snaps, C, cfg)});
    } else {
        for (const auto& kname : o.kinds) {
            const auto kind = parse_measurement_kind(kname);
            for (Index s = 0; s < o.seeds; ++s) {
                const auto useed = static_cast<std::uint64_t>(s);
                auto run = default_run(100 + useed);
                SnapshotSet snaps = run.snapshots;
                if (o.noise > 0.0)
                    snaps = SnapshotSet::from_sequence(add_noise(run.sequence, o.noise, 100 + useed), run.inputs,
                                                       run.snapshots.dt);
                const auto C = build_measurement({kind, o.p, snaps.n(), 5000 + useed});
                cases.push_back({std::string(to_string(kind)) + "/seed" + std::to_string(s),
                                 run_theorem_suite(snaps, C, cfg)});
            }
        }
    }

    json report = json::array();
    std::size_t checks = 0, failures = 0;
    log << std::left << std::setw(24) << "case" << std::setw(22) << "identity" << std::setw(14) << "residual"
        << "status\n";
    for (const auto& c : cases) {
        json jc = {{"case", c.label},
                   {"assumptions",
                    {{"assumption 1", real_json(c.suite.assumption1)},
                     {"assumption 2", real_json(c.suite.assumption2)},
                     {"assumption 3", real_json(c.suite.assumption3)}}},
                   {"reports", json::array()}};
        for (const auto& r : c.suite.reports) {
            ++checks;
            const bool failed = !r.pass && !r.advisory;
            if (failed) ++failures;
            const char* status = r.pass ? "pass" : (r.advisory ? "advisory" : "FAIL");
            char res[32];
            std::snprintf(res, sizeof res, "%.3e", r.residual);
            log << std::setw(24) << c.label << std::setw(22) << r.name << std::setw(14) << res << status << '\n';
            jc["reports"].push_back(report_json(r));
        }
        report.push_back(jc);
    }
    write_json(o.out / "verify.json",
               {{"advisory", cfg.advisory}, {"tolerance", o.tolerance}, {"checks", checks}, {"failures", failures},
                {"cases", report}});
    log << checks - failures << "/" << checks << " identity checks pass";
    if (cfg.advisory) log << " (advisory: noisy data, failures not enforced)";
    log << "; report in " << (o.out / "verify.json").string() << '\n';
    return failures > 0 ? kVerification : kOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepRow {
    std::string param;
    Index realization = 0;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> metrics;
};

namespace detail {

inline RealMatrix sequence_of(const SnapshotSet& s) {
    RealMatrix seq(s.n(), s.m() + 1);
    seq << s.X, s.Xp.rightCols(1);
    return seq;
}

struct SweepData {
    SnapshotSet clean;
    ComplexMatrix Phi_ref;
    ComplexVector lambda_ref;
    std::optional<RealMatrix> B_ref;
};

// Reference for a realization: the synthetic truth, or full-state DMD(c) on
// the clean ingested data.
inline SweepData sweep_data(const SweepConfig& cfg, const std::optional<SnapshotSet>& ingested, std::uint64_t seed) {
    SweepData d;
    if (ingested) {
        d.clean = *ingested;
        if (cfg.algorithm == "dmd" || cfg.algorithm == "cdmd" || !d.clean.inputs) {
            const auto ref = exact_dmd(d.clean, cfg.rank);
            d.Phi_ref = ref.modes;
            d.lambda_ref = ref.eigenvalues;
        } else {
            const auto ref = dmdc_unknown_b(d.clean, cfg.rank, cfg.rank_tilde);
            d.Phi_ref = ref.modes;
            d.lambda_ref = ref.eigenvalues;
            d.B_ref = ref.B_hat;
        }
        return d;
    }
    const auto plant = default_plant(cfg.n);
    const RealMatrix U = gaussian_forcing(plant.q(), cfg.snapshots - 1, seed);
    std::optional<RealMatrix> B;
    if (cfg.actuation != ActuationKind::InSpan) B = build_actuation(plant, cfg.actuation, seed);
    auto run = simulate(plant, spiral_x0(), U, cfg.snapshots, B, seed);
    d.clean = std::move(run.snapshots);
    d.Phi_ref = std::move(run.Phi_true);
    d.lambda_ref = std::move(run.lambda_true);
    d.B_ref = std::move(run.B_true);
    return d;
}

inline std::vector<std::pair<std::string, double>> sweep_point(const SweepConfig& cfg,
                                                                const std::optional<SnapshotSet>& ingested,
                                                                const std::string& value, std::uint64_t seed) {
    const auto data = sweep_data(cfg, ingested, seed);
    const double noise = cfg.axis == SweepAxis::Noise ? std::stod(value) : cfg.noise;
    SnapshotSet snaps = data.clean;
    if (noise > 0.0) snaps = SnapshotSet::from_sequence(add_noise(sequence_of(snaps), noise, seed, 1), snaps.inputs, snaps.dt);

    const Index n = snaps.n();
    MeasurementKind kind = cfg.axis == SweepAxis::Measurement ? parse_measurement_kind(value) : cfg.measurement;
    Index p = cfg.p;
    if (cfg.axis == SweepAxis::Compression)
        p = std::clamp<Index>(static_cast<Index>(std::llround(std::stod(value) * static_cast<double>(n))), 1, n);

    const std::optional<RealMatrix> B_known =
        cfg.b_known && data.B_ref ? data.B_ref : std::optional<RealMatrix>{};
    DmdModel est;
    bool recovered = true;
    if (cfg.algorithm == "dmd") {
        est = exact_dmd(snaps, cfg.rank);
    } else if (cfg.algorithm == "dmdc") {
        est = B_known ? dmdc_known_b(snaps, *B_known, cfg.rank) : dmdc_unknown_b(snaps, cfg.rank, cfg.rank_tilde);
    } else {
        const auto C = build_measurement({kind, p, n, stream_key(seed, 0xc0)});
        auto in = measure(snaps, C, cfg.path == RecoveryPath::CompressedProjection);
        in.r = cfg.rank;
        in.r_tilde = cfg.rank_tilde;
        in.recovery.sparsity = cfg.sparsity;
        in.sparsity_B = cfg.sparsity_b;
        if (cfg.algorithm == "cdmdc") in.B_known = B_known;
        CompressiveModel cm = cfg.algorithm == "cdmd" ? cdmd(in) : cdmdc::cdmdc(in);
        recovered = cm.recovery_succeeded;
        est = std::move(cm);
    }
    const auto m = compare_models(data.Phi_ref, data.lambda_ref, est, data.B_ref);
    std::vector<std::pair<std::string, double>> out = {
        {"mode_error", m.mode_error}, {"max_eig_error", m.max_eig_error()}, {"mean_eig_error", m.mean_eig_error()}};
    if (m.b_error) out.emplace_back("b_error", *m.b_error);
    out.emplace_back("p", static_cast<double>(p));
    out.emplace_back("recovered", recovered ? 1.0 : 0.0);
    return out;
}

inline std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace detail

/// Runs every (value, realization) pair. Rows come back ordered by value
/// then realization, whatever order the workers finish in.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    std::optional<SnapshotSet> ingested;
    if (cfg.snapshots_file) {
        std::optional<RealMatrix> U;
        if (cfg.inputs_file) U = load_matrix(*cfg.inputs_file);
        ingested = load_snapshots(*cfg.snapshots_file, std::nullopt, U, 0.1);
    }
    const std::size_t nv = cfg.values.size();
    const auto nr = static_cast<std::size_t>(cfg.realizations);
    std::vector<SweepRow> rows(nv * nr);
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr error;

    auto worker = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= rows.size()) return;
            SweepRow& row = rows[t];
            row.param = cfg.values[t / nr];
            row.realization = static_cast<Index>(t % nr);
            row.seed = stream_key(cfg.seed, static_cast<std::uint64_t>(row.realization));
            try {
                row.metrics = detail::sweep_point(cfg, ingested, row.param, row.seed);
            } catch (const NumericalError&) {
                row.metrics = {{"mode_error", std::nan("")}, {"recovered", 0.0}};
            } catch (...) {
                std::lock_guard lock(err_mu);
                if (!error) error = std::current_exception();
                next.store(rows.size());
            }
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const auto nthreads = std::min<std::size_t>(cfg.threads > 0 ? static_cast<std::size_t>(cfg.threads) : hw, rows.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return rows;
}

inline void write_sweep_csv(const SweepConfig& cfg, const std::vector<SweepRow>& rows, const fs::path& long_csv,
                            const fs::path& summary_csv) {
    std::ofstream lo(long_csv);
    if (!lo) throw FormatError("cannot write '" + long_csv.string() + "'");
    lo << "axis,param,realization,seed,metric,value\n";
    std::vector<std::string> metric_order;
    std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
    for (const auto& r : rows) {
        for (const auto& [name, v] : r.metrics) {
            lo << to_string(cfg.axis) << ',' << r.param << ',' << r.realization << ',' << r.seed << ',' << name << ','
               << detail::format_value(v) << '\n';
            if (std::find(metric_order.begin(), metric_order.end(), name) == metric_order.end())
                metric_order.push_back(name);
            if (!std::isnan(v)) groups[{r.param, name}].push_back(v);
        }
    }
    std::ofstream su(summary_csv);
    if (!su) throw FormatError("cannot write '" + summary_csv.string() + "'");
    su << "axis,param,metric,count,median,mean,min,max\n";
    for (const auto& param : cfg.values) {
        for (const auto& name : metric_order) {
            const auto it = groups.find({param, name});
            if (it == groups.end()) continue;
            const auto& v = it->second;
            double mean = 0.0;
            for (double x : v) mean += x;
            mean /= static_cast<double>(v.size());
            su << to_string(cfg.axis) << ',' << param << ',' << name << ',' << v.size() << ','
               << detail::format_value(detail::median(v)) << ',' << detail::format_value(mean) << ','
               << detail::format_value(*std::min_element(v.begin(), v.end())) << ','
               << detail::format_value(*std::max_element(v.begin(), v.end())) << '\n';
        }
    }
}

inline int cmd_sweep(const fs::path& config, const fs::path& out, std::ostream& log) {
    const auto cfg = load_sweep_config(config);
    const auto rows = run_sweep(cfg);
    fs::create_directories(out);
    write_sweep_csv(cfg, rows, out / "sweep.csv", out / "summary.csv");
    log << "sweep over " << to_string(cfg.axis) << ": " << cfg.values.size() << " values x " << cfg.realizations
        << " realizations; wrote " << (out / "sweep.csv").string() << " and " << (out / "summary.csv").string()
        << '\n';
    return kOk;
}

}  // namespace cdmdc::cli
