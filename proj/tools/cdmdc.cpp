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

// cdmdc: synth | run | sweep | verify

#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace cdmdc::cli;

void add_measurement_flags(CLI::App* app, MeasurementChoice& m, bool with_file) {
    if (with_file) app->add_option("--C", m.file, "measurement matrix file (CDMC or CSV)");
    app->add_option("--measurement", m.kind, "random operator kind: uniform, gaussian, bernoulli, single-pixel");
    app->add_option("--p", m.p, "rows of the measurement operator")->check(CLI::PositiveNumber);
    app->add_option("--measurement-seed", m.seed, "seed of the measurement operator");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compressive dynamic mode decomposition with control"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "cdmdc 1.0.0");

    const fs::path out_default = default_output_dir();

    SynthOptions synth;
    synth.out = out_default;
    auto* s = app.add_subcommand("synth", "simulate the forced spiral plant and write snapshot and truth files");
    s->add_option("--out", synth.out, "output directory (default: $CDMDC_OUTPUT_DIR or cdmdc-out)");
    s->add_option("--n", synth.n, "state dimension")->check(CLI::PositiveNumber);
    s->add_option("--steps,--snapshots", synth.snapshots, "number of snapshots, x_0 included")->check(CLI::Range(2, 1 << 30));
    s->add_option("--seed", synth.seed, "forcing seed");
    s->add_option("--dt", synth.dt, "time step")->check(CLI::PositiveNumber);
    s->add_option("--actuation", synth.actuation, "in-span, dct-complement or dense");
    s->add_option("--noise", synth.noise, "noise level eta (sigma = eta * max row std)")->check(CLI::NonNegativeNumber);
    add_measurement_flags(s, synth.measurement, false);

    RunOptions run;
    run.out = out_default;
    auto* r = app.add_subcommand("run", "identify a model with dmd, dmdc, cdmd or cdmdc");
    r->add_option("algorithm", run.algorithm, "dmd | dmdc | cdmd | cdmdc")
        ->required()
        ->check(CLI::IsMember({"dmd", "dmdc", "cdmd", "cdmdc"}));
    r->add_option("--snapshots", run.snapshots, "full-state sequence x_0..x_m (columns)");
    r->add_option("--inputs", run.inputs, "input sequence u_0..u_{m-1} (columns)");
    r->add_option("--B", run.B, "known actuation matrix");
    r->add_option("--measurements", run.measurements, "compressed sequence y_0..y_m (columns)");
    add_measurement_flags(r, run.measurement, true);
    r->add_option("--path", run.path, "auto, projection or sensing")
        ->check(CLI::IsMember({"auto", "projection", "sensing"}));
    r->add_option("--rank", run.rank, "retained rank r (0: 99% energy)")->check(CLI::NonNegativeNumber);
    r->add_option("--rank-tilde", run.rank_tilde, "augmented rank r~ (0: 99% energy)")->check(CLI::NonNegativeNumber);
    r->add_option("--sparsity", run.sparsity, "CoSaMP sparsity K for the modes")->check(CLI::PositiveNumber);
    r->add_option("--sparsity-b", run.sparsity_b, "CoSaMP sparsity K for the actuation columns")
        ->check(CLI::PositiveNumber);
    r->add_option("--dt", run.dt, "time step")->check(CLI::PositiveNumber);
    r->add_option("--truth", run.truth, "truth.json from synth; attaches error metrics");
    r->add_option("--out", run.out, "output directory");

    fs::path sweep_config, sweep_out = out_default;
    auto* w = app.add_subcommand("sweep", "run an ensemble sweep described by a key = value config file");
    w->add_option("--config", sweep_config, "sweep config file")->required()->check(CLI::ExistingFile);
    w->add_option("--out", sweep_out, "output directory");

    VerifyOptions verify;
    verify.out = out_default;
    auto* v = app.add_subcommand("verify", "check the commutation and controllability identities");
    v->add_option("--snapshots", verify.snapshots, "full-state sequence (synthesized when absent)");
    v->add_option("--inputs", verify.inputs, "input sequence");
    v->add_option("--measurements", verify.measurements, "compressed sequence, checked against C X");
    add_measurement_flags(v, verify.measurement, true);
    v->add_option("--kinds", verify.kinds, "measurement kinds for synthesized data")->delimiter(',');
    v->add_option("--seeds", verify.seeds, "seeds per kind for synthesized data")->check(CLI::PositiveNumber);
    v->add_option("--rows", verify.p, "rows of C for synthesized data")->check(CLI::PositiveNumber);
    v->add_option("--noise", verify.noise, "noise level; any positive value makes the report advisory")
        ->check(CLI::NonNegativeNumber);
    v->add_option("--rank", verify.rank, "retained rank r")->check(CLI::PositiveNumber);
    v->add_option("--rank-tilde", verify.rank_tilde, "augmented rank r~")->check(CLI::PositiveNumber);
    v->add_option("--k-max", verify.k_max, "largest Markov power")->check(CLI::PositiveNumber);
    v->add_option("--horizon", verify.horizon, "controllability horizon")->check(CLI::PositiveNumber);
    v->add_option("--tolerance", verify.tolerance, "relative residual tolerance")->check(CLI::PositiveNumber);
    v->add_option("--dt", verify.dt, "time step")->check(CLI::PositiveNumber);
    v->add_option("--out", verify.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*s) return cmd_synth(synth, std::cout);
        if (*r) return cmd_run(run, std::cout);
        if (*w) return cmd_sweep(sweep_config, sweep_out, std::cout);
        if (*v) return cmd_verify(verify, std::cout);
    } catch (const cdmdc::NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const cdmdc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
