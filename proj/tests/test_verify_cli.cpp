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

// verify, serialization, sweep config, command line

#include "cli/commands.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace cdmdc;
using namespace cdmdc::cli;
namespace fs = std::filesystem;

#ifndef CDMDC_BINARY
#error "CDMDC_BINARY must name the command-line executable"
#endif

namespace {

RealMatrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
    Rng rng(seed, 3);
    RealMatrix M(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) M(i, j) = rng.normal();
    return M;
}

const SyntheticRun& shared_run() {
    static const SyntheticRun run = default_run(2);
    return run;
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("cdmdc-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs the binary with stdout and stderr captured to files in `dir`.
int invoke(const std::string& args, const fs::path& dir) {
    const std::string cmd = std::string("'") + CDMDC_BINARY + "' " + args + " >'" + (dir / "stdout.txt").string() +
                            "' 2>'" + (dir / "stderr.txt").string() + "'";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const TheoremReport& report_named(const TheoremSuite& s, const std::string& name) {
    for (const auto& r : s.reports)
        if (r.name == name) return r;
    throw std::runtime_error("no report " + name);
}

}  // namespace

// ---------------------------------------------------------------------------
// identities

TEST(Identities, LemmaOneWithoutInputsAndLosslessOperator) {
    // with no actuation and an invertible C the compressed SVD spans the same rows
    const auto plant = default_plant(256);
    const auto run = simulate(plant, spiral_x0(), RealMatrix::Zero(1, 80), 81);
    const MeasurementOperator C({MeasurementKind::GaussianRandom, 256, 256, 3});
    SnapshotSet full = run.snapshots;
    const SnapshotSet comp{C.apply(full.X), C.apply(full.Xp), full.inputs, full.dt};
    const auto aug = *dmdc_unknown_b(full, 2, 2).augmented;
    const auto augY = *dmdc_unknown_b(comp, 2, 2).augmented;
    EXPECT_TRUE(check_lemma1(aug, augY, C).pass) << check_lemma1(aug, augY, C).residual;
    EXPECT_TRUE(check_augmented_identity(aug, augY, C).pass);
}

TEST(Identities, AugmentedIdentityHoldsWithInputs) {
    const auto& run = shared_run();
    for (auto kind : kRandomMeasurementKinds) {
        const MeasurementOperator C({kind, 128, 1024, 21});
        const auto suite = run_theorem_suite(run.snapshots, C, {});
        EXPECT_TRUE(report_named(suite, "augmented identity").pass) << to_string(kind);
        EXPECT_LT(suite.assumption1, 1e-10);
        EXPECT_LT(suite.assumption2, 1e-10);
        EXPECT_LT(suite.assumption3, 1e-10);
    }
}

TEST(Identities, LemmaResidualsWithInputs) {
    // The stated lemmas drop the input block of the augmented basis; with
    // nonzero forcing that block contributes and the residual is O(1).
    const auto& run = shared_run();
    const MeasurementOperator C({MeasurementKind::GaussianRandom, 128, 1024, 21});
    const auto suite = run_theorem_suite(run.snapshots, C, {});
    EXPECT_GT(report_named(suite, "lemma 1").residual, 1e-3);
    EXPECT_GT(report_named(suite, "lemma 2").residual, 1e-3);
}

TEST(Identities, OperatorIdentitiesHoldAcrossKindsAndSeeds) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto run = default_run(100 + seed);
        for (auto kind : kRandomMeasurementKinds) {
            const MeasurementOperator C({kind, 128, 1024, 5000 + seed});
            const auto suite = run_theorem_suite(run.snapshots, C, {});
            for (const char* name : {"theorem 1", "theorem 2", "theorem 3", "theorem 4", "corollary 1", "controllability"})
                EXPECT_TRUE(report_named(suite, name).pass)
                    << name << " " << to_string(kind) << " seed " << seed << " residual "
                    << report_named(suite, name).residual;
        }
    }
}

TEST(Identities, MarkovZeroIsActuationIdentity) {
    const auto& run = shared_run();
    const MeasurementOperator C({MeasurementKind::BernoulliRandom, 128, 1024, 4});
    const auto full = dmdc_unknown_b(run.snapshots, 2, 3);
    const RealMatrix Y = C.apply(run.snapshots.X), Yp = C.apply(run.snapshots.Xp);
    const auto comp = dmdc_unknown_b(SnapshotSet{Y, Yp, run.snapshots.inputs, 0.1}, 2, 3);
    const auto ops = dmdc_operators(run.snapshots.Xp, *full.augmented);
    const auto opsY = dmdc_operators(Yp, *comp.augmented);
    const auto markov = check_markov(ops.A, ops.B, opsY.A, opsY.B, C, 3);
    ASSERT_EQ(markov.size(), 4u);
    const auto t2 = check_theorem2(ops.B, opsY.B, C);
    EXPECT_NEAR(markov[0].residual, t2.residual, 1e-15);
    EXPECT_TRUE(markov[0].pass);
}

TEST(Identities, PermutationOperator) {
    // C as a permutation: the compressed SVD is the full one with permuted rows
    const auto& run = shared_run();
    std::vector<Index> idx(1024);
    for (Index i = 0; i < 1024; ++i) idx[static_cast<std::size_t>(i)] = (i * 7 + 3) % 1024;
    const auto C = MeasurementOperator::from_indices(1024, idx);
    const auto suite = run_theorem_suite(run.snapshots, C, {});
    for (const auto& r : suite.reports)
        if (r.name.rfind("lemma", 0) != 0) {
            EXPECT_TRUE(r.pass) << r.name << " " << r.residual;
        }
    EXPECT_LT(suite.assumption1, 1e-12);
    EXPECT_LT(suite.assumption3, 1e-12);
}

TEST(Identities, ZeroActuationIsTrivial) {
    const MeasurementOperator C({MeasurementKind::GaussianRandom, 8, 32, 1});
    const auto rep = check_theorem2(RealMatrix::Zero(32, 1), RealMatrix::Zero(8, 1), C);
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.residual, 0.0);
    EXPECT_FALSE(check_theorem2(RealMatrix::Zero(32, 1), RealMatrix::Ones(8, 1), C).pass);
}

TEST(Identities, TheoremThreeDetectsWrongEigenvalue) {
    const auto& run = shared_run();
    const MeasurementOperator C({MeasurementKind::GaussianRandom, 128, 1024, 4});
    const auto full = dmdc_unknown_b(run.snapshots, 2, 3);
    const RealMatrix Yp = C.apply(run.snapshots.Xp);
    const auto comp = dmdc_unknown_b(SnapshotSet{C.apply(run.snapshots.X), Yp, run.snapshots.inputs, 0.1}, 2, 3);
    const auto opsY = dmdc_operators(Yp, *comp.augmented);
    for (const auto& r : check_theorem3(full.modes, full.eigenvalues, opsY.A, C)) EXPECT_TRUE(r.pass) << r.residual;
    const ComplexVector shifted = full.eigenvalues.array() + Complex(0.05, 0.0);
    for (const auto& r : check_theorem3(full.modes, shifted, opsY.A, C)) EXPECT_FALSE(r.pass);
}

TEST(Identities, NoisyDataIsAdvisory) {
    const auto& run = shared_run();
    SnapshotSet noisy = SnapshotSet::from_sequence(add_noise(run.sequence, 0.5, 1), run.inputs, 0.1);
    const MeasurementOperator C({MeasurementKind::GaussianRandom, 128, 1024, 4});
    TheoremSuiteConfig cfg;
    cfg.advisory = true;
    const auto suite = run_theorem_suite(noisy, C, cfg);
    EXPECT_TRUE(suite.all_pass());
    for (const auto& r : suite.reports) EXPECT_TRUE(r.advisory);
}

// ---------------------------------------------------------------------------
// controllability

TEST(Controllability, SpiralIsControllable) {
    EXPECT_EQ(controllability(spiral_A(), spiral_B()).rank, 2);
    EXPECT_EQ(controllability(spiral_A(), RealMatrix::Zero(2, 1)).rank, 0);
    const RealMatrix e1 = (RealMatrix(3, 1) << 1, 0, 0).finished();
    EXPECT_EQ(controllability(RealMatrix::Identity(3, 3), e1).rank, 1);
    const auto k = controllability(spiral_A(), spiral_B(), 4);
    EXPECT_EQ(k.matrix.cols(), 4);
    EXPECT_LT((k.matrix.col(1) - spiral_A() * spiral_B()).norm(), 1e-15);
}

TEST(ControllabilityProperty, SimilarityInvariant) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Index n = 3 + static_cast<Index>(seed % 3);
        RealMatrix A = random_matrix(n, n, seed);
        RealMatrix B = random_matrix(n, 1, 100 + seed);
        if (seed % 2 == 0) {
            // first state decoupled and unforced
            A.row(0).setZero();
            A(0, 0) = 0.5;
            B(0, 0) = 0.0;
            EXPECT_EQ(controllability(A, B).rank, n - 1);
        }
        const RealMatrix T = random_matrix(n, n, 200 + seed) + 3.0 * RealMatrix::Identity(n, n);
        const RealMatrix Ti = T.inverse();
        EXPECT_EQ(controllability(A, B).rank, controllability(T * A * Ti, T * B).rank) << "seed " << seed;
    }
}

TEST(Controllability, LowRankMatchesDense) {
    const RealMatrix L = random_matrix(6, 2, 1), R = random_matrix(6, 2, 2);
    const RealMatrix B = random_matrix(6, 1, 3);
    const LowRankOperator A{L, R};
    const auto lr = controllability(A, B, 6);
    const auto dense = controllability(RealMatrix(L * R.transpose()), B, 6);
    EXPECT_LT((lr.matrix - dense.matrix).norm(), 1e-12 * dense.matrix.norm());
    EXPECT_EQ(lr.rank, dense.rank);
    EXPECT_EQ(lr.rank, 3);
}

// ---------------------------------------------------------------------------
// pairing and metrics

TEST(Hungarian, MatchesBruteForce) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Index k = 1 + static_cast<Index>(seed % 6);
        const RealMatrix cost = random_matrix(k, k, seed).cwiseAbs();
        const auto got = hungarian(cost);
        double got_cost = 0.0;
        for (Index i = 0; i < k; ++i) got_cost += cost(i, got[static_cast<std::size_t>(i)]);
        std::vector<Index> perm(static_cast<std::size_t>(k));
        std::iota(perm.begin(), perm.end(), Index{0});
        double best = std::numeric_limits<double>::infinity();
        do {
            double c = 0.0;
            for (Index i = 0; i < k; ++i) c += cost(i, perm[static_cast<std::size_t>(i)]);
            best = std::min(best, c);
        } while (std::next_permutation(perm.begin(), perm.end()));
        EXPECT_NEAR(got_cost, best, 1e-12) << "seed " << seed;
        std::vector<Index> sorted = got;
        std::sort(sorted.begin(), sorted.end());
        for (Index i = 0; i < k; ++i) EXPECT_EQ(sorted[static_cast<std::size_t>(i)], i);
    }
}

TEST(ModeError, ZeroAndInvariances) {
    const ComplexMatrix Phi = random_matrix(8, 3, 1).cast<Complex>();
    EXPECT_LT(mode_error(Phi, Phi), 1e-15);
    ComplexMatrix shuffled(8, 3);
    shuffled.col(0) = Phi.col(2) * Complex(0.0, -2.0);
    shuffled.col(1) = Phi.col(0) * std::polar(0.5, 1.1);
    shuffled.col(2) = Phi.col(1) * Complex(-3.0, 0.0);
    EXPECT_LT(mode_error(Phi, shuffled), 1e-15);
    const ComplexVector l = (ComplexVector(3) << 0.9, 0.5, 0.1).finished();
    const ComplexVector ls = (ComplexVector(3) << 0.1, 0.9, 0.5).finished();
    EXPECT_LT(mode_error(Phi, shuffled, l, ls), 1e-15);
}

TEST(ModeError, ClosedForm) {
    // est_j = e_j + t_j f_j with f_j orthogonal: the best scaled fit leaves t^2 / (1 + t^2) per column
    ComplexMatrix ref = ComplexMatrix::Zero(4, 2), est = ComplexMatrix::Zero(4, 2);
    ref(0, 0) = 1.0;
    ref(1, 1) = 1.0;
    const double t = 0.3, s = 2.0;
    est.col(0) = ref.col(0);
    est(2, 0) = t;
    est.col(1) = ref.col(1);
    est(3, 1) = s;
    const double expected = std::sqrt(t * t / (1 + t * t) + s * s / (1 + s * s)) / std::sqrt(2.0);
    EXPECT_NEAR(mode_error(ref, est), expected, 1e-14);
}

TEST(Metrics, ActuationAndEigenvalueErrors) {
    const RealMatrix B = random_matrix(10, 2, 1);
    EXPECT_NEAR(b_error(B, 2.0 * B), 1.0, 1e-14);
    EXPECT_EQ(b_error(B, B), 0.0);
    EXPECT_NEAR(b_error(RealMatrix::Zero(3, 1), RealMatrix::Ones(3, 1)), std::sqrt(3.0), 1e-14);
    EXPECT_THROW(b_error(B, RealMatrix::Zero(10, 3)), InvalidArgument);
    const ComplexVector ref = (ComplexVector(2) << Complex(0.5, 0.0), Complex(0.0, 2.0)).finished();
    const ComplexVector est = (ComplexVector(2) << Complex(0.0, 2.2), Complex(0.55, 0.0)).finished();
    const auto e = eig_errors(ref, est);
    EXPECT_NEAR(e[0], 0.1, 1e-14);
    EXPECT_NEAR(e[1], 0.1, 1e-14);
}

// ---------------------------------------------------------------------------
// serialization

TEST(Serialization, ModelRoundTripReproducesPredictions) {
    TempDir dir;
    const auto& run = shared_run();
    const MeasurementOperator C({MeasurementKind::GaussianRandom, 128, 1024, 7});
    auto in = measure(run.snapshots, C, false);
    in.r = 2;
    in.r_tilde = 3;
    const auto model = cdmdc::cdmdc(in);
    write_json(dir.path / "model.json", model_json(model, dir.path));
    const auto back = load_model(dir.path / "model.json");
    EXPECT_EQ(back.eigenvalues, model.eigenvalues);
    EXPECT_EQ(back.modes, model.modes);
    const RealMatrix a = predict(model, run.sequence.col(0), run.inputs, 50);
    const RealMatrix b = predict(back, run.sequence.col(0), run.inputs, 50);
    EXPECT_LE((a - b).norm(), 1e-12 * a.norm());
    const json j = read_json(dir.path / "model.json");
    EXPECT_EQ(j.at("branch"), "x-unknown-b-unknown");
    EXPECT_TRUE(j.at("eigenvalues").at(0).is_array());
    EXPECT_EQ(j.at("eigenvalues").at(0).size(), 2u);
}

TEST(Serialization, NonFiniteValues) {
    EXPECT_TRUE(real_json(std::numeric_limits<double>::infinity()).is_null());
    EXPECT_TRUE(std::isinf(real_from_json(json(nullptr))));
    const Complex z(-std::numeric_limits<double>::infinity(), 1.5);
    const Complex back = complex_from_json(complex_json(z));
    EXPECT_TRUE(std::isinf(back.real()));
    EXPECT_EQ(back.imag(), 1.5);
}

TEST(Serialization, MissingFieldIsFormatError) {
    TempDir dir;
    std::ofstream(dir.path / "model.json") << "{\"algorithm\": \"dmd\"}";
    EXPECT_THROW(load_model(dir.path / "model.json"), FormatError);
    std::ofstream(dir.path / "broken.json") << "{";
    EXPECT_THROW(read_json(dir.path / "broken.json"), FormatError);
}

// ---------------------------------------------------------------------------
// sweep config

TEST(SweepConfigParser, ParsesKeysAndComments) {
    const auto cfg = parse_sweep_config(
        "# compression study\n"
        "axis = compression\n"
        "values = 0.05, 0.1 ,0.5\n"
        "realizations = 3   # per point\n"
        "measurement = bernoulli\n"
        "path = sensing\n"
        "b_known = true\n"
        "sparsity_b = 6\n");
    EXPECT_EQ(cfg.axis, SweepAxis::Compression);
    EXPECT_EQ(cfg.values, (std::vector<std::string>{"0.05", "0.1", "0.5"}));
    EXPECT_EQ(cfg.realizations, 3);
    EXPECT_EQ(cfg.measurement, MeasurementKind::BernoulliRandom);
    EXPECT_EQ(cfg.path, RecoveryPath::CompressedSensing);
    EXPECT_TRUE(cfg.b_known);
    EXPECT_EQ(cfg.sparsity_b, 6);
    EXPECT_EQ(cfg.n, 1024);
}

TEST(SweepConfigParser, Errors) {
    const auto fails = [](const std::string& text, const std::string& fragment) {
        try {
            parse_sweep_config(text);
        } catch (const InvalidArgument& e) {
            return std::string(e.what()).find(fragment) != std::string::npos;
        }
        return false;
    };
    EXPECT_TRUE(fails("values = 0.1\n", "no axis"));
    EXPECT_TRUE(fails("axis = noise\n", "empty sweep axis"));
    EXPECT_TRUE(fails("axis = noise\nvalues =\n", "empty sweep axis"));
    EXPECT_TRUE(fails("axis = noise\nvalues = 0.1\ncolour = red\n", "unknown key 'colour'"));
    EXPECT_TRUE(fails("axis = noise\nvalues = 0.1\nrealizations = many\n", "line 3"));
    EXPECT_TRUE(fails("axis = compression\nvalues = 1.5\n", "outside (0, 1]"));
    EXPECT_TRUE(fails("axis = noise\nvalues = -0.1\n", "negative"));
    EXPECT_TRUE(fails("axis = measurement\nvalues = laser\n", "laser"));
    EXPECT_TRUE(fails("axis = noise\nvalues = 0.1\nrealizations = 0\n", "realizations"));
    EXPECT_TRUE(fails("axis = noise\nvalues = 0.1\nsnapshots_file = /nonexistent/x.cdmc\n", "does not exist"));
    EXPECT_TRUE(fails("axis noise\n", "expected key = value"));
}

// ---------------------------------------------------------------------------
// command line

class Cli : public ::testing::Test {
protected:
    TempDir dir;
    fs::path out(const std::string& name) const { return dir.path / name; }
    std::string err() const { return slurp(dir.path / "stderr.txt"); }
    std::string q(const fs::path& p) const { return "'" + p.string() + "'"; }
};

TEST_F(Cli, UsageExitCodes) {
    EXPECT_EQ(invoke("", dir.path), 2);
    EXPECT_EQ(invoke("--version", dir.path), 0);
    EXPECT_EQ(invoke("frobnicate", dir.path), 2);
    EXPECT_EQ(invoke("run svd", dir.path), 2);
    EXPECT_EQ(invoke("sweep --config " + q(out("missing.cfg")), dir.path), 2);
}

TEST_F(Cli, SynthMinimalAndDeterministic) {
    ASSERT_EQ(invoke("synth --steps 2 --out " + q(out("min")), dir.path), 0) << err();
    const auto X = read_matrix(out("min") / "X.cdmc");
    EXPECT_EQ(X.real.rows(), 1024);
    EXPECT_EQ(X.real.cols(), 2);
    EXPECT_EQ(read_matrix(out("min") / "U.cdmc").real.cols(), 1);

    ASSERT_EQ(invoke("synth --n 128 --seed 9 --noise 0.1 --p 32 --out " + q(out("a")), dir.path), 0) << err();
    ASSERT_EQ(invoke("synth --n 128 --seed 9 --noise 0.1 --p 32 --out " + q(out("b")), dir.path), 0) << err();
    for (const char* f : {"X.cdmc", "U.cdmc", "Y.cdmc", "C.cdmc", "truth.json"})
        EXPECT_EQ(slurp(out("a") / f), slurp(out("b") / f)) << f;
    ASSERT_EQ(invoke("synth --n 128 --seed 10 --out " + q(out("c")), dir.path), 0) << err();
    EXPECT_NE(slurp(out("a") / "U.cdmc"), slurp(out("c") / "U.cdmc"));
}

TEST_F(Cli, DefaultSynthShape) {
    ASSERT_EQ(invoke("synth --out " + q(out("d")), dir.path), 0) << err();
    const auto X = read_matrix(out("d") / "X.cdmc");
    EXPECT_EQ(X.real.rows(), 1024);
    EXPECT_EQ(X.real.cols(), 301);
}

TEST_F(Cli, RunDmdcReportsSpiralSpectrum) {
    const fs::path d = out("s");
    ASSERT_EQ(invoke("synth --out " + q(d), dir.path), 0) << err();
    ASSERT_EQ(invoke("run dmdc --snapshots " + q(d / "X.cdmc") + " --inputs " + q(d / "U.cdmc") + " --dt 0.1 --out " +
                      q(out("m")),
                  dir.path),
              0)
        << err();
    const json j = read_json(out("m") / "model.json");
    const auto l = vector_from_json(j.at("eigenvalues"));
    ASSERT_EQ(l.size(), 2);
    const double s = std::sqrt(0.02);
    for (Index i = 0; i < 2; ++i) {
        EXPECT_NEAR(l(i).real(), 0.9, 1e-8);
        EXPECT_NEAR(std::abs(l(i).imag()), s, 1e-8);
    }
    EXPECT_EQ(j.at("omega").size(), 2u);
    EXPECT_TRUE(fs::exists(out("m") / "B_hat.cdmc"));
}

TEST_F(Cli, RunCdmdcAttachesMetrics) {
    const fs::path d = out("s");
    ASSERT_EQ(invoke("synth --p 128 --measurement gaussian --measurement-seed 3 --out " + q(d), dir.path), 0) << err();
    ASSERT_EQ(invoke("run cdmdc --measurements " + q(d / "Y.cdmc") + " --C " + q(d / "C.cdmc") + " --inputs " +
                      q(d / "U.cdmc") + " --dt 0.1 --truth " + q(d / "truth.json") + " --out " + q(out("m")),
                  dir.path),
              0)
        << err();
    const json j = read_json(out("m") / "model.json");
    EXPECT_EQ(j.at("branch"), "x-unknown-b-unknown");
    EXPECT_LT(j.at("metrics").at("mode_error").get<double>(), 1e-10);
    EXPECT_LT(j.at("metrics").at("b_error").get<double>(), 1e-10);

    // regenerating the same operator from flags gives the same model
    ASSERT_EQ(invoke("run cdmdc --measurements " + q(d / "Y.cdmc") + " --measurement gaussian --p 128 --measurement-seed 3" +
                      " --inputs " + q(d / "U.cdmc") + " --snapshots " + q(d / "X.cdmc") + " --dt 0.1 --out " +
                      q(out("m2")),
                  dir.path),
              0)
        << err();
    EXPECT_EQ(read_json(out("m2") / "model.json").at("branch"), "x-known-b-unknown");
    EXPECT_TRUE(read_json(out("m2") / "model.json").contains("assumptions"));
}

TEST_F(Cli, RunBranchErrors) {
    const fs::path d = out("s");
    ASSERT_EQ(invoke("synth --n 128 --p 32 --out " + q(d), dir.path), 0) << err();
    EXPECT_EQ(invoke("run cdmd --snapshots " + q(d / "X.cdmc") + " --C " + q(d / "C.cdmc"), dir.path), 2);
    EXPECT_NE(err().find("measurements"), std::string::npos) << err();
    EXPECT_EQ(invoke("run dmdc --snapshots " + q(d / "X.cdmc"), dir.path), 2);
    EXPECT_EQ(invoke("run cdmdc --measurements " + q(d / "Y.cdmc") + " --C " + q(d / "C.cdmc") + " --inputs " +
                      q(d / "U.cdmc") + " --B " + q(d / "B_true.cdmc") + " --sparsity-b 3",
                  dir.path),
              2);
    // a different operator than the one that produced Y: recovery fails
    ASSERT_EQ(invoke("synth --n 128 --p 32 --measurement-seed 99 --out " + q(out("t")), dir.path), 0) << err();
    EXPECT_EQ(invoke("run cdmdc --measurements " + q(d / "Y.cdmc") + " --C " + q(out("t") / "C.cdmc") + " --inputs " +
                         q(d / "U.cdmc") + " --rank 2 --rank-tilde 3 --out " + q(out("bad")),
                  dir.path),
              3)
        << err();
}

TEST_F(Cli, VerifyReport) {
    const int code = invoke("verify --seeds 1 --kinds gaussian,uniform --out " + q(out("v")), dir.path);
    const json j = read_json(out("v") / "verify.json");
    ASSERT_EQ(j.at("cases").size(), 2u);
    // every operator identity passes; the lemma pair is the only failure
    std::size_t lemma_failures = 0;
    for (const auto& c : j.at("cases"))
        for (const auto& r : c.at("reports")) {
            const std::string name = r.at("name");
            if (name == "lemma 1" || name == "lemma 2") {
                lemma_failures += r.at("pass").get<bool>() ? 0 : 1;
            } else {
                EXPECT_TRUE(r.at("pass").get<bool>()) << name;
            }
        }
    EXPECT_EQ(j.at("failures").get<std::size_t>(), lemma_failures);
    EXPECT_EQ(code, lemma_failures > 0 ? 4 : 0);
}

TEST_F(Cli, VerifyNoisyIsAdvisory) {
    EXPECT_EQ(invoke("verify --seeds 1 --kinds gaussian --noise 0.5 --out " + q(out("v")), dir.path), 0) << err();
    EXPECT_TRUE(read_json(out("v") / "verify.json").at("advisory").get<bool>());
}

TEST_F(Cli, VerifyMismatchedOperatorIsNamed) {
    const fs::path d = out("s");
    ASSERT_EQ(invoke("synth --n 128 --p 32 --measurement-seed 1 --out " + q(d), dir.path), 0) << err();
    ASSERT_EQ(invoke("synth --n 128 --p 32 --measurement-seed 2 --out " + q(out("t")), dir.path), 0) << err();
    EXPECT_EQ(invoke("verify --snapshots " + q(d / "X.cdmc") + " --inputs " + q(d / "U.cdmc") + " --measurements " +
                      q(d / "Y.cdmc") + " --C " + q(out("t") / "C.cdmc") + " --out " + q(out("v")),
                  dir.path),
              2);
    EXPECT_NE(err().find("consistency precondition"), std::string::npos) << err();
}

namespace {

std::map<std::pair<std::string, std::string>, int> count_rows(const fs::path& csv, std::size_t& total) {
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "axis,param,realization,seed,metric,value");
    std::map<std::pair<std::string, std::string>, int> counts;
    total = 0;
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        EXPECT_EQ(f.size(), 6u) << line;
        if (f.size() == 6) ++counts[{f[1], f[4]}];
        ++total;
    }
    return counts;
}

}  // namespace

TEST_F(Cli, SweepSingleRealizationGivesOneRowPerPoint) {
    std::ofstream(out("c.cfg")) << "axis = compression\nvalues = 0.125, 0.25\nrealizations = 1\nn = 256\nsnapshots = 61\n";
    ASSERT_EQ(invoke("sweep --config " + q(out("c.cfg")) + " --out " + q(out("w")), dir.path), 0) << err();
    std::size_t total = 0;
    const auto counts = count_rows(out("w") / "sweep.csv", total);
    EXPECT_GT(total, 0u);
    for (const auto& [key, n] : counts) EXPECT_EQ(n, 1) << key.first << " " << key.second;
    EXPECT_TRUE(fs::exists(out("w") / "summary.csv"));
}

TEST_F(Cli, NoiseSweepRowsPerMetric) {
    std::ofstream(out("n.cfg")) << "axis = noise\nvalues = 0.1, 0.25, 0.5\nrealizations = 100\nn = 128\n"
                                   "snapshots = 41\np = 48\nseed = 4\n";
    ASSERT_EQ(invoke("sweep --config " + q(out("n.cfg")) + " --out " + q(out("w")), dir.path), 0) << err();
    std::size_t total = 0;
    const auto counts = count_rows(out("w") / "sweep.csv", total);
    std::map<std::string, int> per_metric;
    for (const auto& [key, n] : counts) per_metric[key.second] += n;
    ASSERT_FALSE(per_metric.empty());
    for (const auto& [metric, n] : per_metric) EXPECT_EQ(n, 300) << metric;

    // same seed, same bytes
    ASSERT_EQ(invoke("sweep --config " + q(out("n.cfg")) + " --out " + q(out("w2")), dir.path), 0) << err();
    EXPECT_EQ(slurp(out("w") / "sweep.csv"), slurp(out("w2") / "sweep.csv"));
}

TEST_F(Cli, SweepEmptyAxisIsUsageError) {
    std::ofstream(out("e.cfg")) << "axis = noise\n";
    EXPECT_EQ(invoke("sweep --config " + q(out("e.cfg")) + " --out " + q(out("w")), dir.path), 2);
    EXPECT_NE(err().find("empty sweep axis"), std::string::npos) << err();
}
