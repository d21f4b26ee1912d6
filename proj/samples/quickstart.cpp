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

// Simulate the forced spiral plant, compress the snapshots with a Gaussian
// operator, and identify the model from the compressed data alone.

#include "cdmdc/cdmdc.hpp"

#include <cstdio>

int main() {
    using namespace cdmdc;

    const auto run = default_run(/*seed=*/1);
    const MeasurementOperator C({MeasurementKind::GaussianRandom, 128, run.snapshots.n(), 7});

    auto in = measure(run.snapshots, C, /*keep_full_state=*/false);
    in.r = 2;
    in.r_tilde = 3;
    const auto model = cdmdc::cdmdc(in);

    std::printf("branch %s\n", model.branch.c_str());
    for (Index i = 0; i < model.eigenvalues.size(); ++i)
        std::printf("lambda %lld = %.8f %+.8fi\n", static_cast<long long>(i), model.eigenvalues(i).real(),
                    model.eigenvalues(i).imag());

    const auto err = compare_models(run.Phi_true, run.lambda_true, model, run.B_true);
    std::printf("mode error %.3e, B error %.3e\n", err.mode_error, err.b_error.value_or(0.0));
    return 0;
}
