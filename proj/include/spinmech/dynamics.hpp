// Copyright 2026 The spinmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "spinmech/model.hpp"
#include "spinmech/quantum_core.hpp"

namespace spinmech {

struct Tolerances {
    double rtol = 1e-8;
    double atol = 1e-10;
    double min_step = 1e-13;
    long max_steps = 50'000'000;
};

struct EvolveStats {
    long accepted = 0;
    long rejected = 0;
    double max_trace_drift = 0.0;
};

/// rho(t) under d rho/dt = L[rho], adaptive Dormand-Prince 5(4). Hermiticity is
/// restored after every accepted step.
DensityMatrix evolve(const DensityMatrix& rho0, const Liouvillian& L, double t, const Tolerances& tol = {},
                     EvolveStats* stats = nullptr);

/// States at each of `times` (ascending, >= 0). Steps are clipped to land on them.
std::vector<DensityMatrix> evolve_samples(const DensityMatrix& rho0, const Liouvillian& L,
                                          const std::vector<double>& times, const Tolerances& tol = {},
                                          EvolveStats* stats = nullptr);

struct SteadyStateInfo {
    double residual;  // max |L rho| / (||L||_1 max |rho|)
};

/// Kernel of L with the trace constraint replacing one equation, by sparse LU.
DensityMatrix steady_state(const Liouvillian& L, SteadyStateInfo* info = nullptr);

/// exp(-i angle sigma_axis / 2) on `qubit`.
Operator pulse_unitary(const HilbertSpec& spec, int qubit, Axis axis, double angle);
DensityMatrix apply_pulse(const DensityMatrix& rho, int qubit, Axis axis, double angle);

inline constexpr double kZeroProbability = 1e-12;

/// (P rho P / p, p) with P the projector on `outcome` of `qubit`.
std::pair<DensityMatrix, double> postselect(const DensityMatrix& rho, int qubit, SpinState outcome);

/// Resets one qubit to a definite state, keeping everything else.
DensityMatrix reset_spin(const DensityMatrix& rho, int qubit, SpinState state);
/// Replaces the oscillator by `osc`, keeping the qubit register's reduced state.
DensityMatrix reset_oscillator(const DensityMatrix& rho, const Matrix& osc);

struct FreeEvolve {
    double duration;
    std::shared_ptr<const Liouvillian> generator;
};
struct Pulse {
    int qubit;
    Axis axis;
    double angle;
};
struct Measure {
    int qubit;
    SpinState outcome;
};
struct InitializeSpin {
    int qubit;
    SpinState state;
};
struct InitializeOscillator {
    enum class Kind { Ground, Thermal, SteadyStateOf };
    Kind kind = Kind::Ground;
    double nbar = 0.0;
    std::shared_ptr<const Liouvillian> generator;  // SteadyStateOf only
};

using ProtocolStep = std::variant<FreeEvolve, Pulse, Measure, InitializeSpin, InitializeOscillator>;

struct Observable {
    std::string name;
    Operator op;
};

struct RunResult {
    DensityMatrix final_state;
    double probability = 1.0;
    std::vector<std::string> observable_names;
    /// traces[k][m]: observable m after step k (row 0 is the initial state).
    std::vector<std::vector<double>> traces;
    double min_eigenvalue = 1.0;
    double max_trace_drift = 0.0;
    std::map<std::string, std::string> metadata;
};

/// Runs `steps` in order starting from `initial` (default: every spin down,
/// oscillator in vacuum). Postselection probabilities multiply.
RunResult run_protocol(const std::vector<ProtocolStep>& steps, const HilbertSpec& spec, const Tolerances& tol = {},
                       const std::vector<Observable>& observables = {},
                       const DensityMatrix* initial = nullptr);

}  // namespace spinmech
