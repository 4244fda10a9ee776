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

// Cooling, cat-state and squeezing procedures in units of omega_m.
#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "spinmech/analysis.hpp"
#include "spinmech/dynamics.hpp"
#include "spinmech/model.hpp"

namespace spinmech {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Results are written by
/// index, so the outcome does not depend on scheduling. The exception of the
/// lowest failing index is rethrown.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

int default_jobs();

// ---------------------------------------------------------------- cooling

struct CoolingSetup {
    double g_c = 0.0;
    double Gamma = 0.1;
    double Gamma_phi = 0.0;  // total dephasing of the cooling qubit
    double N_q = 0.0;        // qubit bath occupation
    double gamma_m = 1e-5;
    double N_th_mech = 0.0;
    int fock_dim = 40;
};

struct CoolingOptions {
    int grid = 15;
    double Omega_lo = 0.05, Omega_hi = 2.0;
    double delta_lo = -1.5, delta_hi = -0.5;
    bool refine = true;
    int max_refine_evals = 80;
    int jobs = 1;
};

struct CoolingPoint {
    double Omega;
    double delta;
    double n_eff;
};

struct CoolingResult {
    double n_eff = 0.0;
    double Omega = 0.0;
    double delta_c = 0.0;
    double N_th = 0.0;
    double residual = 0.0;
    std::vector<CoolingPoint> table;  // coarse grid, row-major in Omega then delta
};

ModelParams cooling_model(const CoolingSetup& s, double Omega, double delta);

/// Steady-state <b^+ b> for one drive setting.
double cooling_n_eff(const CoolingSetup& s, double Omega, double delta, double* residual = nullptr);

CoolingResult cool(const CoolingSetup& s, const CoolingOptions& opt = {});

struct CentralQubitSetup {
    double g0 = 0.0;
    double detuning_offset = 0.0;  // (Delta_c - Delta_0) / omega_m: central detuning is delta_c + this
};

struct TwoQubitCoolingResult {
    CoolingResult single;
    double central_detuning = 0.0;  // delta_0 at the optimum
    double detuning_ratio = 0.0;    // |delta_0| / Omega
    double n_two_displaced = 0.0;   // <(b + xi0 sz0)^+ (b + xi0 sz0)>
    double n_two_raw = 0.0;         // <b^+ b>
    double relative_change = 0.0;   // |n_two_displaced - n_single| / n_single
};

/// Optimises the cooling qubit alone, then adds the central qubit at that
/// optimum. With `enforce_ratio` a detuning ratio below `ratio_min` throws
/// Precondition.
TwoQubitCoolingResult cool_with_central_qubit(const CoolingSetup& s, const CentralQubitSetup& c,
                                              const CoolingOptions& opt = {}, double ratio_min = 20.0,
                                              bool enforce_ratio = true);

/// Two-qubit evaluation at a fixed drive.
TwoQubitCoolingResult central_qubit_at(const CoolingSetup& s, const CentralQubitSetup& c, double Omega,
                                       double delta, double n_single);

// ---------------------------------------------------------------- cat

/// Normalised superposition
/// 1/2 [e^{2i xi^2}(e^{-i phi}|2xi> ± e^{i phi}|-2xi>) ± e^{-2i xi^2}(|-2i xi> ∓ |2i xi>)],
/// upper signs for SpinState::Up.
Vector cat_target(double xi, double phi, SpinState sign, int fock_dim);

struct CatOptions {
    double xi = 2.0;
    double Delta0 = 0.0;  // bare splitting of the central qubit, units of omega_m
    double Gamma_phi = 0.0;
    double gamma_m = 1e-5;
    double N_th_mech = 0.0;
    int fock_dim = 80;
    bool dressed = false;
    Tolerances tol{};
};

struct CatBranch {
    SpinState outcome;
    DensityMatrix state;  // oscillator
    double fidelity;
    double probability;
};

struct CatResult {
    double xi;
    double phi;
    std::string generator;
    CatBranch up;
    CatBranch down;
    double min_eigenvalue;
    double max_trace_drift;
};

CatResult run_cat(const CatOptions& opt);

// ---------------------------------------------------------------- squeezing

struct SqueezeOptions {
    double Gamma_phi = 0.1;
    double Gamma = 0.0;
    double gamma_m = 1e-5;
    double N_th_mech = 0.0;
    double N_q = 0.0;
    int fock_dim = 40;
    double bin_tol = 1e-6;
    bool dressed = true;
    Tolerances tol{};
};

struct SqueezeResult {
    double xi;
    double Omega_ratio;
    double variance;
    double db;
    double theta;
    double variance_max;
    double probability;
    double critical_distance;  // |4 xi^2 - Omega| / Omega
    DensityMatrix state;       // oscillator, postselected on spin down
};

SqueezeResult run_squeeze(const SqueezeOptions& opt, double xi, double Omega_ratio);

struct SqueezeScan {
    std::vector<SqueezeResult> table;  // xi-major
    std::size_t best = 0;
};

SqueezeScan squeeze_scan(const SqueezeOptions& opt, const std::vector<double>& xis,
                         const std::vector<double>& Omegas, int jobs = 1);

struct HeffReport {
    double variance_rabi;
    double variance_eff;
    double relative_deviation;
};

/// Minimal quadrature variance after a quarter period, unitary Rabi evolution
/// (spin starting and postselected in its lower state) against H_eff.
HeffReport heff_shorttime_check(double xi, double Omega_ratio, int fock_dim = 60, const Tolerances& tol = {});

}  // namespace spinmech
