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

// Observables on the mechanical mode. Quadratures follow X(theta) = b e^{i theta}
// + b^+ e^{-i theta}, so the vacuum variance is 1 and phase-space coordinates are
// x = X(0), p = -i(b - b^+).
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinmech/quantum_core.hpp"

namespace spinmech {

/// <b^+ b>; accepts states with or without qubits.
double phonon_number(const DensityMatrix& rho);

/// <psi|rho|psi>; psi must be normalised to 1e-8. A psi of fock_dim entries is
/// compared against the oscillator's reduced state.
double fidelity(const DensityMatrix& rho, const Vector& psi);

struct WignerSpec {
    double extent = 5.0;  // grid spans [-extent, extent] on both axes
    int points = 81;
};

/// Half-width 2 * amplitude + 3 that keeps a state of that coherent amplitude on the grid.
double wigner_extent_for(double max_amplitude);

struct WignerGrid {
    std::vector<double> x;
    std::vector<double> p;
    Eigen::MatrixXd values;  // values(i, j) at (x[j], p[i])
    double integral = 0.0;   // sum W dx dp
    bool support_warning = false;

    double min() const { return values.minCoeff(); }
    double max() const { return values.maxCoeff(); }
};

inline constexpr const char* kWignerConvention =
    "W(x,p) = (1/2pi) tr[rho D(a) P D(-a)], a = (x + i p)/2, x = b + b^+, p = -i(b - b^+), integral W dx dp = 1";

/// Displaced-parity evaluation on an oscillator-only state. Sets support_warning
/// when the discrete integral is off by more than 2e-2.
WignerGrid wigner(const DensityMatrix& rho_oscillator, const WignerSpec& spec);

std::string wigner_csv(const WignerGrid& grid);
std::string wigner_metadata_json(const WignerGrid& grid, const std::string& label);

struct Moments {
    Complex b;
    Complex b2;
    double n;
};

Moments oscillator_moments(const DensityMatrix& rho);

double quadrature_variance(const DensityMatrix& rho, double theta);

struct QuadratureExtremes {
    double theta_min;
    double variance_min;
    double variance_max;
};

QuadratureExtremes min_quadrature_variance(const DensityMatrix& rho);

/// 10 log10(variance), vacuum reference 1.
double squeezing_db(double variance);

}  // namespace spinmech
