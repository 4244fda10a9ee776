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

// Config-driven sweeps that produce the published tables.
#pragma once

#include <string>
#include <vector>

#include "spinmech/analysis.hpp"
#include "spinmech/config.hpp"
#include "spinmech/table.hpp"

namespace spinmech {

/// "lo:hi:n" (n evenly spaced points, n = 1 gives lo) or a comma list.
std::vector<double> parse_grid(const std::string& text);

/// Columns R_um, Omega, delta_c, n_eff, N_th, g_c, f_m_MHz, margin.
Table cooling_sweep(const Config& cfg, const std::vector<double>& radii_um, int jobs);

/// Columns Gamma_tilde_over_omega, fidelity, probability, fidelity_down, probability_down.
Table cat_curve(const Config& cfg, const std::vector<double>& gammas, int jobs);

/// Spin-up branch of the cat protocol at dephasing `gamma`.
WignerGrid cat_wigner(const Config& cfg, double gamma);

/// Columns xi, Omega_ratio, min_dB, theta_star, probability, critical_distance.
Table squeeze_map(const Config& cfg, const std::vector<double>& xis, const std::vector<double>& omegas, int jobs);

WignerGrid squeeze_wigner(const Config& cfg, double xi, double Omega_ratio);

}  // namespace spinmech
