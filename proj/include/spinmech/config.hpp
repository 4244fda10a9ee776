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

// Flat key = value configuration and the derived simulation model.
#pragma once

#include <map>
#include <optional>
#include <string>

#include "spinmech/dynamics.hpp"
#include "spinmech/membrane.hpp"
#include "spinmech/protocols.hpp"

namespace spinmech {

class Config {
public:
    /// Lines of `key = value`; `#` starts a comment. Throws ErrorCode::Config
    /// with the offending line number.
    static Config parse(const std::string& text, const std::string& source = "<string>");
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;

    /// Required numeric key; a missing or malformed key names itself in the error.
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    int integer_or(const std::string& key, int fallback) const;
    bool boolean_or(const std::string& key, bool fallback) const;

    const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
    /// Canonical text: sorted keys, one `key = value` per line.
    std::string to_string() const;

private:
    std::map<std::string, std::string> entries_;
};

struct SystemModel {
    MembraneConfig membrane;
    MechanicalMode mode;
    FieldProfile field;
    double omega_m;   // rad/s
    double N_th_mech;
    double gamma_m;   // units of omega_m
    QubitSite central;
    double xi;        // central g / omega_m
    double Delta0;    // central splitting / omega_m

    // Cooling-qubit rates, units of omega_m.
    double Gamma;
    double Gamma_phi_o;
    double Gamma_phi_v;
    double Gamma_phi_h;
    double N_q;

    std::optional<double> cooling_r;  // manual cooling site (m)

    double protocol_Gamma_phi_h;
    double protocol_mech_occupation;

    int fock_cool;
    int fock_cat;
    int fock_squeeze;
    int cooling_grid;
    double bin_tol;
    double detuning_ratio_min;
    int wigner_points;
    Tolerances tol;
};

/// Required keys: membrane.radius_um, membrane.tension_N_per_m,
/// membrane.areal_density_kg_m2, membrane.Q, membrane.T_mK,
/// field.peak_gradient_T_per_m, field.bias_splitting_GHz.
SystemModel build_system(const Config& cfg, std::optional<double> radius_um = std::nullopt);

/// Cooling site, either the configured radius or the automatic placement.
CoolingSite cooling_site(const SystemModel& sys);

CoolingSetup cooling_setup(const SystemModel& sys);
CentralQubitSetup central_setup(const SystemModel& sys);
CatOptions cat_options(const SystemModel& sys, double Gamma_phi);
SqueezeOptions squeeze_options(const SystemModel& sys);

}  // namespace spinmech
