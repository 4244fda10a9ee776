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

#include "spinmech/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <tuple>

#include "spinmech/model.hpp"

namespace spinmech {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_')) return false;
    return true;
}

std::optional<double> to_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

double qubit_occupation(double Delta, double T) { return Delta > 0.0 ? thermal_occupation(Delta, T) : 0.0; }

}  // namespace

Config Config::parse(const std::string& text, const std::string& source) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        auto fail = [&](const std::string& why) {
            throw Error(ErrorCode::Config, source + ":" + std::to_string(lineno) + ": " + why);
        };
        if (eq == std::string::npos) fail("expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!valid_key(key)) fail("invalid key '" + key + "'");
        if (value.empty()) fail("empty value for '" + key + "'");
        if (c.entries_.count(key)) fail("duplicate key '" + key + "'");
        c.entries_[key] = value;
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Config, "cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str(), path);
}

void Config::set(const std::string& key, const std::string& value) {
    if (!valid_key(key)) throw Error(ErrorCode::Config, "invalid key '" + key + "'");
    entries_[key] = trim(value);
}

std::optional<std::string> Config::get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

double Config::number(const std::string& key) const {
    auto v = get(key);
    if (!v) throw Error(ErrorCode::Config, "missing required key '" + key + "'");
    auto d = to_double(*v);
    if (!d) throw Error(ErrorCode::Config, "key '" + key + "' is not a number: '" + *v + "'");
    return *d;
}

double Config::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

int Config::integer_or(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw Error(ErrorCode::Config, "key '" + key + "' must be an integer");
    }
    return static_cast<int>(v);
}

bool Config::boolean_or(const std::string& key, bool fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw Error(ErrorCode::Config, "key '" + key + "' must be true or false");
}

std::string Config::to_string() const {
    std::ostringstream os;
    for (const auto& [k, v] : entries_) os << k << " = " << v << '\n';
    return os.str();
}

SystemModel build_system(const Config& cfg, std::optional<double> radius_um) {
    SystemModel s{};
    const double R_um = radius_um ? *radius_um : cfg.number("membrane.radius_um");
    s.membrane.radius = R_um * 1e-6;
    s.membrane.tension = cfg.number("membrane.tension_N_per_m");
    s.membrane.areal_density = cfg.number("membrane.areal_density_kg_m2");
    s.membrane.quality_factor = cfg.number("membrane.Q");
    s.membrane.temperature = cfg.number("membrane.T_mK") * 1e-3;
    const double G = cfg.number("field.peak_gradient_T_per_m");
    const double bias_GHz = cfg.number("field.bias_splitting_GHz");
    const double tip_GHz = cfg.number_or("field.tip_splitting_GHz", 1.0);
    const double width_fraction = cfg.number_or("field.width_fraction", 0.3);
    try {
        s.membrane.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::Config, e.what());
    }
    if (!(width_fraction > 0.0)) throw Error(ErrorCode::Config, "field.width_fraction must be positive");

    s.mode = fundamental_mode(s.membrane);
    s.field = FieldProfile::magnetic_tip(G, field_for_splitting(bias_GHz * 1e9), field_for_splitting(tip_GHz * 1e9),
                                         width_fraction * s.membrane.radius);
    s.omega_m = s.mode.omega_m;
    s.N_th_mech = thermal_occupation(s.omega_m, s.membrane.temperature);
    s.gamma_m = 1.0 / s.membrane.quality_factor;

    const double r_central = cfg.number_or("sites.central.r_um", 0.0) * 1e-6;
    try {
        s.central = site_parameters(s.mode, s.field, r_central, 0.0, SiteRole::Central);
    } catch (const Error& e) {
        throw Error(ErrorCode::Config, std::string("sites.central.r_um: ") + e.what());
    }
    s.xi = s.central.g / s.omega_m;
    s.Delta0 = s.central.Delta / s.omega_m;

    s.Gamma = cfg.number_or("rates.Gamma_over_omega_m", 0.1);
    s.Gamma_phi_o = cfg.number_or("rates.Gamma_phi_o_over_omega_m", 0.1);
    s.Gamma_phi_v = cfg.number_or("rates.Gamma_phi_v_over_omega_m", 0.1);
    s.Gamma_phi_h = cfg.number_or("rates.Gamma_phi_h_kHz", 100.0) * 2.0 * constants::pi * 1e3 / s.omega_m;

    const bool auto_site = cfg.boolean_or("sites.cooling.auto", !cfg.has("sites.cooling.r_um"));
    if (!auto_site) {
        if (!cfg.has("sites.cooling.r_um")) {
            throw Error(ErrorCode::Config, "sites.cooling.auto = false needs sites.cooling.r_um");
        }
        s.cooling_r = cfg.number("sites.cooling.r_um") * 1e-6;
    }

    s.protocol_Gamma_phi_h = cfg.number_or("protocol.Gamma_phi_h_over_omega_m", 0.1);
    s.protocol_mech_occupation = cfg.number_or("protocol.mech_occupation", 0.0);
    s.fock_cool = cfg.integer_or("simulation.fock_dim_cool", 40);
    s.fock_cat = cfg.integer_or("simulation.fock_dim_cat", 80);
    s.fock_squeeze = cfg.integer_or("simulation.fock_dim_squeeze", 40);
    s.tol.rtol = cfg.number_or("simulation.rtol", 1e-8);
    s.tol.atol = cfg.number_or("simulation.atol", 1e-10);
    s.cooling_grid = cfg.integer_or("cooling.grid", 15);
    s.bin_tol = cfg.number_or("dressed.bin_tol", 1e-6);
    s.detuning_ratio_min = cfg.number_or("central.detuning_ratio_min", 20.0);
    s.wigner_points = cfg.integer_or("wigner.points", 81);

    for (const auto& [name, v] : {std::pair<const char*, double>{"rates.Gamma_over_omega_m", s.Gamma},
                                  {"rates.Gamma_phi_o_over_omega_m", s.Gamma_phi_o},
                                  {"rates.Gamma_phi_v_over_omega_m", s.Gamma_phi_v},
                                  {"rates.Gamma_phi_h_kHz", s.Gamma_phi_h},
                                  {"protocol.Gamma_phi_h_over_omega_m", s.protocol_Gamma_phi_h},
                                  {"protocol.mech_occupation", s.protocol_mech_occupation},
                                  {"dressed.bin_tol", s.bin_tol}}) {
        if (!(v >= 0.0)) throw Error(ErrorCode::Config, std::string(name) + " must be >= 0");
    }
    for (const auto& [name, v, lo] : {std::tuple<const char*, int, int>{"simulation.fock_dim_cool", s.fock_cool, 2},
                                      {"simulation.fock_dim_cat", s.fock_cat, 2},
                                      {"simulation.fock_dim_squeeze", s.fock_squeeze, 2},
                                      {"cooling.grid", s.cooling_grid, 1},
                                      {"wigner.points", s.wigner_points, 2}}) {
        if (v < lo) throw Error(ErrorCode::Config, std::string(name) + " must be >= " + std::to_string(lo));
    }
    if (!(s.tol.rtol > 0.0) || !(s.tol.atol > 0.0)) {
        throw Error(ErrorCode::Config, "simulation.rtol and simulation.atol must be positive");
    }
    return s;
}

CoolingSite cooling_site(const SystemModel& sys) {
    if (sys.cooling_r) {
        CoolingSite c;
        c.site = site_parameters(sys.mode, sys.field, *sys.cooling_r, 0.0, SiteRole::Cooling);
        const double Gamma = sys.Gamma * sys.omega_m;
        const double lower2 = Gamma * sys.gamma_m * sys.omega_m * sys.N_th_mech;
        c.target_g = c.site.g;
        c.margin = lower2 > 0.0 ? c.site.g * c.site.g / lower2 : INFINITY;
        c.at_sweet_spot = *sys.cooling_r == 0.0;
        return c;
    }
    return choose_cooling_site(sys.mode, sys.field, sys.Gamma * sys.omega_m, sys.gamma_m * sys.omega_m,
                               sys.N_th_mech);
}

CoolingSetup cooling_setup(const SystemModel& sys) {
    const CoolingSite c = cooling_site(sys);
    CoolingSetup s;
    s.g_c = c.site.g / sys.omega_m;
    s.Gamma = sys.Gamma;
    s.Gamma_phi = sys.Gamma_phi_o + sys.Gamma_phi_v + sys.Gamma_phi_h;
    s.N_q = qubit_occupation(std::abs(c.site.Delta), sys.membrane.temperature);
    s.gamma_m = sys.gamma_m;
    s.N_th_mech = sys.N_th_mech;
    s.fock_dim = sys.fock_cool;
    return s;
}

CentralQubitSetup central_setup(const SystemModel& sys) {
    const CoolingSite c = cooling_site(sys);
    CentralQubitSetup s;
    s.g0 = sys.xi;
    s.detuning_offset = (c.site.Delta - sys.central.Delta) / sys.omega_m;
    return s;
}

CatOptions cat_options(const SystemModel& sys, double Gamma_phi) {
    CatOptions o;
    o.xi = sys.xi;
    o.Delta0 = sys.Delta0;
    o.Gamma_phi = Gamma_phi;
    o.gamma_m = sys.gamma_m;
    o.N_th_mech = sys.protocol_mech_occupation;
    o.fock_dim = sys.fock_cat;
    o.tol = sys.tol;
    return o;
}

SqueezeOptions squeeze_options(const SystemModel& sys) {
    SqueezeOptions o;
    o.Gamma_phi = sys.protocol_Gamma_phi_h;
    o.Gamma = 0.0;
    o.gamma_m = sys.gamma_m;
    o.N_th_mech = sys.protocol_mech_occupation;
    o.N_q = qubit_occupation(std::abs(sys.central.Delta), sys.membrane.temperature);
    o.fock_dim = sys.fock_squeeze;
    o.bin_tol = sys.bin_tol;
    o.tol = sys.tol;
    return o;
}

}  // namespace spinmech
