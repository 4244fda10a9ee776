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

#include "spinmech/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>

namespace spinmech {

namespace {

double parse_number(const std::string& s, const std::string& whole) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::InvalidArgument, "bad grid '" + whole + "'");
    }
    return v;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    const char sep = text.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    if (sep == ':') {
        if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "grid '" + text + "' is not lo:hi:n");
        const double lo = parse_number(parts[0], text), hi = parse_number(parts[1], text);
        const double nd = parse_number(parts[2], text);
        if (nd < 1 || nd != std::floor(nd)) throw Error(ErrorCode::InvalidArgument, "grid '" + text + "' needs n >= 1");
        const int n = static_cast<int>(nd);
        std::vector<double> out(n);
        for (int i = 0; i < n; ++i) out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
        return out;
    }
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(parse_number(p, text));
    if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty grid");
    return out;
}

Table cooling_sweep(const Config& cfg, const std::vector<double>& radii_um, int jobs) {
    Table t({"R_um", "Omega", "delta_c", "n_eff", "N_th", "g_c", "f_m_MHz", "margin"});
    for (double R : radii_um) {
        const SystemModel sys = build_system(cfg, R);
        const CoolingSite site = cooling_site(sys);
        const CoolingSetup setup = cooling_setup(sys);
        CoolingOptions opt;
        opt.grid = sys.cooling_grid;
        opt.jobs = jobs;
        const CoolingResult r = cool(setup, opt);
        t.add_row({R, r.Omega, r.delta_c, r.n_eff, r.N_th, setup.g_c, sys.omega_m / (2e6 * constants::pi),
                   site.margin});
    }
    return t;
}

Table cat_curve(const Config& cfg, const std::vector<double>& gammas, int jobs) {
    const SystemModel sys = build_system(cfg);
    std::vector<std::optional<CatResult>> out(gammas.size());
    parallel_for(static_cast<int>(gammas.size()), jobs,
                 [&](int i) { out[i] = run_cat(cat_options(sys, gammas[i])); });
    Table t({"Gamma_tilde_over_omega", "fidelity", "probability", "fidelity_down", "probability_down"});
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        t.add_row({gammas[i], out[i]->up.fidelity, out[i]->up.probability, out[i]->down.fidelity,
                   out[i]->down.probability});
    }
    return t;
}

WignerGrid cat_wigner(const Config& cfg, double gamma) {
    const SystemModel sys = build_system(cfg);
    const CatResult r = run_cat(cat_options(sys, gamma));
    return wigner(r.up.state, {wigner_extent_for(2.0 * sys.xi), sys.wigner_points});
}

Table squeeze_map(const Config& cfg, const std::vector<double>& xis, const std::vector<double>& omegas, int jobs) {
    const SystemModel sys = build_system(cfg);
    const SqueezeScan scan = squeeze_scan(squeeze_options(sys), xis, omegas, jobs);
    Table t({"xi", "Omega_ratio", "min_dB", "theta_star", "probability", "critical_distance"});
    for (const auto& r : scan.table) t.add_row({r.xi, r.Omega_ratio, r.db, r.theta, r.probability, r.critical_distance});
    return t;
}

WignerGrid squeeze_wigner(const Config& cfg, double xi, double Omega_ratio) {
    const SystemModel sys = build_system(cfg);
    const SqueezeResult r = run_squeeze(squeeze_options(sys), xi, Omega_ratio);
    const Moments m = oscillator_moments(r.state);
    const double extent = 2.0 * std::abs(m.b) + 3.0 * std::sqrt(r.variance_max) + 1.0;
    return wigner(r.state, {extent, sys.wigner_points});
}

}  // namespace spinmech
