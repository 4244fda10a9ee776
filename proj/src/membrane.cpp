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

#include "spinmech/membrane.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>

#include "spinmech/error.hpp"

namespace spinmech {

using namespace constants;

namespace {

double coupling_prefactor() { return mu_B * g_e / hbar; }

}  // namespace

void MembraneConfig::validate() const {
    auto check = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be strictly positive");
        }
    };
    check(radius, "membrane radius");
    check(areal_density, "areal density");
    check(tension, "tension");
    check(quality_factor, "quality factor");
    check(temperature, "temperature");
}

FieldProfile FieldProfile::magnetic_tip(double peak_gradient, double bias_field, double tip_field, double width,
                                        double r0, double theta0) {
    if (!(width > 0.0)) throw Error(ErrorCode::InvalidArgument, "tip width must be positive");
    auto bump = [=](double r, double theta) {
        const double dx = r * std::cos(theta) - r0 * std::cos(theta0);
        const double dy = r * std::sin(theta) - r0 * std::sin(theta0);
        return std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
    };
    FieldProfile f;
    f.B_perp = [=](double r, double theta) { return bias_field + tip_field * bump(r, theta); };
    f.dBdz = [=](double r, double theta) { return peak_gradient * bump(r, theta); };
    f.r0 = r0;
    f.theta0 = theta0;
    return f;
}

FieldProfile FieldProfile::uniform(double field, double gradient) {
    FieldProfile f;
    f.B_perp = [=](double, double) { return field; };
    f.dBdz = [=](double, double) { return gradient; };
    return f;
}

double field_for_splitting(double f_hz) { return 2.0 * pi * f_hz / coupling_prefactor(); }

double MechanicalMode::psi(double r) const {
    if (r < 0.0 || r > radius) return 0.0;
    if (r == radius) return 0.0;
    return boost::math::cyl_bessel_j(0, alpha01 * r / radius);
}

double drum_mass_fraction() {
    const double j1 = boost::math::cyl_bessel_j(1, alpha01);
    return j1 * j1;
}

MechanicalMode fundamental_mode(const MembraneConfig& cfg) {
    cfg.validate();
    MechanicalMode m;
    m.radius = cfg.radius;
    m.omega_m = alpha01 / cfg.radius * std::sqrt(cfg.tension / cfg.areal_density);
    m.m_eff = cfg.areal_density * pi * cfg.radius * cfg.radius * drum_mass_fraction();
    m.z_zp = std::sqrt(hbar / (2.0 * m.m_eff * m.omega_m));
    m.quality_factor = cfg.quality_factor;
    m.temperature = cfg.temperature;
    return m;
}

double calibrated_tension(double radius, double areal_density, double gradient, double xi_target) {
    if (!(radius > 0.0) || !(areal_density > 0.0) || !(gradient > 0.0) || !(xi_target > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "calibration inputs must be positive");
    }
    const double m = areal_density * pi * radius * radius * drum_mass_fraction();
    const double K = coupling_prefactor() * gradient * std::sqrt(hbar / (2.0 * m));
    const double omega = std::pow(K / xi_target, 2.0 / 3.0);
    const double s = omega * radius / alpha01;
    return areal_density * s * s;
}

QubitSite site_parameters(const MechanicalMode& mode, const FieldProfile& field, double r, double theta,
                          SiteRole role) {
    if (!(r >= 0.0) || r > mode.radius * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "site radius " << r << " m lies outside the membrane (R = " << mode.radius << " m)";
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
    const double psi = mode.psi(std::min(r, mode.radius));
    QubitSite s;
    s.r = r;
    s.theta = theta;
    s.Delta = coupling_prefactor() * field.B_perp(r, theta);
    s.g = coupling_prefactor() * field.dBdz(r, theta) * psi * mode.z_zp;
    s.role = role;
    return s;
}

CoolingSite choose_cooling_site(const MechanicalMode& mode, const FieldProfile& field, double Gamma, double gamma_m,
                                double Nbar) {
    const double lower = std::sqrt(std::max(0.0, Gamma * gamma_m * Nbar));
    if (!(Gamma > 0.0)) {
        throw Error(ErrorCode::Infeasible, "no cooling site: Gamma = 0 leaves no room for g_c < Gamma");
    }
    if (lower >= Gamma) {
        std::ostringstream os;
        os << "no cooling site: g_c^2 >> Gamma gamma_m Nbar needs g_c > " << lower
           << " rad/s but g_c < Gamma = " << Gamma << " rad/s";
        throw Error(ErrorCode::Infeasible, os.str());
    }
    const double target = (0.25 * Gamma * Gamma > lower * lower) ? 0.5 * Gamma : std::sqrt(lower * Gamma);

    auto g_at = [&](double r) {
        return std::abs(site_parameters(mode, field, r, field.theta0, SiteRole::Cooling).g);
    };
    auto finish = [&](double r, bool sweet) {
        CoolingSite c;
        c.site = site_parameters(mode, field, r, field.theta0, SiteRole::Cooling);
        c.target_g = target;
        c.margin = lower > 0.0 ? (c.site.g * c.site.g) / (lower * lower) : INFINITY;
        c.at_sweet_spot = sweet;
        return c;
    };

    const double r0 = field.r0;
    const double g0 = g_at(r0);
    if (g0 <= target) {
        if (g0 > lower && g0 < Gamma) return finish(r0, true);
        std::ostringstream os;
        os << "no cooling site: maximal coupling " << g0 << " rad/s does not exceed the lower bound " << lower
           << " rad/s";
        throw Error(ErrorCode::Infeasible, os.str());
    }

    // Scan outward from the sweet spot for the first sign change of g - target.
    const int n_scan = 400;
    const double span = mode.radius - r0;
    double a = r0, fa = g0 - target;
    for (int k = 1; k <= n_scan; ++k) {
        const double b = r0 + span * k / n_scan;
        const double fb = g_at(b) - target;
        if (fb == 0.0) return finish(b, false);
        if ((fa > 0.0) != (fb > 0.0)) {
            boost::uintmax_t iters = 200;
            auto tol = boost::math::tools::eps_tolerance<double>(50);
            auto root = boost::math::tools::toms748_solve([&](double r) { return g_at(r) - target; }, a, b, fa,
                                                          fb, tol, iters);
            return finish(0.5 * (root.first + root.second), false);
        }
        a = b;
        fa = fb;
    }
    throw Error(ErrorCode::Infeasible, "no cooling site: coupling never drops to the target along theta0");
}

}  // namespace spinmech
