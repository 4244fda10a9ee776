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

// Membrane mechanics and magnetic coupling, in SI units. Everything downstream
// of this header works in units of the mode frequency.
#pragma once

#include <functional>
#include <string>

namespace spinmech {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double k_B = 1.380649e-23;         // J / K
inline constexpr double mu_B = 9.274009994e-24;     // J / T
inline constexpr double g_e = 2.00231930;
inline constexpr double pi = 3.14159265358979323846;
/// First zero of J0.
inline constexpr double alpha01 = 2.404825557695773;
}  // namespace constants

struct MembraneConfig {
    double radius;         // m
    double areal_density;  // kg / m^2
    double tension;        // N / m
    double quality_factor;
    double temperature;  // K

    void validate() const;
};

/// Out-of-plane field and gradient at z = 0, as functions of polar position.
struct FieldProfile {
    std::function<double(double r, double theta)> B_perp;  // T
    std::function<double(double r, double theta)> dBdz;    // T / m
    double r0 = 0.0;
    double theta0 = 0.0;

    /// Gaussian tip bump of width `width` centred on (r0, theta0):
    /// dBdz = peak * exp(-d^2 / 2w^2), B_perp = bias + tip * exp(-d^2 / 2w^2).
    static FieldProfile magnetic_tip(double peak_gradient, double bias_field, double tip_field, double width,
                                     double r0 = 0.0, double theta0 = 0.0);
    static FieldProfile uniform(double field, double gradient);
};

/// Field that produces a Zeeman splitting `f_hz` (ordinary frequency).
double field_for_splitting(double f_hz);

struct MechanicalMode {
    double radius;  // m
    double omega_m;  // rad / s
    double m_eff;    // kg
    double z_zp;     // m
    double quality_factor;
    double temperature;

    /// J0(alpha01 r / R), zero outside the disc.
    double psi(double r) const;
    double gamma_m() const { return omega_m / quality_factor; }
};

MechanicalMode fundamental_mode(const MembraneConfig& cfg);

/// J1(alpha01)^2, the ratio m_eff / (rho pi R^2) for the fundamental drum mode.
double drum_mass_fraction();

/// Tension that makes a sweet-spot qubit at gradient `gradient` (psi = 1)
/// reach g / omega_m = xi_target on a membrane of this radius and density.
double calibrated_tension(double radius, double areal_density, double gradient, double xi_target);

/// Default tension (N/m): R = 1.5 um, 7.5e-7 kg/m^2, 2.7e6 T/m -> xi = 2.
inline constexpr double kDefaultTension = 4.7628687356679927e-07;

enum class SiteRole { Central, Cooling };

struct QubitSite {
    double r;      // m
    double theta;  // rad
    double Delta;  // rad / s
    double g;      // rad / s
    SiteRole role;
};

QubitSite site_parameters(const MechanicalMode& mode, const FieldProfile& field, double r, double theta,
                          SiteRole role = SiteRole::Central);

struct CoolingSite {
    QubitSite site;
    double target_g;  // rad / s
    double margin;    // g_c^2 / (Gamma gamma_m Nbar)
    bool at_sweet_spot;
};

/// Places a cooling qubit so that sqrt(Gamma gamma_m Nbar) < g_c < Gamma.
/// Aims for g_c = Gamma / 2; when that breaks the lower bound the geometric
/// mean of the two bounds is used instead. Throws Infeasible otherwise.
CoolingSite choose_cooling_site(const MechanicalMode& mode, const FieldProfile& field, double Gamma,
                                double gamma_m, double Nbar);

}  // namespace spinmech
