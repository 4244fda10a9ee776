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

// Hamiltonians and Lindblad generators. All frequencies and rates are in units
// of the mechanical frequency; time is in units of 1/omega_m.
//
// Dissipators follow D[o] rho = 2 o rho o^+ - o^+ o rho - rho o^+ o with a
// global factor 1/2 on every rate, so Gamma is the population decay rate.
// Superoperators act on column-stacked vec(rho): vec(A rho B) = (B^T ⊗ A) vec(rho).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinmech/quantum_core.hpp"

namespace spinmech {

struct QubitParams {
    double Omega = 0.0;  // Rabi frequency
    double delta = 0.0;  // drive detuning omega_D - Delta
    double g = 0.0;
    double Gamma = 0.0;  // relaxation
    double Gamma_phi_o = 0.0;
    double Gamma_phi_v = 0.0;
    double Gamma_phi_h = 0.0;
    double Delta = 0.0;  // bare splitting
    double N_th = 0.0;   // thermal occupation at Delta

    double Gamma_phi() const noexcept { return Gamma_phi_o + Gamma_phi_v + Gamma_phi_h; }
    void validate() const;
};

struct ModelParams {
    double omega_m = 1.0;
    double gamma_m = 0.0;
    double N_th_mech = 0.0;
    std::vector<QubitParams> qubits;
    HilbertSpec spec{0, 2};

    void validate() const;
};

/// Occupation (exp(hbar omega / k_B T) - 1)^-1 for omega in rad/s and T in K.
double thermal_occupation(double omega, double temperature);

/// Same occupation for a frequency w given in units of a reference frequency
/// whose occupation is `nbar_ref`.
double scaled_occupation(double w, double nbar_ref);

/// omega_m b^+b + sum_j (Omega_j/2) sx_j - (delta_j/2) sz_j + g_j sz_j (b + b^+).
Operator hamiltonian_N(const ModelParams& params);

/// (Omega/2) sz - g sx (b + b^+) + omega_m b^+b on one qubit and `fock_dim` levels.
Operator rabi_hamiltonian(double omega_m, double Omega, double g, int fock_dim);

/// omega_m b^+b - (g^2/Omega)(b + b^+)^2 on the oscillator alone.
Operator effective_hamiltonian(double omega_m, double Omega, double g, int fock_dim);

/// Harmonic frequency omega_m sqrt(1 - 4 g^2 / (omega_m Omega)); NaN past the critical point.
double effective_frequency(double omega_m, double Omega, double g);

struct Channel {
    double rate;  // multiplies D[op]
    SparseMatrix op;
};

class Liouvillian {
public:
    Liouvillian(HilbertSpec spec, SparseMatrix superop, std::optional<Matrix> frame, std::string kind);

    const HilbertSpec& spec() const noexcept { return spec_; }
    const SparseMatrix& superoperator() const noexcept { return superop_; }
    const std::string& kind() const noexcept { return kind_; }

    /// Unitary V whose columns span the basis the superoperator is written in.
    bool has_frame() const noexcept { return frame_.has_value(); }
    const Matrix& frame() const { return *frame_; }

    Matrix to_frame(const Matrix& rho) const;
    Matrix from_frame(const Matrix& rho) const;

    /// L[rho] in the lab basis.
    Matrix apply(const Matrix& rho) const;

    /// max over columns of |sum_i L(ii, col)|; zero for a trace-preserving generator.
    double trace_preservation_error() const;
    /// Max absolute column sum.
    double norm1() const;

private:
    HilbertSpec spec_;
    SparseMatrix superop_;
    std::optional<Matrix> frame_;
    std::string kind_;
};

/// -i[H, .] + sum_k rate_k D[op_k]. Throws NegativeRate unless `allow_negative`.
SparseMatrix lindblad_superoperator(const SparseMatrix& H, const std::vector<Channel>& channels,
                                    bool allow_negative = false);

/// Bare channels of the master equation for `params`.
std::vector<Channel> bare_channels(const ModelParams& params);

Liouvillian liouvillian(const ModelParams& params, const Operator& H);

/// Dissipators rebuilt from eigenoperators of H, with Bohr frequencies closer
/// than `bin_tol` merged into a single jump operator.
Liouvillian dressed_liouvillian(const ModelParams& params, const Operator& H, double bin_tol = 1e-6);

/// Column-stacked vec and its inverse.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, int dim);

}  // namespace spinmech
