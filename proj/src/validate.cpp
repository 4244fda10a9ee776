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

#include "spinmech/validate.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "spinmech/analysis.hpp"
#include "spinmech/dynamics.hpp"
#include "spinmech/model.hpp"
#include "spinmech/table.hpp"

namespace spinmech {

namespace {

struct Check {
    bool ok;
    std::string detail;
};

Check within(double value, double bound, const std::string& what) {
    std::ostringstream os;
    os << what << " = " << format_number(value) << " (bound " << format_number(bound) << ")";
    return {std::isfinite(value) && value <= bound, os.str()};
}

Matrix random_density(int d, std::mt19937& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = Complex(n(rng), n(rng));
    Matrix r = g * g.adjoint();
    return r / r.trace();
}

ModelParams random_model(int n_qubits, int fock, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ModelParams p;
    p.spec = HilbertSpec(n_qubits, fock);
    p.gamma_m = 0.1 * u(rng);
    p.N_th_mech = 3.0 * u(rng);
    for (int j = 0; j < n_qubits; ++j) {
        QubitParams q;
        q.Omega = 2.0 * u(rng);
        q.delta = 2.0 * u(rng) - 1.0;
        q.g = u(rng);
        q.Gamma = 0.2 * u(rng);
        q.Gamma_phi_o = 0.1 * u(rng);
        q.N_th = 0.5 * u(rng);
        p.qubits.push_back(q);
    }
    return p;
}

Check ladder_commutator() {
    const HilbertSpec s(0, 12);
    const auto [a, ad, n] = fock_ops(s);
    Matrix expect = Matrix::Identity(12, 12);
    expect(11, 11) = -11.0;
    return within((commutator(a, ad).matrix() - expect).cwiseAbs().maxCoeff(), 1e-12, "max |[a,a+] - expected|");
}

Check disjoint_slots_commute() {
    const HilbertSpec s(2, 3);
    double worst = 0.0;
    const PauliOps p0 = qubit_ops(s, 0), p1 = qubit_ops(s, 1);
    for (const Operator* x : {&p0.sx, &p0.sy, &p0.sz, &p0.s_minus})
        for (const Operator* y : {&p1.sx, &p1.sy, &p1.sz, &p1.s_plus})
            worst = std::max(worst, commutator(*x, *y).matrix().cwiseAbs().maxCoeff());
    return within(worst, 0.0, "max |[op_0, op_1]|");
}

Check coherent_norm() {
    double worst = 0.0;
    for (double r : {0.0, 0.5, 1.0, 2.0, 3.0, 4.0}) {
        for (double t : {0.0, 1.0, 2.5}) {
            const double a = r;
            const int f = coherent_nmax_required(a) + 1;
            worst = std::max(worst, std::abs(coherent_state(f, std::polar(a, t)).norm() - 1.0));
        }
    }
    return within(worst, 1e-10, "max |norm - 1|");
}

Check partial_trace_preserves_trace() {
    std::mt19937 rng(7);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const HilbertSpec s(2, 5);
        const DensityMatrix rho = DensityMatrix::trusted(s, random_density(s.dim(), rng));
        const DensityMatrix red = partial_trace_to_oscillator(rho);
        worst = std::max(worst, std::abs(red.matrix().trace() - rho.matrix().trace()));
    }
    return within(worst, 1e-12, "max |tr reduced - tr full|");
}

Check hamiltonian_hermitian() {
    std::mt19937 rng(11);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Operator H = hamiltonian_N(random_model(1 + k % 2, 6, rng));
        worst = std::max(worst, (H.matrix() - H.matrix().adjoint()).cwiseAbs().maxCoeff());
    }
    return within(worst, 1e-12, "max |H - H+|");
}

Check generator_trace(bool dressed) {
    std::mt19937 rng(dressed ? 17 : 13);
    const ModelParams p = random_model(1, 6, rng);
    const Operator H = hamiltonian_N(p);
    const Liouvillian L = dressed ? dressed_liouvillian(p, H) : liouvillian(p, H);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const Matrix rho = random_density(p.spec.dim(), rng);
        worst = std::max(worst, std::abs(L.apply(rho).trace()));
    }
    return within(worst, 1e-12, "max |tr L[rho]|");
}

Check rabi_equivalence() {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double Omega = 0.2 + 3.0 * u(rng), g = 0.8 * u(rng);
        ModelParams p;
        p.spec = HilbertSpec(1, 30);
        QubitParams q;
        q.Omega = Omega;
        q.g = g;
        p.qubits = {q};
        Eigen::SelfAdjointEigenSolver<Matrix> a(hamiltonian_N(p).matrix(), Eigen::EigenvaluesOnly);
        Eigen::SelfAdjointEigenSolver<Matrix> b(rabi_hamiltonian(1.0, Omega, g, 30).matrix(), Eigen::EigenvaluesOnly);
        worst = std::max(worst, (a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff());
    }
    return within(worst, 1e-10, "max eigenvalue difference");
}

Check quadrature_minimizer() {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(0.0, 2.0 * 3.14159265358979);
    const DensityMatrix rho = DensityMatrix::trusted(HilbertSpec(0, 8), random_density(8, rng));
    const QuadratureExtremes ex = min_quadrature_variance(rho);
    double worst = -INFINITY;
    for (int k = 0; k < 100; ++k) worst = std::max(worst, ex.variance_min - quadrature_variance(rho, u(rng)));
    const double at_min = std::abs(quadrature_variance(rho, ex.theta_min) - ex.variance_min);
    return within(std::max(worst, at_min), 1e-12, "min variance excess over random angles");
}

Check thermalization(bool mutate) {
    const double nbar = 2.0;
    ModelParams p;
    p.spec = HilbertSpec(0, 60);
    p.gamma_m = 0.05;
    p.N_th_mech = nbar;
    const Operator H = hamiltonian_N(p);
    std::vector<Channel> ch = bare_channels(p);
    if (mutate) ch[1].rate = -ch[1].rate;
    const Liouvillian L(p.spec, lindblad_superoperator(H.sparse(), ch, mutate), std::nullopt, "bare");
    const DensityMatrix ss = steady_state(L);
    return within(std::abs(phonon_number(ss) - nbar) / nbar, 1e-6, "relative |n_ss - N|");
}

Check displacement_closed_form() {
    const double g = 0.3;
    const int f = 30;
    ModelParams p;
    p.spec = HilbertSpec(1, f);
    QubitParams q;
    q.g = g;
    p.qubits = {q};
    const Liouvillian L = liouvillian(p, hamiltonian_N(p));
    const DensityMatrix rho0 = product_density(p.spec, {SpinState::Down}, thermal_oscillator(f, 0.0));
    const auto [a, ad, n] = fock_ops(p.spec);
    double worst = 0.0;
    const std::vector<double> times = {0.5, 1.0, 2.0, 3.14159265358979};
    const auto states = evolve_samples(rho0, L, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const Complex expect = -g * (std::polar(1.0, -times[k]) - 1.0);  // sigma_z = -1
        worst = std::max(worst, std::abs(expectation(states[k], a) - expect));
    }
    return within(worst, 1e-6, "max |<b(t)> - closed form|");
}

Check effective_frequency_check() {
    double worst = 0.0;
    const double Omega = 10.0;
    for (double frac : {0.0, 0.3, 0.6, 0.9}) {
        const double g = std::sqrt(frac * Omega / 4.0);
        Eigen::SelfAdjointEigenSolver<Matrix> es(effective_hamiltonian(1.0, Omega, g, 200).matrix(),
                                                 Eigen::EigenvaluesOnly);
        const double eps = effective_frequency(1.0, Omega, g);
        worst = std::max(worst, std::abs((es.eigenvalues()(1) - es.eigenvalues()(0)) - eps) / eps);
    }
    return within(worst, 1e-6, "max relative level-spacing error");
}

Check damped_occupation() {
    const double nbar = 1.5, gamma = 0.2;
    ModelParams p;
    p.spec = HilbertSpec(0, 120);
    p.gamma_m = gamma;
    p.N_th_mech = nbar;
    const Liouvillian L = liouvillian(p, hamiltonian_N(p));
    const DensityMatrix rho0(p.spec, thermal_oscillator(120, 5.0));
    const double n0 = phonon_number(rho0);
    const std::vector<double> times = {1.0, 5.0, 10.0};
    const auto states = evolve_samples(rho0, L, times);
    double worst = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double expect = nbar + (n0 - nbar) * std::exp(-gamma * times[k]);
        worst = std::max(worst, std::abs(phonon_number(states[k]) - expect));
    }
    return within(worst, 1e-6, "max |n(t) - rate equation|");
}

Check trace_drift() {
    std::mt19937 rng(29);
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
        const ModelParams p = random_model(1, 8, rng);
        const Liouvillian L = liouvillian(p, hamiltonian_N(p));
        EvolveStats st;
        const DensityMatrix rho0 = DensityMatrix::trusted(p.spec, random_density(p.spec.dim(), rng));
        evolve(rho0, L, 3.0, {}, &st);
        worst = std::max(worst, st.max_trace_drift);
    }
    return within(worst, 1e-9, "max trace drift");
}

Check steady_vs_evolve() {
    ModelParams p;
    p.spec = HilbertSpec(1, 6);
    p.gamma_m = 0.5;
    p.N_th_mech = 0.3;
    QubitParams q;
    q.Omega = 0.7;
    q.delta = -0.4;
    q.g = 0.2;
    q.Gamma = 0.8;
    q.Gamma_phi_o = 0.3;
    p.qubits = {q};
    const Liouvillian L = liouvillian(p, hamiltonian_N(p));
    const DensityMatrix ss = steady_state(L);
    const DensityMatrix rho0 = product_density(p.spec, {SpinState::Up}, thermal_oscillator(6, 0.0));
    const DensityMatrix late = evolve(rho0, L, 20.0 / 0.5 * 2.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(late.matrix() - ss.matrix(), Eigen::EigenvaluesOnly);
    return within(es.eigenvalues().cwiseAbs().sum(), 1e-4, "trace distance");
}

Check dressed_matches_bare() {
    ModelParams p;
    p.spec = HilbertSpec(1, 8);
    p.gamma_m = 0.03;
    p.N_th_mech = 1.7;
    QubitParams q;
    q.delta = 0.37;
    q.Gamma = 0.2;
    q.Gamma_phi_o = 0.1;
    q.N_th = 0.25;
    p.qubits = {q};
    const Operator H = hamiltonian_N(p);
    const Liouvillian bare = liouvillian(p, H);
    const Liouvillian dressed = dressed_liouvillian(p, H);
    std::mt19937 rng(31);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const Matrix rho = random_density(p.spec.dim(), rng);
        worst = std::max(worst, (bare.apply(rho) - dressed.apply(rho)).cwiseAbs().maxCoeff());
    }
    return within(worst, 1e-10, "max |L_bare - L_dressed|");
}

Check relaxation_rate() {
    const double Gamma = 0.3, nq = 0.4;
    ModelParams p;
    p.spec = HilbertSpec(1, 2);
    QubitParams q;
    q.Gamma = Gamma;
    q.N_th = nq;
    p.qubits = {q};
    const Liouvillian L = liouvillian(p, hamiltonian_N(p));
    const DensityMatrix rho0 = product_density(p.spec, {SpinState::Up}, thermal_oscillator(2, 0.0));
    const Operator sz = qubit_ops(p.spec, 0).sz;
    const double s_inf = -1.0 / (2.0 * nq + 1.0);
    double worst = 0.0;
    const std::vector<double> times = {0.5, 2.0, 4.0};
    const auto states = evolve_samples(rho0, L, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double expect = s_inf + (1.0 - s_inf) * std::exp(-Gamma * (2.0 * nq + 1.0) * times[k]);
        worst = std::max(worst, std::abs(expectation(states[k], sz).real() - expect));
    }
    return within(worst, 1e-6, "max |<sz>(t) - exp decay at Gamma(2N+1)|");
}

Check unitary_limit() {
    ModelParams p;
    p.spec = HilbertSpec(1, 10);
    QubitParams q;
    q.Omega = 0.8;
    q.delta = 0.3;
    q.g = 0.25;
    p.qubits = {q};
    const Operator H = hamiltonian_N(p);
    const Liouvillian L = liouvillian(p, H);
    const Vector psi0 = product_state(p.spec, {SpinState::Down}, fock_state(10, 1));
    const double t = 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(H.matrix());
    Vector c = es.eigenvectors().adjoint() * psi0;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -es.eigenvalues()(k) * t);
    const Vector psi = es.eigenvectors() * c;
    const DensityMatrix out = evolve(DensityMatrix::from_pure(p.spec, psi0), L, t);
    return within((out.matrix() - psi * psi.adjoint()).cwiseAbs().maxCoeff(), 1e-6, "max |rho - psi psi+|");
}

struct Entry {
    const char* name;
    const char* suite;
    std::function<Check()> run;
};

}  // namespace

std::vector<InvariantResult> run_validation(const std::string& suite, const ValidationOptions& opt) {
    if (suite != "core" && suite != "physics" && suite != "all") {
        throw Error(ErrorCode::InvalidArgument, "unknown suite '" + suite + "' (core, physics, all)");
    }
    const std::vector<Entry> entries = {
        {"ladder_commutator_truncation", "core", ladder_commutator},
        {"disjoint_qubit_slots_commute", "core", disjoint_slots_commute},
        {"coherent_state_normalised", "core", coherent_norm},
        {"partial_trace_preserves_trace", "core", partial_trace_preserves_trace},
        {"hamiltonian_hermitian", "core", hamiltonian_hermitian},
        {"bare_generator_trace_preserving", "core", [] { return generator_trace(false); }},
        {"dressed_generator_trace_preserving", "core", [] { return generator_trace(true); }},
        {"rabi_spectrum_equivalence", "core", rabi_equivalence},
        {"quadrature_minimizer_exact", "core", quadrature_minimizer},
        {"thermalization_to_bath_occupation", "physics",
         [&] { return thermalization(opt.inject_thermal_sign_error); }},
        {"displaced_oscillator_closed_form", "physics", displacement_closed_form},
        {"effective_frequency_bogoliubov", "physics", effective_frequency_check},
        {"damped_occupation_rate_equation", "physics", damped_occupation},
        {"integrator_trace_drift", "physics", trace_drift},
        {"steady_state_matches_long_evolution", "physics", steady_vs_evolve},
        {"dressed_equals_bare_when_decoupled", "physics", dressed_matches_bare},
        {"qubit_relaxation_rate", "physics", relaxation_rate},
        {"unitary_limit_matches_schrodinger", "physics", unitary_limit},
    };
    std::vector<InvariantResult> out;
    for (const auto& e : entries) {
        if (suite != "all" && suite != e.suite) continue;
        InvariantResult r{e.name, e.suite, false, ""};
        try {
            const Check c = e.run();
            r.passed = c.ok;
            r.detail = c.detail;
        } catch (const std::exception& ex) {
            r.detail = std::string("error: ") + ex.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_report(const std::vector<InvariantResult>& results) {
    std::ostringstream os;
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    int failed = 0;
    for (const auto& r : results) {
        os << (r.passed ? "PASS  " : "FAIL  ") << r.name << std::string(width - r.name.size() + 2, ' ') << "["
           << r.suite << "] " << r.detail << '\n';
        failed += r.passed ? 0 : 1;
    }
    os << results.size() - failed << "/" << results.size() << " invariants passed\n";
    return os.str();
}

}  // namespace spinmech
