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


#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "spinmech/analysis.hpp"
#include "spinmech/dynamics.hpp"
#include "spinmech/model.hpp"
#include "test_util.hpp"

using namespace spinmech;
using spinmech::testing::error_code_of;
using spinmech::testing::random_density;

namespace {

ModelParams one_qubit(int fock, QubitParams q) {
    ModelParams p;
    p.spec = HilbertSpec(1, fock);
    p.qubits = {q};
    return p;
}

DensityMatrix down_vacuum(const HilbertSpec& s) {
    return product_density(s, std::vector<SpinState>(s.n_qubits(), SpinState::Down), thermal_oscillator(s.fock_dim(), 0.0));
}

}  // namespace

TEST_CASE("evolve for zero time returns the input") {
    auto p = one_qubit(4, {0.3, 0.1, 0.2, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0});
    auto L = liouvillian(p, hamiltonian_N(p));
    std::mt19937 rng(1);
    auto rho = random_density(p.spec, rng);
    CHECK((evolve(rho, L, 0.0).matrix() - rho.matrix()).norm() == 0.0);
    CHECK(error_code_of([&] { evolve(rho, L, -1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("spin-dependent displacement follows the closed form") {
    const double g = 0.7;
    QubitParams q;
    q.g = g;
    auto p = one_qubit(40, q);
    auto L = liouvillian(p, hamiltonian_N(p));
    auto a = fock_ops(p.spec).annihilation;
    for (SpinState s : {SpinState::Down, SpinState::Up}) {
        const double sz = s == SpinState::Up ? 1.0 : -1.0;
        auto rho0 = product_density(p.spec, {s}, thermal_oscillator(40, 0.0));
        std::vector<double> times{0.4, 1.3, 3.1};
        EvolveStats st;
        auto out = evolve_samples(rho0, L, times, {}, &st);
        for (std::size_t k = 0; k < times.size(); ++k) {
            const Complex alpha = sz * g * (std::exp(Complex(0, -times[k])) - 1.0);
            CHECK(std::abs(expectation(out[k], a) - alpha) < 1e-6);
        }
        CHECK(st.max_trace_drift <= 1e-9);
    }
}

TEST_CASE("damped oscillator relaxes at the mechanical rate") {
    ModelParams p;
    p.spec = HilbertSpec(0, 120);
    p.gamma_m = 0.05;
    p.N_th_mech = 1.5;
    auto L = liouvillian(p, hamiltonian_N(p));
    auto rho0 = DensityMatrix(p.spec, thermal_oscillator(120, 5.0));
    const double n0 = phonon_number(rho0);
    std::vector<double> times{1.0, 10.0, 40.0};
    auto out = evolve_samples(rho0, L, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double expected = 1.5 + (n0 - 1.5) * std::exp(-p.gamma_m * times[k]);
        CHECK(std::abs(phonon_number(out[k]) - expected) < 1e-6);
    }
}

TEST_CASE("trace and Hermiticity survive random generators") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    for (int k = 0; k < 50; ++k) {
        QubitParams q{u(rng), u(rng) - 0.25, u(rng), u(rng), u(rng), 0.0, 0.0, 0.0, u(rng)};
        auto p = one_qubit(4, q);
        p.gamma_m = 0.1 * u(rng);
        p.N_th_mech = u(rng);
        auto L = liouvillian(p, hamiltonian_N(p));
        auto rho0 = random_density(p.spec, rng);
        EvolveStats st;
        auto rho = evolve(rho0, L, 2.0, {}, &st);
        auto d = rho.diagnostics();
        CHECK(d.hermiticity_error < 1e-12);
        CHECK(st.max_trace_drift <= 1e-9);
        CHECK(d.trace_error <= 1e-9);
        CHECK(d.min_eigenvalue >= -1e-7);
    }
}

TEST_CASE("stiff generator reports step-size underflow") {
    QubitParams q;
    q.Gamma = 1e4;
    auto p = one_qubit(2, q);
    auto L = liouvillian(p, hamiltonian_N(p));
    auto rho0 = product_density(p.spec, {SpinState::Up}, thermal_oscillator(2, 0.0));
    Tolerances tol;
    tol.min_step = 1e-3;
    CHECK(error_code_of([&] { evolve(rho0, L, 1.0, tol); }) == ErrorCode::StepSizeUnderflow);
    Tolerances bad;
    bad.rtol = 0.0;
    CHECK(error_code_of([&] { evolve(rho0, L, 1.0, bad); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("thermal steady state") {
    ModelParams p;
    p.spec = HilbertSpec(0, 150);
    p.gamma_m = 0.01;
    p.N_th_mech = 3.0;
    auto L = liouvillian(p, hamiltonian_N(p));
    SteadyStateInfo info;
    auto rho = steady_state(L, &info);
    CHECK(info.residual <= 1e-10);
    const double r = 3.0 / 4.0;
    const double truncated = r / (1 - r) - 150 * std::pow(r, 150) / (1 - std::pow(r, 150));
    CHECK(std::abs(phonon_number(rho) - truncated) < 1e-8);
    CHECK(std::abs(phonon_number(rho) - 3.0) < 1e-8);
    Matrix off = rho.matrix();
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("qubit relaxes to the spin-down state") {
    QubitParams q;
    q.Gamma = 0.2;
    auto p = one_qubit(1, q);
    auto rho = steady_state(liouvillian(p, hamiltonian_N(p)));
    CHECK(std::abs(rho.matrix()(1, 1) - 1.0) < 1e-12);
}

TEST_CASE("degenerate kernels are rejected") {
    ModelParams p;
    p.spec = HilbertSpec(0, 3);
    auto zero = liouvillian(p, Operator::zero(p.spec));
    CHECK(error_code_of([&] { steady_state(zero); }) == ErrorCode::NonUniqueSteadyState);
    QubitParams q;
    q.Gamma_phi_o = 0.3;
    auto pq = one_qubit(1, q);
    auto dephasing = liouvillian(pq, Operator::zero(pq.spec));
    CHECK(error_code_of([&] { steady_state(dephasing); }) == ErrorCode::NonUniqueSteadyState);
}

TEST_CASE("steady state agrees with long evolution") {
    QubitParams q;
    q.Omega = 0.4;
    q.delta = -1.0;
    q.g = 0.05;
    q.Gamma = 0.3;
    q.Gamma_phi_o = 0.1;
    auto p = one_qubit(8, q);
    p.gamma_m = 0.05;
    p.N_th_mech = 0.5;
    auto L = liouvillian(p, hamiltonian_N(p));
    auto ss = steady_state(L);
    auto late = evolve(down_vacuum(p.spec), L, 20.0 / 0.05 * 1.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(late.matrix() - ss.matrix(), Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().cwiseAbs().sum() <= 1e-4);
}

TEST_CASE("pulses") {
    HilbertSpec s(1, 3);
    std::mt19937 rng(2);
    auto rho = random_density(s, rng);
    CHECK((apply_pulse(rho, 0, Axis::Y, 0.0).matrix() - rho.matrix()).norm() < 1e-15);

    auto twice = apply_pulse(apply_pulse(rho, 0, Axis::X, M_PI / 2), 0, Axis::X, M_PI / 2);
    auto once = apply_pulse(rho, 0, Axis::X, M_PI);
    CHECK((twice.matrix() - once.matrix()).norm() < 1e-14);

    HilbertSpec q(1, 1);
    auto down = product_density(q, {SpinState::Down}, Matrix::Ones(1, 1));
    auto out = apply_pulse(down, 0, Axis::X, M_PI / 2);
    Vector psi(2);
    psi << Complex(0, -1) / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CHECK((out.matrix() - psi * psi.adjoint()).norm() < 1e-15);
    CHECK(std::abs(expectation(out, qubit_ops(q, 0).sz)) < 1e-12);
    CHECK(error_code_of([&] { apply_pulse(down, 0, Axis::X, NAN); }) == ErrorCode::InvalidArgument);
    CHECK(error_code_of([&] { apply_pulse(down, 1, Axis::X, 1.0); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("postselection") {
    HilbertSpec s(1, 30);
    Matrix rm = thermal_oscillator(30, 0.4);
    auto rho = product_density(s, {SpinState::Up}, rm);
    auto [post, p] = postselect(rho, 0, SpinState::Up);
    CHECK(p == doctest::Approx(1.0));
    CHECK((partial_trace_to_oscillator(post).matrix() - rm).norm() < 1e-14);
    CHECK(error_code_of([&] { postselect(rho, 0, SpinState::Down); }) == ErrorCode::ZeroProbability);

    const Complex alpha(1.2, 0.3);
    Vector psi = (product_state(s, {SpinState::Up}, coherent_state(30, alpha)) +
                  product_state(s, {SpinState::Down}, coherent_state(30, -alpha))) /
                 std::sqrt(2.0);
    auto [cat, pc] = postselect(DensityMatrix::from_pure(s, psi), 0, SpinState::Up);
    CHECK(std::abs(pc - 0.5) < 1e-10);
    Vector a = coherent_state(30, alpha);
    CHECK((partial_trace_to_oscillator(cat).matrix() - a * a.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("protocol runner") {
    HilbertSpec s(1, 10);
    SUBCASE("empty protocol keeps the ground state") {
        auto r = run_protocol({}, s);
        CHECK(r.probability == 1.0);
        CHECK((r.final_state.matrix() - down_vacuum(s).matrix()).norm() == 0.0);
        CHECK(r.traces.size() == 1);
    }
    SUBCASE("cooling then a measurement on a polarised spin") {
        QubitParams q;
        q.Omega = 0.3;
        q.delta = -1.0;
        q.g = 0.05;
        q.Gamma = 0.2;
        auto p = one_qubit(10, q);
        p.gamma_m = 1e-3;
        p.N_th_mech = 1.0;
        auto L = std::make_shared<const Liouvillian>(liouvillian(p, hamiltonian_N(p)));
        InitializeOscillator cool{InitializeOscillator::Kind::SteadyStateOf, 0.0, L};
        std::vector<ProtocolStep> steps{cool, InitializeSpin{0, SpinState::Up}, Measure{0, SpinState::Up}};
        auto n = fock_ops(s).number;
        auto r = run_protocol(steps, s, {}, {{"n", n}});
        CHECK(r.probability == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.traces.size() == 4);
        CHECK(r.traces[1][0] < 1.0);
        CHECK(r.metadata.at("fock_dim") == "10");
    }
    SUBCASE("thermal initialisation and free evolution record observables") {
        auto p = one_qubit(10, {});
        p.gamma_m = 0.1;
        p.N_th_mech = 0.2;
        auto L = std::make_shared<const Liouvillian>(liouvillian(p, hamiltonian_N(p)));
        std::vector<ProtocolStep> steps{InitializeOscillator{InitializeOscillator::Kind::Thermal, 1.0, nullptr},
                                        Pulse{0, Axis::X, M_PI}, FreeEvolve{1.0, L}};
        auto r = run_protocol(steps, s, {}, {{"sz", qubit_ops(s, 0).sz}});
        CHECK(r.traces[0][0] == doctest::Approx(-1.0));
        CHECK(r.traces[2][0] == doctest::Approx(1.0));
        CHECK(r.min_eigenvalue >= -1e-7);
        CHECK(r.max_trace_drift <= 1e-9);
        CHECK(r.metadata.at("generators") == "bare");
        CHECK(error_code_of([&] { run_protocol({FreeEvolve{-1.0, L}}, s); }) == ErrorCode::InvalidArgument);
    }
}
