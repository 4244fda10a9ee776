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
#include <random>

#include "spinmech/quantum_core.hpp"
#include "test_util.hpp"

using namespace spinmech;
using spinmech::testing::error_code_of;

TEST_CASE("hilbert spec dimensions and ordering") {
    HilbertSpec s(2, 5);
    CHECK(s.dim() == 20);
    CHECK(s.qubit_dim() == 4);
    CHECK(s.index(3, 4) == 19);
    CHECK(s.oscillator() == HilbertSpec(0, 5));
    CHECK(error_code_of([] { HilbertSpec(-1, 3); }) == ErrorCode::InvalidArgument);
    CHECK(error_code_of([] { HilbertSpec(1, 0); }) == ErrorCode::InvalidArgument);
    CHECK(error_code_of([] { HilbertSpec(9, 2); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("fock_dim 2 ladder") {
    auto ops = fock_ops(HilbertSpec(0, 2));
    Matrix expected(2, 2);
    expected << 0, 1, 0, 0;
    CHECK((ops.annihilation.matrix() - expected).norm() == 0.0);
    CHECK(error_code_of([] { fock_ops(HilbertSpec(1, 1)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("ladder matrix elements and number operator") {
    const int D = 12;
    auto ops = fock_ops(HilbertSpec(0, D));
    for (int n = 0; n + 1 < D; ++n) CHECK(ops.annihilation.matrix()(n, n + 1).real() == doctest::Approx(std::sqrt(n + 1.0)).epsilon(1e-15));
    CHECK((ops.creation.matrix() - ops.annihilation.matrix().adjoint()).norm() == 0.0);
    for (int n = 0; n < D; ++n) CHECK(ops.number.matrix()(n, n).real() == doctest::Approx(n));
    CHECK(ops.number.matrix().imag().norm() == 0.0);
}

TEST_CASE("truncated commutator differs from identity only at the top level") {
    const int D = 9;
    auto ops = fock_ops(HilbertSpec(0, D));
    Matrix c = commutator(ops.annihilation, ops.creation).matrix();
    Matrix expected = Matrix::Identity(D, D);
    expected(D - 1, D - 1) = -(D - 1.0);
    CHECK((c - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("qubit operators on the qubit-only space") {
    HilbertSpec s(1, 1);
    auto p = qubit_ops(s, 0);
    Matrix sz(2, 2);
    sz << 1, 0, 0, -1;
    CHECK((p.sz.matrix() - sz).norm() == 0.0);
    CHECK((p.s_plus.matrix() - 0.5 * (p.sx.matrix() + Complex(0, 1) * p.sy.matrix())).norm() < 1e-15);
    CHECK((p.s_minus.matrix() - 0.5 * (p.sx.matrix() - Complex(0, 1) * p.sy.matrix())).norm() < 1e-15);
    CHECK(error_code_of([&] { qubit_ops(s, 1); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("sx squares to identity in every embedding") {
    for (int nq = 1; nq <= 3; ++nq) {
        HilbertSpec s(nq, 3);
        for (int j = 0; j < nq; ++j) {
            auto p = qubit_ops(s, j);
            CHECK(((p.sx * p.sx).matrix() - Matrix::Identity(s.dim(), s.dim())).norm() < 1e-14);
        }
    }
}

TEST_CASE("operators on disjoint qubit slots commute exactly") {
    HilbertSpec s(2, 3);
    auto p0 = qubit_ops(s, 0);
    auto p1 = qubit_ops(s, 1);
    CHECK(commutator(p0.sz, p1.sx).matrix().norm() == 0.0);
    CHECK(commutator(p0.sy, p1.s_minus).matrix().norm() == 0.0);
}

TEST_CASE("operator spec mismatch is rejected") {
    auto a = Operator::identity(HilbertSpec(1, 3));
    auto b = Operator::identity(HilbertSpec(0, 6));
    CHECK(error_code_of([&] { auto c = a + b; }) == ErrorCode::SpecMismatch);
    CHECK(error_code_of([&] { auto c = a * b; }) == ErrorCode::SpecMismatch);
}

TEST_CASE("density matrix validation") {
    HilbertSpec s(0, 2);
    Matrix m(2, 2);
    m << 0.5, 0.1, 0.2, 0.5;
    CHECK(error_code_of([&] { DensityMatrix(s, m); }) == ErrorCode::InvalidArgument);
    m << 0.6, 0.0, 0.0, 0.6;
    CHECK(error_code_of([&] { DensityMatrix(s, m); }) == ErrorCode::InvalidArgument);
    m << 1.1, 0.0, 0.0, -0.1;
    CHECK(error_code_of([&] { DensityMatrix(s, m); }) == ErrorCode::InvalidArgument);
    m << 0.7, 0.0, 0.0, 0.3;
    DensityMatrix ok(s, m);
    auto d = ok.diagnostics();
    CHECK(d.hermiticity_error == 0.0);
    CHECK(d.trace_error < 1e-15);
    CHECK(d.min_eigenvalue == doctest::Approx(0.3));
}

TEST_CASE("expectation values") {
    HilbertSpec s(0, 40);
    auto ops = fock_ops(s);
    auto vac = DensityMatrix::from_pure(s, fock_state(40, 0));
    CHECK(std::abs(expectation(vac, ops.number)) == 0.0);

    // Truncated Gibbs closed form: r/(1-r) - D r^D / (1 - r^D).
    DensityMatrix th(s, thermal_oscillator(40, 2.0));
    const double r = 2.0 / 3.0;
    const double exact = r / (1 - r) - 40 * std::pow(r, 40) / (1 - std::pow(r, 40));
    CHECK(expectation(th, ops.number).real() == doctest::Approx(exact).epsilon(1e-12));
    CHECK(std::abs(expectation(th, ops.number) - 2.0) < 1e-4);

    std::mt19937 rng(7);
    HilbertSpec s2(1, 5);
    auto rho = spinmech::testing::random_density(s2, rng);
    CHECK(std::abs(expectation(rho, Operator::identity(s2)) - 1.0) < 1e-12);
    CHECK(std::abs(expectation(rho, qubit_ops(s2, 0).sx).imag()) < 1e-10);
    CHECK(error_code_of([&] { expectation(rho, ops.number); }) == ErrorCode::SpecMismatch);
}

TEST_CASE("partial trace onto the oscillator") {
    HilbertSpec s(1, 4);
    Matrix rm = thermal_oscillator(4, 0.7);
    auto prod = product_density(s, {SpinState::Up}, rm);
    CHECK((partial_trace_to_oscillator(prod).matrix() - rm).norm() < 1e-14);

    Vector psi = Vector::Zero(s.dim());
    psi(s.index(0, 0)) = 1.0 / std::sqrt(2.0);
    psi(s.index(1, 1)) = 1.0 / std::sqrt(2.0);
    auto red = partial_trace_to_oscillator(DensityMatrix::from_pure(s, psi)).matrix();
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = expected(1, 1) = 0.5;
    CHECK((red - expected).norm() < 1e-15);

    std::mt19937 rng(11);
    HilbertSpec s2(2, 3);
    for (int k = 0; k < 10; ++k) {
        auto rho = spinmech::testing::random_density(s2, rng);
        CHECK(std::abs(partial_trace_to_oscillator(rho).matrix().trace() - rho.matrix().trace()) < 1e-12);
        CHECK(std::abs(partial_trace_to_qubits(rho).trace() - 1.0) < 1e-12);
    }
}

TEST_CASE("coherent states") {
    CHECK((coherent_state(10, 0.0) - fock_state(10, 0)).norm() < 1e-15);
    CHECK(coherent_nmax_required(2.0) == 14);
    CHECK(error_code_of([] { coherent_state(14, 2.0); }) == ErrorCode::TruncationRisk);
    CHECK_NOTHROW(coherent_state(15, 2.0));

    const Complex alpha(1.3, -0.8);
    const int D = 40;
    Vector a = coherent_state(D, alpha);
    CHECK(std::abs(a.norm() - 1.0) < 1e-10);
    auto ops = fock_ops(HilbertSpec(0, D));
    CHECK(std::abs(a.dot(ops.annihilation.matrix() * a) - alpha) < 1e-8);

    const Complex beta(-0.4, 1.1);
    Vector b = coherent_state(D, beta);
    const Complex expected =
        std::exp(-(std::norm(alpha) + std::norm(beta)) / 2.0 + std::conj(alpha) * beta);
    CHECK(std::abs(a.dot(b) - expected) < 1e-10);
}

TEST_CASE("fock and product states") {
    CHECK(error_code_of([] { fock_state(5, 5); }) == ErrorCode::IndexOutOfRange);
    HilbertSpec s(2, 3);
    Vector v = product_state(s, {SpinState::Up, SpinState::Down}, fock_state(3, 2));
    CHECK(std::abs(v(s.index(1, 2)) - 1.0) < 1e-15);
    CHECK(std::abs(v.norm() - 1.0) < 1e-15);
    CHECK(error_code_of([&] { product_state(s, {SpinState::Up}, fock_state(3, 0)); }) == ErrorCode::SpecMismatch);
    auto p = qubit_ops(s, 1);
    auto rho = DensityMatrix::from_pure(s, v);
    CHECK(expectation(rho, p.sz).real() == doctest::Approx(-1.0));
    CHECK(expectation(rho, qubit_ops(s, 0).sz).real() == doctest::Approx(1.0));
}
