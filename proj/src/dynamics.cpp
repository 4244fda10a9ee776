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

#include "spinmech/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseLU>

namespace spinmech {

namespace {

struct DopriState {
    const SparseMatrix& L;
    int dim;
    const Tolerances& tol;
    EvolveStats& stats;
    Vector y;
    Vector k1;
    double h = 0.0;
    Complex trace0;
};

Complex vec_trace(const Vector& y, int d) {
    Complex t = 0.0;
    for (int i = 0; i < d; ++i) t += y(static_cast<Eigen::Index>(i) * (d + 1));
    return t;
}

void hermitize(Vector& y, int d) {
    Eigen::Map<Matrix> m(y.data(), d, d);
    m = (0.5 * (m + m.adjoint())).eval();
}

double scaled_norm(const Vector& e, const Vector& y0, const Vector& y1, const Tolerances& tol) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        const double sc = tol.atol + tol.rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        const double r = std::abs(e(i)) / sc;
        s += r * r;
    }
    return std::sqrt(s / static_cast<double>(std::max<Eigen::Index>(1, e.size())));
}

void initial_step(DopriState& st, double span) {
    const Vector zero = Vector::Zero(st.y.size());
    const double d0 = scaled_norm(st.y, st.y, zero, st.tol);
    const double d1 = scaled_norm(st.k1, st.y, zero, st.tol);
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    st.h = std::min(h, span);
}

// Advances st.y by exactly `span`.
void integrate(DopriState& st, double span) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (span <= 0.0) return;
    if (st.h <= 0.0) initial_step(st, span);
    double t = 0.0;
    const double h_floor = st.tol.min_step * std::max(1.0, span);
    Vector k2, k3, k4, k5, k6, k7, ynew, err;
    while (t < span) {
        double h = std::min(st.h, span - t);
        const bool last = (h >= span - t);
        k2 = st.L * (st.y + h * (a21 * st.k1));
        k3 = st.L * (st.y + h * (a31 * st.k1 + a32 * k2));
        k4 = st.L * (st.y + h * (a41 * st.k1 + a42 * k2 + a43 * k3));
        k5 = st.L * (st.y + h * (a51 * st.k1 + a52 * k2 + a53 * k3 + a54 * k4));
        k6 = st.L * (st.y + h * (a61 * st.k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        ynew = st.y + h * (b1 * st.k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        k7 = st.L * ynew;
        err = h * (e1 * st.k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double en = scaled_norm(err, st.y, ynew, st.tol);
        if (!std::isfinite(en)) {
            throw Error(ErrorCode::NumericalFailure, "integrator produced non-finite values");
        }
        double fac = en > 0.0 ? 0.9 * std::pow(en, -0.2) : 5.0;
        fac = std::clamp(fac, 0.2, 5.0);
        if (en <= 1.0) {
            t = last ? span : t + h;
            st.y.swap(ynew);
            hermitize(st.y, st.dim);
            st.k1 = st.L * st.y;
            st.stats.accepted++;
            st.stats.max_trace_drift =
                std::max(st.stats.max_trace_drift, std::abs(vec_trace(st.y, st.dim) - st.trace0));
            // A step clipped to hit the endpoint does not shrink the step memory.
            if (!last || fac > 1.0) st.h = h * fac;
        } else {
            st.stats.rejected++;
            st.h = h * std::min(1.0, fac);
            if (st.h < h_floor) {
                std::ostringstream os;
                os << "step size fell below " << h_floor
                   << " (stiff generator); reduce the Fock truncation or loosen the tolerances";
                throw Error(ErrorCode::StepSizeUnderflow, os.str());
            }
        }
        if (st.stats.accepted + st.stats.rejected > st.tol.max_steps) {
            throw Error(ErrorCode::StepSizeUnderflow, "integrator exceeded the step budget");
        }
    }
}

}  // namespace

std::vector<DensityMatrix> evolve_samples(const DensityMatrix& rho0, const Liouvillian& L,
                                          const std::vector<double>& times, const Tolerances& tol,
                                          EvolveStats* stats) {
    if (!(rho0.spec() == L.spec())) throw Error(ErrorCode::SpecMismatch, "state and generator specs differ");
    if (!(tol.rtol > 0.0) || !(tol.atol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerances must be > 0");
    EvolveStats local;
    EvolveStats& s = stats ? *stats : local;
    const int d = rho0.spec().dim();
    const Matrix start = L.to_frame(rho0.matrix());
    DopriState st{L.superoperator(), d, tol, s, vec(start), Vector(), 0.0, 0.0};
    st.trace0 = vec_trace(st.y, d);
    st.k1 = st.L * st.y;

    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    double now = 0.0;
    for (double t : times) {
        if (!(t >= now)) throw Error(ErrorCode::InvalidArgument, "sample times must be ascending and >= 0");
        if (t > now) integrate(st, t - now);
        now = t;
        out.push_back(DensityMatrix::trusted(rho0.spec(), L.from_frame(unvec(st.y, d))));
    }
    return out;
}

DensityMatrix evolve(const DensityMatrix& rho0, const Liouvillian& L, double t, const Tolerances& tol,
                     EvolveStats* stats) {
    if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "evolution time must be >= 0");
    if (t == 0.0) return rho0;
    return evolve_samples(rho0, L, {t}, tol, stats).back();
}

DensityMatrix steady_state(const Liouvillian& L, SteadyStateInfo* info) {
    const int d = L.spec().dim();
    const SparseMatrix& S = L.superoperator();
    const Eigen::Index n = S.rows();
    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(S.nonZeros() + d);
    for (Eigen::Index c = 0; c < S.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(S, c); it; ++it)
            if (it.row() != 0) t.emplace_back(it.row(), it.col(), it.value());
    for (int i = 0; i < d; ++i) t.emplace_back(0, static_cast<Eigen::Index>(i) * (d + 1), 1.0);
    SparseMatrix A(n, n);
    A.setFromTriplets(t.begin(), t.end());
    A.makeCompressed();

    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) {
        throw Error(ErrorCode::NonUniqueSteadyState,
                    "steady-state system is singular; the generator's kernel is not one-dimensional (" +
                        lu.lastErrorMessage() + ")");
    }
    Vector b = Vector::Zero(n);
    b(0) = 1.0;
    Vector x = lu.solve(b);
    if (lu.info() != Eigen::Success || !x.allFinite()) {
        throw Error(ErrorCode::NonUniqueSteadyState, "steady-state solve failed");
    }
    // One step of iterative refinement.
    x += lu.solve(b - A * x);

    Matrix rho = unvec(x, d);
    rho = (0.5 * (rho + rho.adjoint())).eval();
    rho /= rho.trace();
    const Vector xs = vec(rho);
    const double scale = L.norm1() * std::max(xs.cwiseAbs().maxCoeff(), 1e-300);
    const double residual = (S * xs).cwiseAbs().maxCoeff() / scale;
    if (info) info->residual = residual;
    if (!(residual <= 1e-10)) {
        std::ostringstream os;
        os << "steady-state residual " << residual << " exceeds 1e-10 relative to ||L||";
        throw Error(ErrorCode::NumericalFailure, os.str());
    }
    return DensityMatrix::trusted(L.spec(), L.from_frame(rho));
}

Operator pulse_unitary(const HilbertSpec& spec, int qubit, Axis axis, double angle) {
    if (!std::isfinite(angle)) throw Error(ErrorCode::InvalidArgument, "pulse angle must be finite");
    const Complex i(0.0, 1.0);
    const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
    Matrix u(2, 2);
    switch (axis) {
        case Axis::X: u << c, -i * s, -i * s, c; break;
        case Axis::Y: u << c, -s, s, c; break;
        case Axis::Z: u << Complex(c, -s), 0.0, 0.0, Complex(c, s); break;
    }
    return embed_qubit(spec, qubit, u);
}

DensityMatrix apply_pulse(const DensityMatrix& rho, int qubit, Axis axis, double angle) {
    const Operator U = pulse_unitary(rho.spec(), qubit, axis, angle);
    return DensityMatrix::trusted(rho.spec(), U.matrix() * rho.matrix() * U.matrix().adjoint());
}

namespace {

Matrix spin_projector(SpinState s) {
    Matrix p = Matrix::Zero(2, 2);
    if (s == SpinState::Up) p(0, 0) = 1.0;
    else p(1, 1) = 1.0;
    return p;
}

}  // namespace

std::pair<DensityMatrix, double> postselect(const DensityMatrix& rho, int qubit, SpinState outcome) {
    const Operator P = embed_qubit(rho.spec(), qubit, spin_projector(outcome));
    const Matrix pr = P.matrix() * rho.matrix() * P.matrix();
    const double p = pr.trace().real();
    if (!(p >= kZeroProbability)) {
        std::ostringstream os;
        os << "postselection on qubit " << qubit << " outcome " << (outcome == SpinState::Up ? "up" : "down")
           << " has probability " << p;
        throw Error(ErrorCode::ZeroProbability, os.str());
    }
    return {DensityMatrix::trusted(rho.spec(), pr / p), std::min(1.0, p)};
}

DensityMatrix reset_spin(const DensityMatrix& rho, int qubit, SpinState state) {
    const int target = state == SpinState::Up ? 0 : 1;
    Matrix out = Matrix::Zero(rho.spec().dim(), rho.spec().dim());
    for (int a = 0; a < 2; ++a) {
        Matrix k = Matrix::Zero(2, 2);
        k(target, a) = 1.0;
        const Operator K = embed_qubit(rho.spec(), qubit, k);
        out += K.matrix() * rho.matrix() * K.matrix().adjoint();
    }
    return DensityMatrix::trusted(rho.spec(), std::move(out));
}

DensityMatrix reset_oscillator(const DensityMatrix& rho, const Matrix& osc) {
    const HilbertSpec& s = rho.spec();
    if (osc.rows() != s.fock_dim() || osc.cols() != s.fock_dim()) {
        throw Error(ErrorCode::SpecMismatch, "oscillator state dimension does not match fock_dim");
    }
    const Matrix q = partial_trace_to_qubits(rho);
    const int f = s.fock_dim();
    Matrix out(s.dim(), s.dim());
    for (int i = 0; i < s.qubit_dim(); ++i)
        for (int j = 0; j < s.qubit_dim(); ++j) out.block(i * f, j * f, f, f) = q(i, j) * osc;
    return DensityMatrix::trusted(s, std::move(out));
}

RunResult run_protocol(const std::vector<ProtocolStep>& steps, const HilbertSpec& spec, const Tolerances& tol,
                       const std::vector<Observable>& observables, const DensityMatrix* initial) {
    for (const auto& o : observables) {
        if (!(o.op.spec() == spec)) throw Error(ErrorCode::SpecMismatch, "observable " + o.name + " has wrong spec");
    }
    DensityMatrix rho = initial ? *initial
                                : product_density(spec, std::vector<SpinState>(spec.n_qubits(), SpinState::Down),
                                                  thermal_oscillator(spec.fock_dim(), 0.0));
    if (!(rho.spec() == spec)) throw Error(ErrorCode::SpecMismatch, "initial state has wrong spec");

    RunResult r{rho, 1.0, {}, {}, 1.0, 0.0, {}};
    for (const auto& o : observables) r.observable_names.push_back(o.name);
    auto record = [&]() {
        std::vector<double> row;
        for (const auto& o : observables) row.push_back(expectation(rho, o.op).real());
        r.traces.push_back(std::move(row));
        r.min_eigenvalue = std::min(r.min_eigenvalue, rho.min_eigenvalue());
        r.max_trace_drift = std::max(r.max_trace_drift, std::abs(rho.matrix().trace() - Complex(1.0, 0.0)));
    };
    record();

    std::vector<std::string> generators;
    for (const auto& step : steps) {
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, FreeEvolve>) {
                    if (!s.generator) throw Error(ErrorCode::InvalidArgument, "free evolution without a generator");
                    if (!(s.duration >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative duration");
                    EvolveStats st;
                    rho = evolve(rho, *s.generator, s.duration, tol, &st);
                    r.max_trace_drift = std::max(r.max_trace_drift, st.max_trace_drift);
                    generators.push_back(s.generator->kind());
                } else if constexpr (std::is_same_v<T, Pulse>) {
                    rho = apply_pulse(rho, s.qubit, s.axis, s.angle);
                } else if constexpr (std::is_same_v<T, Measure>) {
                    auto [post, p] = postselect(rho, s.qubit, s.outcome);
                    rho = std::move(post);
                    r.probability *= p;
                } else if constexpr (std::is_same_v<T, InitializeSpin>) {
                    rho = reset_spin(rho, s.qubit, s.state);
                } else if constexpr (std::is_same_v<T, InitializeOscillator>) {
                    Matrix osc;
                    switch (s.kind) {
                        case InitializeOscillator::Kind::Ground:
                            osc = thermal_oscillator(spec.fock_dim(), 0.0);
                            break;
                        case InitializeOscillator::Kind::Thermal:
                            osc = thermal_oscillator(spec.fock_dim(), s.nbar);
                            break;
                        case InitializeOscillator::Kind::SteadyStateOf:
                            if (!s.generator) throw Error(ErrorCode::InvalidArgument, "steady-state init needs a generator");
                            osc = partial_trace_to_oscillator(steady_state(*s.generator)).matrix();
                            break;
                    }
                    rho = reset_oscillator(rho, osc);
                }
            },
            step);
        record();
    }
    r.final_state = rho;
    std::ostringstream g;
    for (std::size_t i = 0; i < generators.size(); ++i) g << (i ? "," : "") << generators[i];
    r.metadata["generators"] = g.str();
    r.metadata["fock_dim"] = std::to_string(spec.fock_dim());
    r.metadata["n_qubits"] = std::to_string(spec.n_qubits());
    std::ostringstream t;
    t.precision(12);
    t << tol.rtol << "," << tol.atol;
    r.metadata["rtol,atol"] = t.str();
    return r;
}

}  // namespace spinmech
