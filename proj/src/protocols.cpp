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

#include "spinmech/protocols.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "spinmech/membrane.hpp"

namespace spinmech {

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    jobs = std::clamp(jobs, 1, n);
    std::vector<std::exception_ptr> errors(n);
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int t = 0; t < jobs; ++t) {
            pool.emplace_back([&] {
                for (int i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

int default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---------------------------------------------------------------- cooling

ModelParams cooling_model(const CoolingSetup& s, double Omega, double delta) {
    ModelParams p;
    p.gamma_m = s.gamma_m;
    p.N_th_mech = s.N_th_mech;
    p.spec = HilbertSpec(1, s.fock_dim);
    QubitParams q;
    q.Omega = Omega;
    q.delta = delta;
    q.g = s.g_c;
    q.Gamma = s.Gamma;
    q.Gamma_phi_o = s.Gamma_phi;
    q.N_th = s.N_q;
    p.qubits = {q};
    return p;
}

double cooling_n_eff(const CoolingSetup& s, double Omega, double delta, double* residual) {
    const ModelParams p = cooling_model(s, Omega, delta);
    SteadyStateInfo info{};
    const DensityMatrix ss = steady_state(liouvillian(p, hamiltonian_N(p)), &info);
    if (residual) *residual = info.residual;
    return phonon_number(ss);
}

namespace {

struct Simplex2 {
    std::array<std::array<double, 2>, 3> x;
    std::array<double, 3> f;
};

// Nelder-Mead on two variables.
std::pair<std::array<double, 2>, double> nelder_mead(const std::function<double(double, double)>& fn,
                                                     std::array<double, 2> x0, std::array<double, 2> step,
                                                     double f0, int max_evals) {
    Simplex2 s;
    s.x = {x0, {x0[0] + step[0], x0[1]}, {x0[0], x0[1] + step[1]}};
    s.f = {f0, fn(s.x[1][0], s.x[1][1]), fn(s.x[2][0], s.x[2][1])};
    int evals = 2;
    auto at = [&](const std::array<double, 2>& a) {
        ++evals;
        return fn(a[0], a[1]);
    };
    while (evals < max_evals) {
        std::array<int, 3> idx = {0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return s.f[a] < s.f[b]; });
        const int b = idx[0], m = idx[1], w = idx[2];
        if (std::abs(s.f[w] - s.f[b]) <= 1e-10 * (1.0 + std::abs(s.f[b]))) break;
        std::array<double, 2> c = {0.5 * (s.x[b][0] + s.x[m][0]), 0.5 * (s.x[b][1] + s.x[m][1])};
        auto lerp = [&](double t) {
            return std::array<double, 2>{c[0] + t * (s.x[w][0] - c[0]), c[1] + t * (s.x[w][1] - c[1])};
        };
        const auto xr = lerp(-1.0);
        const double fr = at(xr);
        if (fr < s.f[b]) {
            const auto xe = lerp(-2.0);
            const double fe = at(xe);
            if (fe < fr) s.x[w] = xe, s.f[w] = fe;
            else s.x[w] = xr, s.f[w] = fr;
        } else if (fr < s.f[m]) {
            s.x[w] = xr, s.f[w] = fr;
        } else {
            const auto xc = fr < s.f[w] ? lerp(-0.5) : lerp(0.5);
            const double fc = at(xc);
            if (fc < std::min(fr, s.f[w])) {
                s.x[w] = xc, s.f[w] = fc;
            } else {
                for (int k : {m, w}) {
                    s.x[k] = {0.5 * (s.x[k][0] + s.x[b][0]), 0.5 * (s.x[k][1] + s.x[b][1])};
                    s.f[k] = at(s.x[k]);
                }
            }
        }
    }
    const int best = static_cast<int>(std::min_element(s.f.begin(), s.f.end()) - s.f.begin());
    return {s.x[best], s.f[best]};
}

}  // namespace

CoolingResult cool(const CoolingSetup& s, const CoolingOptions& opt) {
    if (!(s.Gamma < 1.0)) {
        throw Error(ErrorCode::Precondition, "cooling needs the resolved-sideband regime Gamma < omega_m");
    }
    if (opt.grid < 1) throw Error(ErrorCode::InvalidArgument, "cooling grid needs at least one point");
    const int n = opt.grid;
    auto axis = [n](double lo, double hi, int i) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); };

    CoolingResult r;
    r.N_th = s.N_th_mech;
    r.table.resize(static_cast<std::size_t>(n) * n);
    std::vector<double> residuals(r.table.size(), 0.0);
    parallel_for(n * n, opt.jobs, [&](int k) {
        const double Om = axis(opt.Omega_lo, opt.Omega_hi, k / n);
        const double de = axis(opt.delta_lo, opt.delta_hi, k % n);
        r.table[k] = {Om, de, cooling_n_eff(s, Om, de, &residuals[k])};
    });
    std::size_t best = 0;
    for (std::size_t k = 1; k < r.table.size(); ++k)
        if (r.table[k].n_eff < r.table[best].n_eff) best = k;
    r.Omega = r.table[best].Omega;
    r.delta_c = r.table[best].delta;
    r.n_eff = r.table[best].n_eff;
    r.residual = residuals[best];

    if (opt.refine) {
        const double dO = n > 1 ? (opt.Omega_hi - opt.Omega_lo) / (n - 1) : 0.1;
        const double dd = n > 1 ? (opt.delta_hi - opt.delta_lo) / (n - 1) : 0.1;
        double last_residual = r.residual;
        auto f = [&](double Om, double de) {
            Om = std::abs(Om);
            if (Om < 1e-6) return std::numeric_limits<double>::infinity();
            return cooling_n_eff(s, Om, de, &last_residual);
        };
        auto [x, fx] = nelder_mead(f, {r.Omega, r.delta_c}, {0.5 * dO, 0.5 * dd}, r.n_eff, opt.max_refine_evals);
        if (fx < r.n_eff) {
            r.Omega = std::abs(x[0]);
            r.delta_c = x[1];
            r.n_eff = cooling_n_eff(s, r.Omega, r.delta_c, &r.residual);
        }
    }
    return r;
}

TwoQubitCoolingResult central_qubit_at(const CoolingSetup& s, const CentralQubitSetup& c, double Omega, double delta,
                                       double n_single) {
    ModelParams p = cooling_model(s, Omega, delta);
    p.spec = HilbertSpec(2, s.fock_dim);
    QubitParams central = p.qubits[0];
    central.g = c.g0;
    central.delta = delta + c.detuning_offset;
    p.qubits.insert(p.qubits.begin(), central);

    const DensityMatrix ss = steady_state(liouvillian(p, hamiltonian_N(p)));
    const auto [a, ad, num] = fock_ops(p.spec);
    const Operator shifted = a + c.g0 * qubit_ops(p.spec, 0).sz;

    TwoQubitCoolingResult r;
    r.central_detuning = central.delta;
    r.detuning_ratio = Omega > 0.0 ? std::abs(central.delta) / Omega : std::numeric_limits<double>::infinity();
    r.n_two_raw = phonon_number(ss);
    r.n_two_displaced = expectation(ss, shifted.adjoint() * shifted).real();
    r.relative_change = std::abs(r.n_two_displaced - n_single) / n_single;
    return r;
}

TwoQubitCoolingResult cool_with_central_qubit(const CoolingSetup& s, const CentralQubitSetup& c,
                                              const CoolingOptions& opt, double ratio_min, bool enforce_ratio) {
    CoolingResult single = cool(s, opt);
    const double central_delta = single.delta_c + c.detuning_offset;
    const double ratio = std::abs(central_delta) / single.Omega;
    if (enforce_ratio && ratio < ratio_min) {
        throw Error(ErrorCode::Precondition, "central qubit detuning is only " + std::to_string(ratio) +
                                                 " Rabi frequencies from the cooling drive (need >= " +
                                                 std::to_string(ratio_min) + ")");
    }
    TwoQubitCoolingResult r = central_qubit_at(s, c, single.Omega, single.delta_c, single.n_eff);
    r.single = std::move(single);
    return r;
}

// ---------------------------------------------------------------- cat

Vector cat_target(double xi, double phi, SpinState sign, int fock_dim) {
    const Complex i(0.0, 1.0);
    const double s = sign == SpinState::Up ? 1.0 : -1.0;
    const Complex e_plus = std::exp(2.0 * i * xi * xi);
    const Complex e_minus = std::exp(-2.0 * i * xi * xi);
    Vector v = e_plus * std::exp(-i * phi) * coherent_state(fock_dim, 2.0 * xi) +
               s * e_plus * std::exp(i * phi) * coherent_state(fock_dim, -2.0 * xi) +
               s * e_minus * coherent_state(fock_dim, Complex(0.0, -2.0 * xi)) -
               e_minus * coherent_state(fock_dim, Complex(0.0, 2.0 * xi));
    v *= 0.5;
    const double norm = v.norm();
    if (norm < 1e-12) throw Error(ErrorCode::InvalidArgument, "cat target vanishes for these parameters");
    return v / norm;
}

CatResult run_cat(const CatOptions& opt) {
    if (!(opt.xi >= 0.0)) throw Error(ErrorCode::InvalidArgument, "xi must be >= 0");
    const int needed = coherent_nmax_required(2.0 * opt.xi);
    if (opt.fock_dim - 1 < needed) {
        throw Error(ErrorCode::TruncationRisk, "cat amplitude 2 xi = " + std::to_string(2.0 * opt.xi) +
                                                   " needs fock_dim >= " + std::to_string(needed + 1));
    }
    ModelParams p;
    p.spec = HilbertSpec(1, opt.fock_dim);
    p.gamma_m = opt.gamma_m;
    p.N_th_mech = opt.N_th_mech;
    QubitParams q;
    q.g = opt.xi;
    q.Gamma_phi_h = opt.Gamma_phi;
    q.Delta = opt.Delta0;
    p.qubits = {q};
    const Operator H = hamiltonian_N(p);
    auto L = std::make_shared<const Liouvillian>(opt.dressed ? dressed_liouvillian(p, H) : liouvillian(p, H));

    const double quarter = 0.5 * constants::pi;
    const double larmor = -opt.Delta0 * quarter;  // exact Zeeman rotation over a quarter period
    const std::vector<ProtocolStep> steps = {
        InitializeSpin{0, SpinState::Down},
        InitializeOscillator{},
        Pulse{0, Axis::X, quarter},
        FreeEvolve{quarter, L},
        Pulse{0, Axis::Z, larmor},
        Pulse{0, Axis::X, quarter},
        FreeEvolve{quarter, L},
        Pulse{0, Axis::Z, larmor},
        Pulse{0, Axis::X, quarter},
    };
    const RunResult run = run_protocol(steps, p.spec, opt.tol);

    CatResult r{opt.xi,
                constants::pi * opt.Delta0 / 2.0,
                L->kind(),
                {SpinState::Up, run.final_state, 0.0, 0.0},
                {SpinState::Down, run.final_state, 0.0, 0.0},
                run.min_eigenvalue,
                run.max_trace_drift};
    for (CatBranch* b : {&r.up, &r.down}) {
        auto [post, prob] = postselect(run.final_state, 0, b->outcome);
        b->state = partial_trace_to_oscillator(post);
        b->probability = prob;
        b->fidelity = fidelity(b->state, cat_target(opt.xi, r.phi, b->outcome, opt.fock_dim));
    }
    return r;
}

// ---------------------------------------------------------------- squeezing

SqueezeResult run_squeeze(const SqueezeOptions& opt, double xi, double Omega_ratio) {
    ModelParams p;
    p.spec = HilbertSpec(1, opt.fock_dim);
    p.gamma_m = opt.gamma_m;
    p.N_th_mech = opt.N_th_mech;
    QubitParams q;
    q.Omega = Omega_ratio;
    q.delta = 0.0;
    q.g = xi;
    q.Gamma = opt.Gamma;
    q.Gamma_phi_h = opt.Gamma_phi;
    q.N_th = opt.N_q;
    p.qubits = {q};
    const Operator H = hamiltonian_N(p);
    auto L = std::make_shared<const Liouvillian>(opt.dressed ? dressed_liouvillian(p, H, opt.bin_tol)
                                                             : liouvillian(p, H));
    const double quarter = 0.5 * constants::pi;
    // The Rabi-frame spin states are the eigenstates of sx; y rotations map onto them.
    const std::vector<ProtocolStep> steps = {
        InitializeSpin{0, SpinState::Down},
        InitializeOscillator{},
        Pulse{0, Axis::Y, quarter},
        FreeEvolve{quarter, L},
        Pulse{0, Axis::Y, -quarter},
        Measure{0, SpinState::Down},
    };
    const RunResult run = run_protocol(steps, p.spec, opt.tol);
    DensityMatrix osc = partial_trace_to_oscillator(run.final_state);
    const QuadratureExtremes ex = min_quadrature_variance(osc);
    return {xi,
            Omega_ratio,
            ex.variance_min,
            squeezing_db(ex.variance_min),
            ex.theta_min,
            ex.variance_max,
            run.probability,
            std::abs(4.0 * xi * xi - Omega_ratio) / Omega_ratio,
            std::move(osc)};
}

SqueezeScan squeeze_scan(const SqueezeOptions& opt, const std::vector<double>& xis,
                         const std::vector<double>& Omegas, int jobs) {
    const int n = static_cast<int>(xis.size() * Omegas.size());
    std::vector<std::optional<SqueezeResult>> slots(n);
    parallel_for(n, jobs, [&](int k) {
        slots[k] = run_squeeze(opt, xis[k / Omegas.size()], Omegas[k % Omegas.size()]);
    });
    SqueezeScan scan;
    for (auto& s : slots) scan.table.push_back(std::move(*s));
    for (std::size_t k = 1; k < scan.table.size(); ++k)
        if (scan.table[k].db < scan.table[scan.best].db) scan.best = k;
    return scan;
}

namespace {

Vector unitary_evolve(const Matrix& H, const Vector& psi0, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    const Matrix& V = es.eigenvectors();
    Vector c = V.adjoint() * psi0;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -es.eigenvalues()(k) * t);
    return V * c;
}

}  // namespace

HeffReport heff_shorttime_check(double xi, double Omega_ratio, int fock_dim, const Tolerances&) {
    const double t = 0.5 * constants::pi;
    const HilbertSpec full(1, fock_dim);
    const Operator HR = rabi_hamiltonian(1.0, Omega_ratio, xi, fock_dim);
    const Vector psi0 = product_state(full, {SpinState::Down}, fock_state(fock_dim, 0));
    const Vector psi = unitary_evolve(HR.matrix(), psi0, t);
    const auto [post, prob] = postselect(DensityMatrix::trusted(full, psi * psi.adjoint()), 0, SpinState::Down);
    (void)prob;
    const double v_rabi = min_quadrature_variance(partial_trace_to_oscillator(post)).variance_min;

    const Operator He = effective_hamiltonian(1.0, Omega_ratio, xi, fock_dim);
    const Vector phi = unitary_evolve(He.matrix(), fock_state(fock_dim, 0), t);
    const double v_eff =
        min_quadrature_variance(DensityMatrix::trusted(HilbertSpec(0, fock_dim), phi * phi.adjoint())).variance_min;
    return {v_rabi, v_eff, std::abs(v_rabi - v_eff) / v_eff};
}

}  // namespace spinmech
