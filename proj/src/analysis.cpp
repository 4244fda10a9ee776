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

#include "spinmech/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "spinmech/membrane.hpp"

namespace spinmech {

namespace {

Matrix oscillator_state(const DensityMatrix& rho) {
    if (rho.spec().n_qubits() == 0) return rho.matrix();
    return partial_trace_to_oscillator(rho).matrix();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

double phonon_number(const DensityMatrix& rho) {
    const Matrix m = oscillator_state(rho);
    double n = 0.0;
    for (Eigen::Index k = 0; k < m.rows(); ++k) n += static_cast<double>(k) * m(k, k).real();
    return n;
}

double fidelity(const DensityMatrix& rho, const Vector& psi) {
    const double norm = psi.norm();
    if (std::abs(norm - 1.0) > 1e-8) {
        throw Error(ErrorCode::InvalidArgument, "fidelity target is not normalised (norm " + fmt(norm) + ")");
    }
    Matrix m;
    if (psi.size() == rho.spec().dim()) m = rho.matrix();
    else if (psi.size() == rho.spec().fock_dim()) m = oscillator_state(rho);
    else throw Error(ErrorCode::SpecMismatch, "fidelity target dimension matches neither state nor oscillator");
    const double f = (psi.adjoint() * m * psi)(0, 0).real();
    return std::clamp(f, 0.0, 1.0);
}

double wigner_extent_for(double max_amplitude) { return 2.0 * std::abs(max_amplitude) + 3.0; }

WignerGrid wigner(const DensityMatrix& rho_oscillator, const WignerSpec& spec) {
    if (rho_oscillator.spec().n_qubits() != 0) {
        throw Error(ErrorCode::InvalidArgument, "wigner expects an oscillator-only state");
    }
    if (spec.points < 2 || !(spec.extent > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "wigner grid needs >= 2 points and a positive extent");
    }
    const int f = rho_oscillator.spec().fock_dim();
    const double a_max = spec.extent / std::sqrt(2.0);
    const int big = f + static_cast<int>(std::ceil(a_max * a_max + 5.0 * a_max));

    // The displacement generator alpha b^+ - alpha* b = |alpha| R(t)(b^+ - b)R(t)^+,
    // with R(t) = exp(i t n) and b^+ - b = -i A for Hermitian A = i(b^+ - b).
    Matrix A = Matrix::Zero(big, big);
    for (int k = 0; k + 1 < big; ++k) {
        const double s = std::sqrt(static_cast<double>(k + 1));
        A(k + 1, k) = Complex(0.0, s);
        A(k, k + 1) = Complex(0.0, -s);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    const Matrix& U = es.eigenvectors();
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Matrix Uh = U.adjoint();

    // rho = sum_i w_i |psi_i><psi_i|
    Eigen::SelfAdjointEigenSolver<Matrix> rs(rho_oscillator.matrix());
    std::vector<double> w;
    Matrix psis(big, 0);
    {
        std::vector<int> keep;
        for (int i = 0; i < f; ++i)
            if (rs.eigenvalues()(i) > 1e-14) keep.push_back(i);
        psis = Matrix::Zero(big, static_cast<Eigen::Index>(keep.size()));
        for (std::size_t c = 0; c < keep.size(); ++c) {
            psis.col(c).head(f) = rs.eigenvectors().col(keep[c]);
            w.push_back(rs.eigenvalues()(keep[c]));
        }
    }

    WignerGrid g;
    const int n = spec.points;
    g.x.resize(n);
    g.p.resize(n);
    for (int i = 0; i < n; ++i) {
        g.x[i] = -spec.extent + 2.0 * spec.extent * i / (n - 1);
        g.p[i] = g.x[i];
    }
    g.values = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd parity(big);
    for (int k = 0; k < big; ++k) parity(k) = (k % 2 == 0) ? 1.0 : -1.0;

    Matrix work;
    for (int ip = 0; ip < n; ++ip) {
        for (int ix = 0; ix < n; ++ix) {
            // D(-alpha) psi with alpha = (x + i p)/2
            const Complex alpha(0.5 * g.x[ix], 0.5 * g.p[ip]);
            const double r = std::abs(alpha);
            const double t = std::arg(alpha);
            work = psis;
            for (int k = 0; k < big; ++k) work.row(k) *= std::polar(1.0, -t * k);
            work = (Uh * work).eval();
            for (int k = 0; k < big; ++k) work.row(k) *= std::polar(1.0, r * lam(k));  // exp(+i r lam)
            work = (U * work).eval();
            for (int k = 0; k < big; ++k) work.row(k) *= std::polar(1.0, t * k);
            double val = 0.0;
            for (Eigen::Index c = 0; c < work.cols(); ++c) {
                val += w[c] * (work.col(c).cwiseAbs2().cwiseProduct(parity)).sum();
            }
            g.values(ip, ix) = val / (2.0 * constants::pi);
        }
    }
    const double dx = g.x[1] - g.x[0];
    g.integral = g.values.sum() * dx * dx;
    g.support_warning = std::abs(g.integral - 1.0) > 2e-2;
    return g;
}

std::string wigner_csv(const WignerGrid& grid) {
    std::ostringstream os;
    os << "p\\x";
    for (double x : grid.x) os << ',' << fmt(x);
    os << '\n';
    for (std::size_t i = 0; i < grid.p.size(); ++i) {
        os << fmt(grid.p[i]);
        for (std::size_t j = 0; j < grid.x.size(); ++j) os << ',' << fmt(grid.values(i, j));
        os << '\n';
    }
    return os.str();
}

std::string wigner_metadata_json(const WignerGrid& grid, const std::string& label) {
    nlohmann::ordered_json j;
    j["label"] = label;
    j["convention"] = kWignerConvention;
    j["x_range"] = {grid.x.front(), grid.x.back()};
    j["p_range"] = {grid.p.front(), grid.p.back()};
    j["points"] = grid.x.size();
    j["integral"] = grid.integral;
    j["support_warning"] = grid.support_warning;
    j["min"] = grid.min();
    j["max"] = grid.max();
    return j.dump(2) + "\n";
}

Moments oscillator_moments(const DensityMatrix& rho) {
    const Matrix m = oscillator_state(rho);
    const Eigen::Index f = m.rows();
    Moments mo{0.0, 0.0, 0.0};
    // <b> = sum_k sqrt(k+1) rho_{k+1,k}, <b^2> = sum_k sqrt((k+1)(k+2)) rho_{k+2,k}
    for (Eigen::Index k = 0; k + 1 < f; ++k) mo.b += std::sqrt(static_cast<double>(k + 1)) * m(k + 1, k);
    for (Eigen::Index k = 0; k + 2 < f; ++k)
        mo.b2 += std::sqrt(static_cast<double>((k + 1) * (k + 2))) * m(k + 2, k);
    for (Eigen::Index k = 0; k < f; ++k) mo.n += static_cast<double>(k) * m(k, k).real();
    return mo;
}

namespace {

struct Centered {
    double n;    // <db^+ db>
    Complex m;   // <db^2>
};

Centered centered(const DensityMatrix& rho) {
    const Moments mo = oscillator_moments(rho);
    return {mo.n - std::norm(mo.b), mo.b2 - mo.b * mo.b};
}

}  // namespace

double quadrature_variance(const DensityMatrix& rho, double theta) {
    const Centered c = centered(rho);
    return 1.0 + 2.0 * c.n + 2.0 * (std::polar(1.0, 2.0 * theta) * c.m).real();
}

QuadratureExtremes min_quadrature_variance(const DensityMatrix& rho) {
    const Centered c = centered(rho);
    const double am = std::abs(c.m);
    double theta = 0.0;
    if (am > 0.0) {
        theta = 0.5 * (constants::pi - std::arg(c.m));
        theta = std::fmod(theta, constants::pi);
        if (theta < 0.0) theta += constants::pi;
    }
    return {theta, 1.0 + 2.0 * c.n - 2.0 * am, 1.0 + 2.0 * c.n + 2.0 * am};
}

double squeezing_db(double variance) {
    if (!(variance > 0.0)) throw Error(ErrorCode::InvalidArgument, "squeezing needs a positive variance");
    return 10.0 * std::log10(variance);
}

}  // namespace spinmech
