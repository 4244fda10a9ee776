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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spinmech/config.hpp"
#include "spinmech/experiments.hpp"
#include "spinmech/table.hpp"
#include "test_util.hpp"

using namespace spinmech;
using spinmech::testing::error_code_of;

namespace {

const char* kBase = R"(
membrane.radius_um = 1.5
membrane.tension_N_per_m = 4.7628687356679927e-07
membrane.areal_density_kg_m2 = 7.5e-7
membrane.Q = 1e5
membrane.T_mK = 14
field.peak_gradient_T_per_m = 2.7e6
field.bias_splitting_GHz = 2.0
sites.central.r_um = 0
sites.cooling.auto = true
)";

std::string error_message(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("config parsing") {
    auto c = Config::parse("a.b = 1  # comment\n\n  c_d=hello world \n# only comment\n");
    CHECK(c.get("a.b") == "1");
    CHECK(c.get("c_d") == "hello world");
    CHECK_FALSE(c.has("x"));
    CHECK(c.number("a.b") == 1.0);
    CHECK(c.number_or("x", 2.5) == 2.5);
    CHECK(c.integer_or("a.b", 7) == 1);
    CHECK(c.boolean_or("x", true));
    CHECK(c.to_string() == "a.b = 1\nc_d = hello world\n");

    CHECK(error_message([] { Config::parse("ok = 1\nbroken line\n", "f.cfg"); }) == "configuration error: f.cfg:2: expected 'key = value'");
    CHECK(error_message([] { Config::parse("a = 1\na = 2\n"); }).find("duplicate key 'a'") != std::string::npos);
    CHECK(error_message([] { Config::parse("bad key = 1\n"); }).find("invalid key") != std::string::npos);
    CHECK(error_code_of([] { Config::parse("k =\n"); }) == ErrorCode::Config);
    CHECK(error_message([&] { c.number("missing.key"); }) == "configuration error: missing required key 'missing.key'");
    CHECK(error_code_of([&] { c.number("c_d"); }) == ErrorCode::Config);
    c.set("flag", "maybe");
    CHECK(error_code_of([&] { c.boolean_or("flag", false); }) == ErrorCode::Config);
    c.set("n", "2.5");
    CHECK(error_code_of([&] { c.integer_or("n", 1); }) == ErrorCode::Config);
    CHECK(error_code_of([] { Config::load("/nonexistent/spinmech.cfg"); }) == ErrorCode::Config);
}

TEST_CASE("system model from the base config") {
    auto cfg = Config::parse(kBase);
    auto sys = build_system(cfg);
    CHECK(sys.xi == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(sys.gamma_m == doctest::Approx(1e-5).epsilon(1e-12));
    CHECK(sys.Delta0 * sys.omega_m / (2 * constants::pi) == doctest::Approx(3e9).epsilon(1e-12));
    CHECK(sys.N_th_mech == doctest::Approx(thermal_occupation(sys.omega_m, 0.014)));
    CHECK(sys.Gamma == 0.1);
    CHECK(sys.Gamma_phi_h == doctest::Approx(2 * constants::pi * 1e5 / sys.omega_m));
    CHECK(sys.fock_cat == 80);
    CHECK_FALSE(sys.cooling_r.has_value());
    CHECK(build_system(cfg, 0.75).omega_m == doctest::Approx(2 * sys.omega_m));

    auto setup = cooling_setup(sys);
    CHECK(setup.g_c < setup.Gamma);
    CHECK(setup.g_c * setup.g_c > setup.Gamma * setup.gamma_m * setup.N_th_mech);
    auto central = central_setup(sys);
    CHECK(central.g0 == sys.xi);
    CHECK(std::abs(central.detuning_offset) > 20.0);
    auto cat = cat_options(sys, 0.2);
    CHECK(cat.Gamma_phi == 0.2);
    CHECK(cat.N_th_mech == 0.0);
    CHECK(squeeze_options(sys).Gamma_phi == 0.1);
}

TEST_CASE("config errors name the key") {
    auto cfg = Config::parse(kBase);
    Config missing;
    for (const auto& [k, v] : cfg.entries())
        if (k != "membrane.Q") missing.set(k, v);
    CHECK(error_message([&] { build_system(missing); }) == "configuration error: missing required key 'membrane.Q'");
    auto neg = cfg;
    neg.set("membrane.T_mK", "-1");
    CHECK(error_code_of([&] { build_system(neg); }) == ErrorCode::Config);
    auto manual = cfg;
    manual.set("sites.cooling.auto", "false");
    CHECK(error_code_of([&] { build_system(manual); }) == ErrorCode::Config);
    manual.set("sites.cooling.r_um", "1.2");
    CHECK(build_system(manual).cooling_r.value() == doctest::Approx(1.2e-6));
    auto outside = cfg;
    outside.set("sites.central.r_um", "9");
    CHECK(error_code_of([&] { build_system(outside); }) == ErrorCode::Config);
    auto fock = cfg;
    fock.set("simulation.fock_dim_cool", "1");
    CHECK(error_code_of([&] { build_system(fock); }) == ErrorCode::Config);
}

TEST_CASE("grid parsing") {
    auto g = parse_grid("0:0.4:9");
    REQUIRE(g.size() == 9);
    CHECK(g[0] == 0.0);
    CHECK(g[8] == 0.4);
    CHECK(g[4] == doctest::Approx(0.2));
    CHECK(parse_grid("1.5:9:1") == std::vector<double>{1.5});
    CHECK(parse_grid("1,2.5,4") == std::vector<double>{1.0, 2.5, 4.0});
    CHECK(error_code_of([] { parse_grid("1:2"); }) == ErrorCode::InvalidArgument);
    CHECK(error_code_of([] { parse_grid("1:2:0"); }) == ErrorCode::InvalidArgument);
    CHECK(error_code_of([] { parse_grid("a,b"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("tables") {
    Table t({"a", "b"});
    t.add_row({1.0, 0.1});
    t.add_row({1.0 / 3.0, -2e-20});
    CHECK(t.column_index("b") == 1);
    CHECK(error_code_of([&] { t.column_index("c"); }) == ErrorCode::IndexOutOfRange);
    CHECK(error_code_of([&] { t.add_row({1.0}); }) == ErrorCode::InvalidArgument);
    CHECK(t.to_csv() == "a,b\n1,0.1\n0.333333333333,-2e-20\n");
    CHECK(format_number(123456789012345.0) == "1.23456789012e+14");
    CHECK(error_code_of([&] { t.write_csv("/nonexistent/dir/t.csv"); }) == ErrorCode::Io);
}

TEST_CASE("small experiments are deterministic") {
    auto cfg = Config::parse(kBase);
    cfg.set("membrane.radius_um", "0.3");
    cfg.set("simulation.fock_dim_cat", "16");
    cfg.set("simulation.fock_dim_squeeze", "16");
    cfg.set("simulation.fock_dim_cool", "10");
    cfg.set("cooling.grid", "2");
    cfg.set("wigner.points", "11");

    auto cat1 = cat_curve(cfg, {0.0, 0.2}, 1);
    auto cat2 = cat_curve(cfg, {0.0, 0.2}, 2);
    CHECK(cat1.to_csv() == cat2.to_csv());
    CHECK(cat1.rows().size() == 2);
    CHECK(cat1.columns()[0] == "Gamma_tilde_over_omega");
    CHECK(cat1.at(1, 1) < cat1.at(0, 1));

    auto sq = squeeze_map(cfg, {0.0, 1.0}, {5.0}, 2);
    CHECK(sq.rows().size() == 2);
    CHECK(std::abs(sq.at(0, sq.column_index("min_dB"))) < 1e-6);
    CHECK(sq.at(1, sq.column_index("min_dB")) < 0.0);
    CHECK(sq.to_csv() == squeeze_map(cfg, {0.0, 1.0}, {5.0}, 1).to_csv());

    auto w = cat_wigner(cfg, 0.0);
    CHECK(w.x.size() == 11);
    auto sw = squeeze_wigner(cfg, 1.0, 5.0);
    CHECK(std::abs(sw.integral - 1.0) < 2e-2);

    cfg.set("membrane.radius_um", "0.03");
    auto cool1 = cooling_sweep(cfg, {0.03}, 1);
    CHECK(cool1.rows().size() == 1);
    CHECK(cool1.columns() == std::vector<std::string>{"R_um", "Omega", "delta_c", "n_eff", "N_th", "g_c", "f_m_MHz", "margin"});
    CHECK(std::isfinite(cool1.at(0, 3)));
    CHECK(cool1.to_csv() == cooling_sweep(cfg, {0.03}, 1).to_csv());
}
