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

#include "spinmech/spinmech.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "spinmech/config.hpp"
#include "spinmech/error.hpp"
#include "spinmech/experiments.hpp"
#include "spinmech/model.hpp"
#include "spinmech/validate.hpp"

struct spinmech_config {
    spinmech::Config cfg;
};
struct spinmech_table {
    spinmech::Table table;
};
struct spinmech_grid {
    spinmech::WignerGrid grid;
};

namespace {

thread_local std::string g_last_error;

spinmech_status map_code(spinmech::ErrorCode c) {
    using spinmech::ErrorCode;
    switch (c) {
        case ErrorCode::Config: return SPINMECH_ERR_CONFIG;
        case ErrorCode::Infeasible: return SPINMECH_ERR_INFEASIBLE;
        case ErrorCode::StepSizeUnderflow:
        case ErrorCode::NonUniqueSteadyState:
        case ErrorCode::NumericalFailure: return SPINMECH_ERR_NUMERICAL;
        case ErrorCode::ZeroProbability: return SPINMECH_ERR_ZERO_PROBABILITY;
        case ErrorCode::TruncationRisk: return SPINMECH_ERR_TRUNCATION;
        case ErrorCode::Precondition: return SPINMECH_ERR_PRECONDITION;
        case ErrorCode::Io: return SPINMECH_ERR_IO;
        case ErrorCode::InvalidArgument:
        case ErrorCode::SpecMismatch:
        case ErrorCode::IndexOutOfRange:
        case ErrorCode::NegativeRate:
        case ErrorCode::NonHermitian: return SPINMECH_ERR_INVALID_ARGUMENT;
    }
    return SPINMECH_ERR_INTERNAL;
}

template <class F>
spinmech_status guard(F&& f) {
    try {
        g_last_error.clear();
        f();
        return SPINMECH_OK;
    } catch (const spinmech::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return SPINMECH_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SPINMECH_ERR_INTERNAL;
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw spinmech::Error(spinmech::ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

int resolve_jobs(int jobs) { return jobs > 0 ? jobs : spinmech::default_jobs(); }

}  // namespace

extern "C" {

const char* spinmech_version(void) { return "0.1.0"; }

const char* spinmech_last_error(void) { return g_last_error.c_str(); }

const char* spinmech_status_name(spinmech_status s) {
    switch (s) {
        case SPINMECH_OK: return "ok";
        case SPINMECH_ERR_INVALID_ARGUMENT: return "invalid argument";
        case SPINMECH_ERR_CONFIG: return "config error";
        case SPINMECH_ERR_INFEASIBLE: return "infeasible";
        case SPINMECH_ERR_NUMERICAL: return "numerical failure";
        case SPINMECH_ERR_ZERO_PROBABILITY: return "zero probability";
        case SPINMECH_ERR_TRUNCATION: return "truncation risk";
        case SPINMECH_ERR_PRECONDITION: return "precondition violated";
        case SPINMECH_ERR_IO: return "i/o error";
        case SPINMECH_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

void spinmech_string_free(char* s) { std::free(s); }

spinmech_status spinmech_config_load(const char* path, spinmech_config** out) {
    return guard([&] {
        require(path && out, "null argument");
        *out = nullptr;
        *out = new spinmech_config{spinmech::Config::load(path)};
    });
}

spinmech_status spinmech_config_parse(const char* text, spinmech_config** out) {
    return guard([&] {
        require(text && out, "null argument");
        *out = nullptr;
        *out = new spinmech_config{spinmech::Config::parse(text)};
    });
}

spinmech_status spinmech_config_set(spinmech_config* cfg, const char* key, const char* value) {
    return guard([&] {
        require(cfg && key && value, "null argument");
        cfg->cfg.set(key, value);
    });
}

spinmech_status spinmech_config_to_string(const spinmech_config* cfg, char** out) {
    return guard([&] {
        require(cfg && out, "null argument");
        *out = dup_string(cfg->cfg.to_string());
    });
}

spinmech_status spinmech_config_summary(const spinmech_config* cfg, char** out_json) {
    return guard([&] {
        require(cfg && out_json, "null argument");
        const spinmech::SystemModel s = spinmech::build_system(cfg->cfg);
        nlohmann::ordered_json j;
        j["omega_m_rad_per_s"] = s.omega_m;
        j["f_m_Hz"] = s.omega_m / (2.0 * spinmech::constants::pi);
        j["m_eff_kg"] = s.mode.m_eff;
        j["z_zp_m"] = s.mode.z_zp;
        j["N_th_mech"] = s.N_th_mech;
        j["gamma_m_over_omega_m"] = s.gamma_m;
        j["xi"] = s.xi;
        j["Delta0_over_omega_m"] = s.Delta0;
        try {
            const spinmech::CoolingSite c = spinmech::cooling_site(s);
            j["cooling_site"] = {{"r_um", c.site.r * 1e6},
                                 {"g_c_over_omega_m", c.site.g / s.omega_m},
                                 {"margin", c.margin},
                                 {"at_sweet_spot", c.at_sweet_spot}};
        } catch (const spinmech::Error& e) {
            j["cooling_site"] = {{"error", e.what()}};
        }
        j["truncation"] = {{"fock_dim_cool", s.fock_cool},
                           {"fock_dim_cat", s.fock_cat},
                           {"fock_dim_squeeze", s.fock_squeeze}};
        j["tolerances"] = {{"rtol", s.tol.rtol},
                           {"atol", s.tol.atol},
                           {"steady_state_residual", 1e-10},
                           {"zero_probability", spinmech::kZeroProbability},
                           {"dressed_bin_tol", s.bin_tol}};
        *out_json = dup_string(j.dump(2));
    });
}

void spinmech_config_free(spinmech_config* cfg) { delete cfg; }

spinmech_status spinmech_cool_sweep(const spinmech_config* cfg, const double* radii_um, size_t n, int jobs,
                                    spinmech_table** out) {
    return guard([&] {
        require(cfg && out && (radii_um || n == 0), "null argument");
        *out = nullptr;
        std::vector<double> radii;
        if (n == 0) radii.push_back(cfg->cfg.number("membrane.radius_um"));
        else radii.assign(radii_um, radii_um + n);
        *out = new spinmech_table{spinmech::cooling_sweep(cfg->cfg, radii, resolve_jobs(jobs))};
    });
}

spinmech_status spinmech_cat_sweep(const spinmech_config* cfg, const double* gammas, size_t n, int jobs,
                                   spinmech_table** out) {
    return guard([&] {
        require(cfg && out && gammas && n > 0, "null argument or empty sweep");
        *out = nullptr;
        *out = new spinmech_table{
            spinmech::cat_curve(cfg->cfg, std::vector<double>(gammas, gammas + n), resolve_jobs(jobs))};
    });
}

spinmech_status spinmech_cat_wigner(const spinmech_config* cfg, double gamma, spinmech_grid** out) {
    return guard([&] {
        require(cfg && out, "null argument");
        *out = nullptr;
        *out = new spinmech_grid{spinmech::cat_wigner(cfg->cfg, gamma)};
    });
}

spinmech_status spinmech_squeeze_scan(const spinmech_config* cfg, const double* xis, size_t n_xi,
                                      const double* omegas, size_t n_omega, int jobs, spinmech_table** out) {
    return guard([&] {
        require(cfg && out && xis && omegas && n_xi > 0 && n_omega > 0, "null argument or empty grid");
        *out = nullptr;
        *out = new spinmech_table{spinmech::squeeze_map(cfg->cfg, std::vector<double>(xis, xis + n_xi),
                                                        std::vector<double>(omegas, omegas + n_omega),
                                                        resolve_jobs(jobs))};
    });
}

spinmech_status spinmech_squeeze_wigner(const spinmech_config* cfg, double xi, double omega_ratio,
                                        spinmech_grid** out) {
    return guard([&] {
        require(cfg && out, "null argument");
        *out = nullptr;
        *out = new spinmech_grid{spinmech::squeeze_wigner(cfg->cfg, xi, omega_ratio)};
    });
}

spinmech_status spinmech_parse_grid(const char* text, double** out, size_t* n) {
    return guard([&] {
        require(text && out && n, "null argument");
        const std::vector<double> v = spinmech::parse_grid(text);
        double* p = static_cast<double*>(std::malloc(v.size() * sizeof(double)));
        if (!p) throw std::bad_alloc();
        std::memcpy(p, v.data(), v.size() * sizeof(double));
        *out = p;
        *n = v.size();
    });
}

void spinmech_values_free(double* values) { std::free(values); }

size_t spinmech_table_rows(const spinmech_table* t) { return t ? t->table.rows().size() : 0; }

size_t spinmech_table_cols(const spinmech_table* t) { return t ? t->table.columns().size() : 0; }

const char* spinmech_table_column(const spinmech_table* t, size_t col) {
    if (!t || col >= t->table.columns().size()) return nullptr;
    return t->table.columns()[col].c_str();
}

double spinmech_table_value(const spinmech_table* t, size_t row, size_t col) {
    if (!t || row >= t->table.rows().size() || col >= t->table.columns().size()) return std::nan("");
    return t->table.at(row, col);
}

spinmech_status spinmech_table_write_csv(const spinmech_table* t, const char* path) {
    return guard([&] {
        require(t && path, "null argument");
        t->table.write_csv(path);
    });
}

void spinmech_table_free(spinmech_table* t) { delete t; }

double spinmech_grid_min(const spinmech_grid* g) { return g ? g->grid.min() : std::nan(""); }

double spinmech_grid_integral(const spinmech_grid* g) { return g ? g->grid.integral : std::nan(""); }

int spinmech_grid_warning(const spinmech_grid* g) { return g && g->grid.support_warning ? 1 : 0; }

spinmech_status spinmech_grid_write(const spinmech_grid* g, const char* csv_path, const char* json_path,
                                    const char* label) {
    return guard([&] {
        require(g && csv_path, "null argument");
        spinmech::write_text_file(csv_path, spinmech::wigner_csv(g->grid));
        if (json_path) {
            spinmech::write_text_file(json_path, spinmech::wigner_metadata_json(g->grid, label ? label : ""));
        }
    });
}

void spinmech_grid_free(spinmech_grid* g) { delete g; }

spinmech_status spinmech_validate(const char* suite, int flags, char** report, int* n_checks, int* n_failed) {
    return guard([&] {
        require(suite, "null argument");
        spinmech::ValidationOptions opt;
        opt.inject_thermal_sign_error = (flags & SPINMECH_VALIDATE_INJECT_THERMAL_SIGN_ERROR) != 0;
        const auto results = spinmech::run_validation(suite, opt);
        int failed = 0;
        for (const auto& r : results) failed += r.passed ? 0 : 1;
        if (n_checks) *n_checks = static_cast<int>(results.size());
        if (n_failed) *n_failed = failed;
        if (report) *report = dup_string(spinmech::format_report(results));
    });
}

}  // extern "C"
