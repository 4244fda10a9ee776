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

// spinmech command-line tool. Talks to the simulator only through the C API.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "spinmech/spinmech.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariantFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumerical = 4;

int exit_code_for(spinmech_status s) {
    switch (s) {
        case SPINMECH_OK: return kExitOk;
        case SPINMECH_ERR_CONFIG:
        case SPINMECH_ERR_INVALID_ARGUMENT:
        case SPINMECH_ERR_IO: return kExitConfig;
        case SPINMECH_ERR_INFEASIBLE: return kExitInfeasible;
        default: return kExitNumerical;
    }
}

struct Failure {
    spinmech_status status;
    std::string message;
};

void check(spinmech_status s) {
    if (s != SPINMECH_OK) throw Failure{s, spinmech_last_error()};
}

std::string take_string(char* s) {
    std::string out = s ? s : "";
    spinmech_string_free(s);
    return out;
}

std::string sha256_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return "";
    std::ostringstream ss;
    ss << f.rdbuf();
    const std::string data = ss.str();
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) return "";
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

int resolve_jobs(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("SPINMECH_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return 0;
}

using ConfigPtr = std::unique_ptr<spinmech_config, decltype(&spinmech_config_free)>;
using TablePtr = std::unique_ptr<spinmech_table, decltype(&spinmech_table_free)>;
using GridPtr = std::unique_ptr<spinmech_grid, decltype(&spinmech_grid_free)>;

std::vector<double> grid_values(const std::string& text) {
    double* v = nullptr;
    size_t n = 0;
    check(spinmech_parse_grid(text.c_str(), &v, &n));
    std::vector<double> out(v, v + n);
    spinmech_values_free(v);
    return out;
}

// Shared state of one experiment run; the manifest is written from here even
// when the run fails part way.
struct Run {
    std::string command;
    std::vector<std::string> argv;
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = ".";
    int jobs = 0;
    ConfigPtr cfg{nullptr, spinmech_config_free};
    json summary;

    std::string out_path(const std::string& name) const { return (fs::path(out_dir) / name).string(); }

    void load() {
        spinmech_config* c = nullptr;
        check(spinmech_config_load(config_path.c_str(), &c));
        cfg.reset(c);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw Failure{SPINMECH_ERR_CONFIG, "--set expects key=value, got '" + kv + "'"};
            check(spinmech_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
        }
        char* s = nullptr;
        check(spinmech_config_summary(cfg.get(), &s));
        summary = json::parse(take_string(s));
    }

    void write_manifest(const std::string& status, int code, const std::string& message, double seconds) const {
        json m;
        m["tool"] = "spinmech";
        m["version"] = spinmech_version();
        m["command"] = command;
        m["argv"] = argv;
        m["status"] = status;
        m["exit_code"] = code;
        if (!message.empty()) m["error"] = message;
        m["wall_time_s"] = seconds;
        m["jobs"] = jobs;
        if (cfg) {
            char* s = nullptr;
            if (spinmech_config_to_string(cfg.get(), &s) == SPINMECH_OK) m["config"] = take_string(s);
        }
        if (!summary.is_null()) {
            m["tolerances"] = summary["tolerances"];
            m["truncation"] = summary["truncation"];
            m["derived"] = summary;
        }
        json hashes = json::object();
        if (!config_path.empty()) hashes[config_path] = sha256_file(config_path);
        m["input_sha256"] = hashes;
        std::vector<std::string> files = {"manifest.json"};
        std::error_code ec;
        for (const auto& e : fs::directory_iterator(out_dir, ec))
            if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(e.path().filename().string());
        std::sort(files.begin(), files.end());
        m["outputs"] = files;
        std::ofstream f(out_path("manifest.json"), std::ios::trunc);
        f << m.dump(2) << '\n';
    }
};

template <class Body>
int execute(Run& run, Body&& body) {
    const auto start = std::chrono::steady_clock::now();
    int code = kExitOk;
    std::string status = "ok", message;
    bool have_dir = true;
    try {
        std::error_code ec;
        fs::create_directories(run.out_dir, ec);
        if (ec || !fs::is_directory(run.out_dir)) {
            have_dir = false;
            throw Failure{SPINMECH_ERR_IO, "cannot create output directory '" + run.out_dir + "'"};
        }
        run.load();
        body();
    } catch (const Failure& f) {
        code = exit_code_for(f.status);
        status = spinmech_status_name(f.status);
        message = f.message;
        std::cerr << "spinmech " << run.command << ": " << f.message << '\n';
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (have_dir) run.write_manifest(status, code, message, secs);
    return code;
}

void add_common(CLI::App* sub, Run& run, int& jobs_flag) {
    sub->add_option("--config", run.config_path, "configuration file (key = value)")->required();
    sub->add_option("--out", run.out_dir, "output directory")->capture_default_str();
    sub->add_option("--jobs", jobs_flag, "worker threads (default: SPINMECH_JOBS or all cores)");
    sub->add_option("--set", run.overrides, "override a config key, key=value (repeatable)");
}

void write_table(const TablePtr& t, const std::string& path) { check(spinmech_table_write_csv(t.get(), path.c_str())); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spin-mechanical membrane simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(spinmech_version()));

    Run run;
    for (int i = 0; i < argc; ++i) run.argv.emplace_back(argv[i]);
    int jobs_flag = 0;

    auto* cool = app.add_subcommand("cool", "optimised sideband cooling versus membrane radius");
    add_common(cool, run, jobs_flag);
    std::string radius_sweep;
    cool->add_option("--radius-sweep", radius_sweep, "lo:hi:n in micrometres (default: membrane.radius_um)");

    auto* cat = app.add_subcommand("cat", "cat-state fidelity versus dephasing");
    add_common(cat, run, jobs_flag);
    std::string gamma_sweep = "0:0.4:9";
    bool cat_wigner = false;
    double wigner_gamma = 0.2;
    cat->add_option("--gamma-sweep", gamma_sweep, "dephasing values over omega_m, lo:hi:n or list")
        ->capture_default_str();
    cat->add_flag("--wigner", cat_wigner, "also write the Wigner grid of the spin-up branch");
    cat->add_option("--wigner-gamma", wigner_gamma, "dephasing for the Wigner grid")->capture_default_str();

    auto* squeeze = app.add_subcommand("squeeze", "squeezing map over coupling and Rabi frequency");
    add_common(squeeze, run, jobs_flag);
    std::string xi_grid = "0.5:3:6", omega_grid = "2:30:8";
    bool squeeze_wig = false;
    squeeze->add_option("--xi-grid", xi_grid, "g0/omega_m values")->capture_default_str();
    squeeze->add_option("--omega-grid", omega_grid, "Omega/omega_m values")->capture_default_str();
    squeeze->add_flag("--wigner", squeeze_wig, "also write the Wigner grid at the best point");

    auto* validate = app.add_subcommand("validate", "run the invariant suites");
    std::string suite = "all";
    bool inject = false;
    validate->add_option("--suite", suite, "core, physics or all")
        ->check(CLI::IsMember({"core", "physics", "all"}))
        ->capture_default_str();
    validate->add_flag("--inject-fault", inject, "flip the thermal term sign (test fixture)")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }
    run.jobs = resolve_jobs(jobs_flag);

    try {
        if (*validate) {
            char* report = nullptr;
            int n = 0, failed = 0;
            const spinmech_status s = spinmech_validate(suite.c_str(), inject ? SPINMECH_VALIDATE_INJECT_THERMAL_SIGN_ERROR : 0,
                                                        &report, &n, &failed);
            if (s != SPINMECH_OK) {
                std::cerr << "spinmech validate: " << spinmech_last_error() << '\n';
                return exit_code_for(s);
            }
            std::cout << take_string(report);
            return failed == 0 ? kExitOk : kExitInvariantFailure;
        }

        if (*cool) {
            run.command = "cool";
            return execute(run, [&] {
                const std::vector<double> radii = radius_sweep.empty() ? std::vector<double>{} : grid_values(radius_sweep);
                spinmech_table* t = nullptr;
                check(spinmech_cool_sweep(run.cfg.get(), radii.data(), radii.size(), run.jobs, &t));
                write_table(TablePtr(t, spinmech_table_free), run.out_path("cooling.csv"));
            });
        }

        if (*cat) {
            run.command = "cat";
            return execute(run, [&] {
                const std::vector<double> gammas = grid_values(gamma_sweep);
                spinmech_table* t = nullptr;
                check(spinmech_cat_sweep(run.cfg.get(), gammas.data(), gammas.size(), run.jobs, &t));
                write_table(TablePtr(t, spinmech_table_free), run.out_path("cat_fidelity.csv"));
                if (cat_wigner) {
                    spinmech_grid* g = nullptr;
                    check(spinmech_cat_wigner(run.cfg.get(), wigner_gamma, &g));
                    GridPtr gp(g, spinmech_grid_free);
                    const std::string label = "cat spin-up branch, Gamma_tilde/omega_m = " + std::to_string(wigner_gamma);
                    check(spinmech_grid_write(gp.get(), run.out_path("cat_wigner.csv").c_str(),
                                              run.out_path("cat_wigner.json").c_str(), label.c_str()));
                    if (spinmech_grid_warning(gp.get())) std::cerr << "warning: Wigner grid misses part of the state\n";
                }
            });
        }

        if (*squeeze) {
            run.command = "squeeze";
            return execute(run, [&] {
                const std::vector<double> xis = grid_values(xi_grid), oms = grid_values(omega_grid);
                spinmech_table* t = nullptr;
                check(spinmech_squeeze_scan(run.cfg.get(), xis.data(), xis.size(), oms.data(), oms.size(), run.jobs, &t));
                TablePtr tp(t, spinmech_table_free);
                write_table(tp, run.out_path("squeeze_map.csv"));
                if (squeeze_wig || spinmech_table_rows(tp.get()) == 1) {
                    size_t best = 0;
                    for (size_t r = 1; r < spinmech_table_rows(tp.get()); ++r)
                        if (spinmech_table_value(tp.get(), r, 2) < spinmech_table_value(tp.get(), best, 2)) best = r;
                    const double xi = spinmech_table_value(tp.get(), best, 0);
                    const double om = spinmech_table_value(tp.get(), best, 1);
                    spinmech_grid* g = nullptr;
                    check(spinmech_squeeze_wigner(run.cfg.get(), xi, om, &g));
                    GridPtr gp(g, spinmech_grid_free);
                    const std::string label = "squeezed state, xi = " + std::to_string(xi) + ", Omega/omega_m = " + std::to_string(om);
                    check(spinmech_grid_write(gp.get(), run.out_path("squeeze_wigner.csv").c_str(),
                                              run.out_path("squeeze_wigner.json").c_str(), label.c_str()));
                }
            });
        }
    } catch (const Failure& f) {
        std::cerr << "spinmech: " << f.message << '\n';
        return exit_code_for(f.status);
    }
    return kExitConfig;
}
