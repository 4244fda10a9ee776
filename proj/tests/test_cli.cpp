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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path work(const std::string& name) {
    const fs::path d = fs::path(SPINMECH_WORK_DIR) / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

Outcome run(const std::string& args, const fs::path& dir, const std::string& env = "") {
    const fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
    const std::string cmd = env + " \"" SPINMECH_CLI_PATH "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    Outcome o;
    o.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    o.out = slurp(out);
    o.err = slurp(err);
    fs::remove(out);
    fs::remove(err);
    return o;
}

std::string cfg(const std::string& name) { return std::string("--config \"") + SPINMECH_CONFIG_DIR + "/" + name + "\""; }

// Parsed CSV: header plus numeric rows.
struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    int col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        FAIL("missing column " << name);
        return -1;
    }
};

Csv read_csv(const fs::path& p) {
    Csv c;
    std::ifstream f(p);
    std::string line;
    bool first = true;
    while (std::getline(f, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            c.header = cells;
            first = false;
        } else {
            std::vector<double> r;
            for (const auto& s : cells) r.push_back(std::stod(s));
            c.rows.push_back(r);
        }
    }
    return c;
}

nlohmann::json manifest(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "manifest.json")); }

void check_manifest_lists_everything(const fs::path& dir) {
    auto m = manifest(dir);
    std::vector<std::string> listed = m["outputs"].get<std::vector<std::string>>();
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        CHECK_MESSAGE(std::find(listed.begin(), listed.end(), name) != listed.end(), name);
    }
}

}  // namespace

TEST_CASE("missing key exits 2 and names the key") {
    auto dir = work("missing_key");
    std::ifstream in(std::string(SPINMECH_CONFIG_DIR) + "/default.cfg");
    std::ofstream out(dir / "broken.cfg");
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("membrane.Q", 0) != 0) out << line << '\n';
    out.close();
    auto o = run("cool --config \"" + (dir / "broken.cfg").string() + "\" --out \"" + (dir / "out").string() + "\"", dir);
    CHECK(o.code == 2);
    CHECK(o.err.find("membrane.Q") != std::string::npos);
    auto m = manifest(dir / "out");
    CHECK(m["exit_code"] == 2);
    CHECK(m["status"] == "config error");
}

TEST_CASE("infeasible cooling site exits 3") {
    auto dir = work("infeasible");
    auto o = run("cool " + cfg("default.cfg") + " --set rates.Gamma_over_omega_m=1e-9 --out \"" + dir.string() + "\"", dir);
    CHECK(o.code == 3);
    CHECK(o.err.find("cooling site") != std::string::npos);
    CHECK(manifest(dir)["status"] == "infeasible");
}

TEST_CASE("bad arguments exit 2") {
    auto dir = work("bad_args");
    CHECK(run("cat " + cfg("default.cfg") + " --gamma-sweep 1:2 --out \"" + dir.string() + "\"", dir).code == 2);
    CHECK(run("cool", dir).code == 2);
    CHECK(run("validate --suite nope", dir).code == 2);
}

TEST_CASE("validate") {
    auto dir = work("validate");
    auto core = run("validate --suite core", dir);
    CHECK(core.code == 0);
    auto all = run("validate --suite all", dir);
    CHECK(all.code == 0);
    int lines = 0;
    std::stringstream ss(all.out);
    std::string line;
    while (std::getline(ss, line))
        if (line.rfind("PASS", 0) == 0) ++lines;
    CHECK(lines >= 12);
    auto bad = run("validate --suite all --inject-fault", dir);
    CHECK(bad.code != 0);
    CHECK(bad.out.find("FAIL  thermalization_to_bath_occupation") != std::string::npos);
}

TEST_CASE("ground-state cooling single radius") {
    auto dir = work("cool_one");
    auto o = run("cool " + cfg("ground_state.cfg") + " --radius-sweep 0.03:0.03:1 --jobs 1 --out \"" + dir.string() + "\"", dir);
    REQUIRE(o.code == 0);
    auto c = read_csv(dir / "cooling.csv");
    REQUIRE(c.rows.size() == 1);
    CHECK(c.rows[0][c.col("n_eff")] < 1.0);
    check_manifest_lists_everything(dir);
}

TEST_CASE("default radius sweep covers 1 to 5 micrometres") {
    auto dir = work("cool_sweep");
    auto o = run("cool " + cfg("default.cfg") + " --radius-sweep 1:5:8 --out \"" + dir.string() + "\"", dir);
    REQUIRE(o.code == 0);
    auto c = read_csv(dir / "cooling.csv");
    REQUIRE(c.rows.size() == 8);
    CHECK(c.rows.front()[c.col("R_um")] == 1.0);
    CHECK(c.rows.back()[c.col("R_um")] == 5.0);
    for (const auto& r : c.rows) {
        CHECK(std::isfinite(r[c.col("n_eff")]));
        CHECK(r[c.col("n_eff")] >= 0.0);
    }
}

TEST_CASE("cat sweep, Wigner output and reproducibility") {
    auto dir = work("cat");
    const std::string args = "cat " + cfg("default.cfg") + " --gamma-sweep 0:0.4:9 --wigner --wigner-gamma 0.2 --out \"";
    auto o = run(args + dir.string() + "\"", dir);
    REQUIRE(o.code == 0);
    auto c = read_csv(dir / "cat_fidelity.csv");
    REQUIRE(c.rows.size() == 9);
    const int f = c.col("fidelity");
    CHECK(c.rows[0][f] >= 0.99);
    for (std::size_t k = 1; k < c.rows.size(); ++k) CHECK(c.rows[k][f] < c.rows[k - 1][f]);

    std::ifstream w(dir / "cat_wigner.csv");
    std::string line;
    std::getline(w, line);
    double wmin = 1e300;
    while (std::getline(w, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        while (std::getline(ss, cell, ',')) wmin = std::min(wmin, std::stod(cell));
    }
    CHECK(wmin < 0.0);
    auto meta = nlohmann::json::parse(slurp(dir / "cat_wigner.json"));
    CHECK(meta["min"].get<double>() == doctest::Approx(wmin).epsilon(1e-9));
    check_manifest_lists_everything(dir);

    auto again = work("cat_again");
    REQUIRE(run(args + again.string() + "\" --jobs 3", again).code == 0);
    CHECK(slurp(dir / "cat_fidelity.csv") == slurp(again / "cat_fidelity.csv"));
    CHECK(slurp(dir / "cat_wigner.csv") == slurp(again / "cat_wigner.csv"));
}

TEST_CASE("squeeze single point writes dB and the Wigner grid") {
    auto dir = work("squeeze_one");
    auto o = run("squeeze " + cfg("default.cfg") + " --xi-grid 2 --omega-grid 15 --out \"" + dir.string() + "\"", dir);
    REQUIRE(o.code == 0);
    auto c = read_csv(dir / "squeeze_map.csv");
    REQUIRE(c.rows.size() == 1);
    CHECK(c.rows[0][c.col("min_dB")] < 0.0);
    CHECK(fs::exists(dir / "squeeze_wigner.csv"));
    CHECK(fs::exists(dir / "squeeze_wigner.json"));
    check_manifest_lists_everything(dir);
}

TEST_CASE("zero coupling gives no squeezing anywhere") {
    auto dir = work("squeeze_zero");
    auto o = run("squeeze " + cfg("default.cfg") + " --xi-grid 0 --omega-grid 2,10,30 --out \"" + dir.string() + "\"", dir);
    REQUIRE(o.code == 0);
    auto c = read_csv(dir / "squeeze_map.csv");
    REQUIRE(c.rows.size() == 3);
    for (const auto& r : c.rows) CHECK(std::abs(r[c.col("min_dB")]) < 1e-6);
}

TEST_CASE("worker count from the environment") {
    auto dir = work("jobs_env");
    auto o = run("squeeze " + cfg("default.cfg") + " --xi-grid 0 --omega-grid 5 --out \"" + dir.string() + "\"", dir,
                 "SPINMECH_JOBS=2");
    REQUIRE(o.code == 0);
    CHECK(manifest(dir)["jobs"] == 2);
    auto flag = work("jobs_flag");
    REQUIRE(run("squeeze " + cfg("default.cfg") + " --xi-grid 0 --omega-grid 5 --jobs 1 --out \"" + flag.string() + "\"",
                flag, "SPINMECH_JOBS=2")
                .code == 0);
    CHECK(manifest(flag)["jobs"] == 1);
    CHECK(slurp(dir / "squeeze_map.csv") == slurp(flag / "squeeze_map.csv"));
}
