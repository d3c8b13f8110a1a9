// SPDX-License-Identifier: Apache-2.0
//
// cranhp - hybrid precoding simulator for C-RAN massive MIMO with capacity-limited fronthauls
// Copyright (C) 2026 The cranhp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include "cranhp/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace cranhp;
namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

fs::path scratch_dir(const std::string &name)
{
    const fs::path dir = fs::temp_directory_path() / ("cranhp_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string &s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string line; std::getline(ss, line);)
        out.push_back(line);
    return out;
}

std::string run(const std::string &name, const json &overrides, int threads, const std::string &tag)
{
    ExperimentSpec spec;
    spec.name = name;
    spec.overrides = overrides;
    spec.out_dir = scratch_dir(name + "_" + tag);
    spec.threads = threads;
    const auto out = run_experiment(spec);
    REQUIRE(out.files.size() == 1);
    CHECK(out.files[0] == spec.out_dir / (name + ".csv"));
    return slurp(out.files[0]);
}

const json kSmall = {{"N", 16}, {"M_hat", 4}, {"trials", 6}, {"n_paths", 8}};

} // namespace

TEST_CASE("format_number - Shortest round-trip text")
{
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(200.0) == "200");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    const double x = 78.66912345678901;
    CHECK(std::stod(format_number(x)) == x);
}

TEST_CASE("write_atomically - Replaces the target, creates parents, leaves no temporary")
{
    const fs::path dir = scratch_dir("atomic");
    const fs::path target = dir / "out.csv";
    write_atomically(target, "a\n");
    write_atomically(target, "b\n");
    CHECK(slurp(target) == "b\n");
    int count = 0;
    for ([[maybe_unused]] const auto &entry : fs::directory_iterator(dir))
        ++count;
    CHECK(count == 1);

    write_atomically(dir / "nested" / "x.csv", "c");
    CHECK(slurp(dir / "nested" / "x.csv") == "c");
    // a regular file where a directory is needed
    CHECK_THROWS_AS(write_atomically(target / "x.csv", "d"), ExperimentError);
}

TEST_CASE("experiment_defaults - Known names only")
{
    CHECK(experiment_names().size() == 7);
    CHECK(experiment_defaults("fig7")["M_hat"] == 16);
    CHECK(experiment_defaults("fig2")["K"] == 100);
    CHECK_THROWS_AS(experiment_defaults("fig99"), ExperimentError);
    ExperimentSpec spec;
    spec.name = "fig99";
    CHECK_THROWS_AS(run_experiment(spec), ExperimentError);
}

TEST_CASE("run_experiment - Column layout of every output")
{
    const auto fig2 = lines(run("fig2", {{"N", 16}, {"K", 6}, {"M_hat", 10}, {"n_paths", 8}}, 1, "cols"));
    CHECK(fig2.front() == "k,delta_norm,ebar_norm,trace_norm");
    CHECK(fig2.size() == 7);
    CHECK(fig2[1].rfind("1,1,", 0) == 0);

    json g3 = kSmall;
    g3["M_grid"] = {1, 2};
    const auto fig3 = lines(run("fig3", g3, 1, "cols"));
    CHECK(fig3.front() == "method,C_F,M,sumrate_mean,ci,trials");
    // full-digital row, then 2 capacities x 2 M x 3 methods
    CHECK(fig3.size() == 1 + 1 + 12);
    CHECK(fig3[1].rfind("full_digital,inf,16,", 0) == 0);

    json g4 = kSmall;
    g4["M_grid"] = {2};
    g4["C_F_grid"] = {50, 100};
    const auto fig4 = lines(run("fig4", g4, 1, "cols"));
    CHECK(fig4.front() == "method,M,C_F,sumrate_mean,ci,trials");
    CHECK(fig4.size() == 5);

    json g5 = kSmall;
    g5["M_hat_grid"] = {3};
    g5["C_F_grid"] = {4, 100};
    const auto fig5 = lines(run("fig5", g5, 1, "cols"));
    CHECK(fig5.front() == "method,M_hat,C_F,sumrate_mean,ci,trials");
    // C_F = 4 fits at most 2 chains, so full activation is skipped there
    CHECK(fig5.size() == 1 + 2 + 3);

    json g6 = kSmall;
    g6["M_hat_grid"] = {2, 4};
    g6["C_F_grid"] = {1, 40, 400};
    const auto fig6 = lines(run("fig6", g6, 1, "cols"));
    CHECK(fig6.front() == "M_hat,C_F,M_star,D_star");
    CHECK(fig6.size() == 1 + 4);

    json g7 = kSmall;
    g7["M_hat"] = 3;
    const auto fig7 = lines(run("fig7", g7, 1, "cols"));
    CHECK(fig7.front() == "M1,M2,sumrate_mean,ci");
    CHECK(fig7.size() == 1 + 9);
}

TEST_CASE("run_experiment - Output is identical across thread counts")
{
    json g3 = kSmall;
    g3["M_grid"] = {1, 3};
    CHECK(run("fig3", g3, 1, "t1") == run("fig3", g3, 3, "t3"));

    json g6 = kSmall;
    g6["C_F_grid"] = {20, 60};
    g6["M_hat_grid"] = {4};
    CHECK(run("fig6", g6, 1, "t1") == run("fig6", g6, 2, "t2"));
}

TEST_CASE("run_experiment - Bad overrides are configuration errors")
{
    json bad = kSmall;
    bad["M_grid"] = "many";
    ExperimentSpec spec;
    spec.name = "fig3";
    spec.overrides = bad;
    spec.out_dir = scratch_dir("bad");
    CHECK_THROWS_AS(run_experiment(spec), ConfigError);

    spec.name = "fig7";
    spec.overrides = {{"L", 3}, {"distances", {1000, 500, 100}}};
    CHECK_THROWS_AS(run_experiment(spec), ConfigError);
}

TEST_CASE("run_single - One row for the design and one for the reference")
{
    SystemConfig cfg;
    cfg.N = 16;
    cfg.M_hat = 4;
    cfg.trials = 5;
    cfg.n_paths = 8;
    cfg.distances = {{1000.0, 1000.0}, {500.0, 500.0}, {100.0, 100.0}};
    const fs::path out = scratch_dir("single") / "run.csv";
    run_single(cfg, out, 1);
    const auto rows = lines(slurp(out));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "method,C_F,M,D,predicted_sumrate,sumrate_mean,ci,trials");
    CHECK(rows[1].rfind("hybrid_trace_weighted,200,", 0) == 0);
    CHECK(rows[2].rfind("full_digital,inf,16;16,inf;inf,nan,", 0) == 0);
}
