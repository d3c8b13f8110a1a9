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

#include "cranhp/config.hpp"
#include "cranhp/experiments.hpp"
#include "cranhp/validate.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

nlohmann::json read_json(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw cranhp::ConfigError("cannot open config file '" + path + "'");
    try
    {
        return nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw cranhp::ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Hybrid precoding simulator for C-RAN massive MIMO with capacity-limited fronthauls"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    int threads = 1;
    app.add_option("--seed", seed, "Master seed for every random stream (default 0)");
    app.add_option("--trials", trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    auto *run = app.add_subcommand("run", "Hybrid precoder design and Monte Carlo evaluation for one configuration");
    std::string config_path, run_out, geometry_out;
    run->add_option("--config", config_path, "JSON configuration")->required();
    run->add_option("--out", run_out, "Output CSV path")->required();
    run->add_option("--geometry-out", geometry_out, "Also write the channel geometry as JSON");

    auto *experiment = app.add_subcommand("experiment", "Regenerate the data behind one figure");
    std::string name, out_dir;
    std::vector<std::string> overrides;
    experiment->add_option("name", name, "fig2 | fig3 | fig4 | fig5 | fig6 | fig7 | validate")
        ->required()
        ->check(CLI::IsMember(cranhp::experiment_names()));
    experiment->add_option("--override", overrides, "key=value (value parsed as JSON)");
    experiment->add_option("--out", out_dir, "Output directory")->required();

    auto *validate = app.add_subcommand("validate", "Run the invariant and property suite");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try
    {
        if (run->parsed())
        {
            nlohmann::json doc = read_json(config_path);
            if (seed)
                doc["seed"] = *seed;
            if (trials)
                doc["trials"] = *trials;
            const cranhp::SystemConfig cfg = cranhp::parse_config(doc);
            if (!geometry_out.empty())
                cranhp::write_atomically(geometry_out, cranhp::make_geometry(cfg).to_json().dump(2) + "\n");
            cranhp::run_single(cfg, run_out, threads);
            return kExitOk;
        }

        if (experiment->parsed())
        {
            cranhp::ExperimentSpec spec;
            spec.name = name;
            spec.out_dir = out_dir;
            spec.seed = seed;
            spec.trials = trials;
            spec.threads = threads;
            for (const auto &o : overrides)
                cranhp::apply_override(spec.overrides, o);
            const auto result = cranhp::run_experiment(spec);
            for (const auto &f : result.files)
                std::cout << f.string() << "\n";
            return result.passed ? kExitOk : kExitFailure;
        }

        if (validate->parsed())
        {
            const auto results = cranhp::run_validation(seed.value_or(0), threads);
            bool ok = true;
            for (const auto &r : results)
            {
                std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "\n";
                ok = ok && r.passed;
            }
            return ok ? kExitOk : kExitFailure;
        }
    }
    catch (const cranhp::ConfigError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
