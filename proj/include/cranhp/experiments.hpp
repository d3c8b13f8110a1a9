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

#ifndef CRANHP_EXPERIMENTS_HPP
#define CRANHP_EXPERIMENTS_HPP

#include "cranhp/config.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cranhp
{

class ExperimentError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentSpec
{
    std::string name; // fig2 .. fig7, validate
    nlohmann::json overrides = nlohmann::json::object();
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    int threads = 1;
};

struct ExperimentOutput
{
    std::vector<std::filesystem::path> files;
    bool passed = true; // only meaningful for validate
};

const std::vector<std::string> &experiment_names();

// Experiment defaults as JSON. Grid keys (M_grid, C_F_grid,
// M_hat_grid) are accepted next to the SystemConfig fields.
nlohmann::json experiment_defaults(const std::string &name);

ExperimentOutput run_experiment(const ExperimentSpec &spec);

// Single configuration: two-step hybrid design followed by Monte Carlo evaluation of the
// selected precoder and the full-digital reference. Columns:
// method, C_F, M, D, predicted_sumrate, sumrate_mean, ci, trials.
void run_single(const SystemConfig &cfg, const std::filesystem::path &out, int threads);

// Writes `content` to a sibling temporary file and renames it over `path`.
void write_atomically(const std::filesystem::path &path, const std::string &content);

// Shortest round-trip decimal for a double; "inf" for +infinity.
std::string format_number(double x);

} // namespace cranhp

#endif
