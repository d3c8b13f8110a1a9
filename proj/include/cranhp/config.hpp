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

#ifndef CRANHP_CONFIG_HPP
#define CRANHP_CONFIG_HPP

#include "cranhp/channel.hpp"
#include "cranhp/numerics.hpp"
#include "cranhp/precoding.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cranhp
{

class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// All scalar parameters of one simulated system. Powers are kept in dBm as given;
// the linear (milliwatt) values are derived through the accessors below.
struct SystemConfig
{
    int L = 2;
    int N = 64;
    int K = 3;
    int M_hat = 48;
    double C_F = 200.0; // bits per channel use per fronthaul link; may be +inf
    double P_tot_dBm = 30.0;
    double noise_dBm = -116.0;
    double eta = 3.0;
    std::vector<std::vector<double>> distances; // K x L meters
    int n_paths = 32;
    Combining combiner = Combining::TraceWeighted;
    bool tied_M = true;
    std::optional<double> beta_explicit;
    std::vector<double> p; // K powers
    int trials = 500;
    std::uint64_t seed = 0;
    std::optional<ChannelGeometry> geometry; // imported geometry; drawn from the seed otherwise

    double P_tot() const;  // mW
    double sigma2() const; // mW
    double rho() const { return P_tot() / sigma2(); }
    double beta() const;   // K / (Nbar rho) unless given explicitly
    int Nbar() const { return N * L; }
    RVector powers() const;

    nlohmann::json to_json() const;
};

// Defaults first, then the document on top. Violated invariants raise ConfigError
// naming the field and the constraint.
SystemConfig parse_config(const nlohmann::json &doc);

// Defaults merged under `doc` and returned as JSON (used for overrides).
nlohmann::json merged_config_json(const nlohmann::json &doc);

// Parses "key=value" where value is JSON, falling back to a plain string.
void apply_override(nlohmann::json &doc, const std::string &assignment);

void validate_config(const SystemConfig &cfg);

// Geometry from the config: the imported one, or angles drawn from the seed.
ChannelGeometry make_geometry(const SystemConfig &cfg);

double dbm_to_mw(double dbm);

} // namespace cranhp

#endif
