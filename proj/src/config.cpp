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

#include <cmath>
#include <limits>

namespace cranhp
{

double dbm_to_mw(double dbm)
{
    return std::pow(10.0, dbm / 10.0);
}

double SystemConfig::P_tot() const
{
    return dbm_to_mw(P_tot_dBm);
}

double SystemConfig::sigma2() const
{
    return dbm_to_mw(noise_dBm);
}

double SystemConfig::beta() const
{
    if (beta_explicit)
        return *beta_explicit;
    return static_cast<double>(K) / (static_cast<double>(Nbar()) * rho());
}

RVector SystemConfig::powers() const
{
    RVector out(K);
    for (int k = 0; k < K; ++k)
        out(k) = p.empty() ? 1.0 : p.at(k);
    return out;
}

static nlohmann::json capacity_to_json(double c)
{
    if (std::isinf(c))
        return "inf";
    return c;
}

nlohmann::json SystemConfig::to_json() const
{
    nlohmann::json doc;
    doc["L"] = L;
    doc["N"] = N;
    doc["K"] = K;
    doc["M_hat"] = M_hat;
    doc["C_F"] = capacity_to_json(C_F);
    doc["P_tot_dBm"] = P_tot_dBm;
    doc["noise_dBm"] = noise_dBm;
    doc["eta"] = eta;
    doc["distances"] = distances;
    doc["n_paths"] = n_paths;
    doc["combiner"] = combiner == Combining::TraceWeighted ? "trace" : "equal";
    doc["tied_M"] = tied_M;
    if (beta_explicit)
        doc["beta"] = *beta_explicit;
    else
        doc["beta"] = "default";
    doc["p"] = p;
    doc["trials"] = trials;
    doc["seed"] = seed;
    if (geometry)
        doc["geometry"] = geometry->to_json();
    return doc;
}

static nlohmann::json defaults_json()
{
    return SystemConfig{}.to_json();
}

nlohmann::json merged_config_json(const nlohmann::json &doc)
{
    if (!doc.is_object())
        throw ConfigError("config: top-level JSON value must be an object");
    nlohmann::json merged = defaults_json();
    merged.erase("distances");
    merged.erase("p");
    for (auto it = doc.begin(); it != doc.end(); ++it)
        merged[it.key()] = it.value();
    return merged;
}

namespace
{

template <typename T>
T field(const nlohmann::json &doc, const char *name)
{
    try
    {
        return doc.at(name).get<T>();
    }
    catch (const nlohmann::json::exception &)
    {
        throw ConfigError(std::string("config field '") + name + "' is missing or has the wrong type");
    }
}

double capacity_field(const nlohmann::json &doc)
{
    const auto &v = doc.at("C_F");
    if (v.is_string())
    {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "infinity" || s == "unlimited")
            return std::numeric_limits<double>::infinity();
        throw ConfigError("config field 'C_F' must be a number or \"inf\"");
    }
    return field<double>(doc, "C_F");
}

} // namespace

SystemConfig parse_config(const nlohmann::json &doc)
{
    const nlohmann::json merged = merged_config_json(doc);

    static const char *known[] = {"L",       "N",      "K",    "M_hat",  "C_F",    "P_tot_dBm", "noise_dBm",
                                  "eta",     "distances", "n_paths", "combiner", "tied_M", "beta",  "p",
                                  "trials",  "seed",   "geometry"};
    for (auto it = merged.begin(); it != merged.end(); ++it)
    {
        bool ok = false;
        for (const char *k : known)
            ok = ok || it.key() == k;
        if (!ok)
            throw ConfigError("config: unknown field '" + it.key() + "'");
    }

    SystemConfig cfg;
    cfg.L = field<int>(merged, "L");
    cfg.N = field<int>(merged, "N");
    cfg.K = field<int>(merged, "K");
    cfg.M_hat = field<int>(merged, "M_hat");
    cfg.C_F = capacity_field(merged);
    cfg.P_tot_dBm = field<double>(merged, "P_tot_dBm");
    cfg.noise_dBm = field<double>(merged, "noise_dBm");
    cfg.eta = field<double>(merged, "eta");
    cfg.n_paths = field<int>(merged, "n_paths");
    cfg.tied_M = field<bool>(merged, "tied_M");
    cfg.trials = field<int>(merged, "trials");
    cfg.seed = field<std::uint64_t>(merged, "seed");

    const auto combiner = field<std::string>(merged, "combiner");
    if (combiner == "trace" || combiner == "trace_weighted")
        cfg.combiner = Combining::TraceWeighted;
    else if (combiner == "equal")
        cfg.combiner = Combining::Equal;
    else
        throw ConfigError("config field 'combiner' must be \"trace\" or \"equal\"");

    const auto &beta = merged.at("beta");
    if (beta.is_number())
        cfg.beta_explicit = beta.get<double>();
    else if (!(beta.is_string() && beta.get<std::string>() == "default"))
        throw ConfigError("config field 'beta' must be a number or \"default\"");

    if (merged.contains("p"))
        cfg.p = field<std::vector<double>>(merged, "p");

    if (merged.contains("distances"))
    {
        const auto &d = merged.at("distances");
        if (d.is_array() && !d.empty() && d.front().is_number())
        {
            // one distance per UE, shared by every RRH
            for (const auto &dk : field<std::vector<double>>(merged, "distances"))
                cfg.distances.emplace_back(cfg.L > 0 ? cfg.L : 1, dk);
        }
        else
            cfg.distances = field<std::vector<std::vector<double>>>(merged, "distances");
    }
    else if (cfg.K == 3 && cfg.L >= 1)
    {
        for (double dk : {1000.0, 500.0, 100.0})
            cfg.distances.emplace_back(cfg.L, dk);
    }

    if (merged.contains("geometry"))
    {
        try
        {
            cfg.geometry = ChannelGeometry::from_json(merged.at("geometry"));
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ConfigError(std::string("config field 'geometry' is malformed: ") + e.what());
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(std::string("config field 'geometry' is malformed: ") + e.what());
        }
    }

    validate_config(cfg);
    return cfg;
}

void validate_config(const SystemConfig &cfg)
{
    auto require = [](bool ok, const std::string &msg) {
        if (!ok)
            throw ConfigError(msg);
    };
    require(cfg.L >= 1, "L >= 1 required");
    require(cfg.N >= 1, "N >= 1 required");
    require(cfg.K >= 1, "K >= 1 required");
    require(cfg.K < cfg.N, "K < N required");
    require(cfg.M_hat >= 1, "M_hat >= 1 required");
    require(cfg.M_hat <= cfg.N, "M_hat <= N required");
    require(cfg.C_F > 0.0, "C_F > 0 required");
    require(std::isfinite(cfg.P_tot_dBm), "P_tot_dBm must be finite");
    require(std::isfinite(cfg.noise_dBm), "noise_dBm must be finite");
    require(cfg.eta >= 2.0, "eta >= 2 required");
    require(cfg.n_paths >= 1, "n_paths >= 1 required");
    require(cfg.trials >= 1, "trials >= 1 required");
    require(!cfg.beta_explicit || *cfg.beta_explicit > 0.0, "beta > 0 required");
    require(cfg.p.empty() || static_cast<int>(cfg.p.size()) == cfg.K, "p must hold K powers");
    for (double pk : cfg.p)
        require(pk > 0.0, "p_k > 0 required");

    if (cfg.geometry)
    {
        require(cfg.geometry->N == cfg.N && cfg.geometry->L == cfg.L && cfg.geometry->K == cfg.K,
                "geometry dimensions must match N, L and K");
        return;
    }
    require(static_cast<int>(cfg.distances.size()) == cfg.K, "distances must have K rows");
    for (const auto &row : cfg.distances)
    {
        require(static_cast<int>(row.size()) == cfg.L, "distances must have L entries per UE");
        for (double d : row)
            require(d > 0.0, "distances > 0 required");
    }
}

void apply_override(nlohmann::json &doc, const std::string &assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must look like key=value: '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    auto parsed = nlohmann::json::parse(value, nullptr, false);
    doc[key] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
}

ChannelGeometry make_geometry(const SystemConfig &cfg)
{
    if (cfg.geometry)
        return *cfg.geometry;
    return draw_geometry(cfg.N, cfg.L, cfg.K, cfg.eta, cfg.distances, cfg.n_paths, cfg.seed);
}

} // namespace cranhp
