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

#include "cranhp/config.hpp"

#include <cmath>
#include <limits>

using namespace cranhp;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;
using nlohmann::json;

TEST_CASE("dbm_to_mw - Reference points")
{
    CHECK_THAT(dbm_to_mw(30.0), WithinRel(1000.0, 1e-14));
    CHECK_THAT(dbm_to_mw(0.0), WithinRel(1.0, 1e-15));
    CHECK_THAT(dbm_to_mw(-116.0), WithinRel(std::pow(10.0, -11.6), 1e-14));
}

TEST_CASE("parse_config - Defaults")
{
    const auto cfg = parse_config(json::object());
    CHECK(cfg.L == 2);
    CHECK(cfg.N == 64);
    CHECK(cfg.K == 3);
    CHECK(cfg.M_hat == 48);
    CHECK(cfg.C_F == 200.0);
    CHECK(cfg.eta == 3.0);
    CHECK(cfg.n_paths == 32);
    CHECK(cfg.combiner == Combining::TraceWeighted);
    CHECK(cfg.tied_M);
    CHECK(cfg.distances == std::vector<std::vector<double>>{{1000, 1000}, {500, 500}, {100, 100}});
    CHECK_THAT(cfg.rho(), WithinRel(std::pow(10.0, 14.6), 1e-13));
    CHECK_THAT(cfg.beta(), WithinRel(3.0 / (128.0 * cfg.rho()), 1e-14));
    CHECK(cfg.powers() == RVector::Ones(3));
}

TEST_CASE("parse_config - Field forms")
{
    const auto cfg = parse_config(json::parse(R"({"C_F": "inf", "combiner": "equal", "beta": 0.25,
        "distances": [[10, 20], [30, 40], [50, 60]], "p": [1, 2, 3], "tied_M": false})"));
    CHECK(std::isinf(cfg.C_F));
    CHECK(cfg.combiner == Combining::Equal);
    CHECK(cfg.beta() == 0.25);
    CHECK(cfg.distances[2][1] == 60.0);
    CHECK(cfg.powers()(2) == 3.0);
    CHECK_FALSE(cfg.tied_M);

    const auto vec = parse_config(json::parse(R"({"L": 3, "K": 2, "distances": [7, 9]})"));
    CHECK(vec.distances == std::vector<std::vector<double>>{{7, 7, 7}, {9, 9, 9}});
    CHECK(std::isinf(parse_config(json::parse(R"({"C_F": "unlimited"})")).C_F));
}

TEST_CASE("parse_config - Round trip through to_json")
{
    const auto cfg = parse_config(json::parse(R"({"C_F": "inf", "N": 16, "M_hat": 8, "seed": 12})"));
    const auto back = parse_config(cfg.to_json());
    CHECK(back.to_json() == cfg.to_json());
    CHECK(std::isinf(back.C_F));
    CHECK(back.seed == 12);
}

TEST_CASE("parse_config - Violated invariants name the constraint")
{
    CHECK_THROWS_WITH(parse_config(json::parse(R"({"K": 64})")), ContainsSubstring("K < N required"));
    CHECK_THROWS_WITH(parse_config(json::parse(R"({"M_hat": 65})")), ContainsSubstring("M_hat <= N required"));
    CHECK_THROWS_WITH(parse_config(json::parse(R"({"distances": [1, 0, 3]})")),
                      ContainsSubstring("distances > 0 required"));
    CHECK_THROWS_WITH(parse_config(json::parse(R"({"eta": 1.5})")), ContainsSubstring("eta >= 2 required"));
    CHECK_THROWS_WITH(parse_config(json::parse(R"({"colour": 1})")), ContainsSubstring("unknown field 'colour'"));
    CHECK_THROWS_AS(parse_config(json::parse(R"({"C_F": "lots"})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"combiner": "max"})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"N": "many"})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"K": 4})")), ConfigError); // no default distances
    CHECK_THROWS_AS(parse_config(json::parse(R"({"p": [1, 1]})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse("[1, 2]")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"C_F": -5})")), std::invalid_argument);
}

TEST_CASE("apply_override - JSON values with a string fallback")
{
    json doc = json::object();
    apply_override(doc, "N=32");
    apply_override(doc, "M_hat=16");
    apply_override(doc, "C_F=inf");
    apply_override(doc, "combiner=equal");
    apply_override(doc, "distances=[5, 6, 7]");
    CHECK(doc["N"] == 32);
    CHECK(doc["C_F"] == "inf");
    CHECK(doc["combiner"] == "equal");
    const auto cfg = parse_config(doc);
    CHECK(cfg.N == 32);
    CHECK(cfg.distances[1][0] == 6.0);
    CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "=3"), ConfigError);
}

TEST_CASE("make_geometry - Drawn from the seed or imported")
{
    const auto cfg = parse_config(json::parse(R"({"N": 8, "M_hat": 4, "seed": 3})"));
    const auto g = make_geometry(cfg);
    CHECK(g.N == 8);
    CHECK(g.angles.size() == 3);
    CHECK(g.angles[0][0].size() == 32);

    json doc = json::parse(R"({"N": 8, "M_hat": 4})");
    doc["geometry"] = g.to_json();
    const auto imported = parse_config(doc);
    CHECK(make_geometry(imported).angles == g.angles);

    doc["N"] = 16;
    CHECK_THROWS_WITH(parse_config(doc), ContainsSubstring("geometry dimensions"));
    doc["N"] = 8;
    doc["geometry"]["angles"] = 3;
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
}
