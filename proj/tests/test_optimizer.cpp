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

#include "cranhp/optimizer.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

using namespace cranhp;
using Catch::Matchers::WithinRel;

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Setup
{
    SystemConfig cfg;
    CovarianceSet cov;
    LinkBudget link;
};

Setup make_setup(int N = 32, int M_hat = 12, double C_F = 200.0)
{
    Setup s;
    s.cfg = test::figure_config(N, M_hat, C_F);
    s.cov = CovarianceSet(make_geometry(s.cfg));
    s.link = LinkBudget::from_config(s.cfg);
    return s;
}

} // namespace

TEST_CASE("ActivationSearchSpace - Tied candidates limited by capacity")
{
    const auto all = ActivationSearchSpace::enumerate(SearchMode::Tied, 48, 2, 200.0);
    REQUIRE(all.candidates.size() == 48);
    CHECK(all.candidates.front() == std::vector<int>{1, 1});
    CHECK(all.candidates.back() == std::vector<int>{48, 48});

    // floor(50 / 2M) >= 1 keeps M <= 25
    const auto capped = ActivationSearchSpace::enumerate(SearchMode::Tied, 48, 2, 50.0);
    CHECK(capped.candidates.size() == 25);
    CHECK(ActivationSearchSpace::enumerate(SearchMode::Tied, 8, 3, 1.0).candidates.empty());
    CHECK(ActivationSearchSpace::enumerate(SearchMode::Tied, 8, 2, kInf).candidates.size() == 8);
}

TEST_CASE("ActivationSearchSpace - Full grid order is total count then lexicographic")
{
    const auto space = ActivationSearchSpace::enumerate(SearchMode::FullGrid, 3, 2, 200.0);
    const std::vector<std::vector<int>> expected{{1, 1}, {1, 2}, {2, 1}, {1, 3}, {2, 2},
                                                 {3, 1}, {2, 3}, {3, 2}, {3, 3}};
    CHECK(space.candidates == expected);
    CHECK(ActivationSearchSpace::enumerate(SearchMode::FullGrid, 4, 3, 200.0).candidates.size() == 64);
    CHECK_THROWS_AS(ActivationSearchSpace::enumerate(SearchMode::FullGrid, 4, 4, 200.0), std::invalid_argument);
    CHECK_THROWS_AS(ActivationSearchSpace::enumerate(SearchMode::Tied, 0, 2, 200.0), std::invalid_argument);
}

TEST_CASE("ActivationOptimizer - Single candidate is returned as is")
{
    auto s = make_setup();
    ActivationOptimizer opt(s.cov, s.link, {});
    const auto sol = opt.select(200.0, 1);
    CHECK(sol.plan.chains == std::vector<int>{1, 1});
    CHECK(sol.plan.bits == std::vector<int>{100, 100});
    CHECK(sol.analog.constrained());
    CHECK(std::isfinite(sol.predicted_sum_rate));
}

TEST_CASE("ActivationOptimizer - Selection is the first maximum of the objective table")
{
    auto s = make_setup();
    for (auto mode : {SearchMode::Tied, SearchMode::FullGrid})
    {
        Step1Options opts;
        opts.mode = mode;
        ActivationOptimizer opt(s.cov, s.link, opts);
        const auto table = opt.objective_table(100.0, 8);
        const auto best = std::max_element(table.begin(), table.end(),
                                           [](const auto &a, const auto &b) { return a.second < b.second; });
        const auto sol = opt.select(100.0, 8);
        CHECK(sol.plan.chains == best->first);
        CHECK(sol.predicted_sum_rate == best->second);
        for (const auto &[chains, value] : table)
            CHECK(value <= sol.predicted_sum_rate);

        const auto again = opt.select(100.0, 8);
        CHECK(again.plan.chains == sol.plan.chains);
        CHECK(again.predicted_sum_rate == sol.predicted_sum_rate);
    }
}

TEST_CASE("ActivationOptimizer - Full grid contains the tied optimum")
{
    auto s = make_setup();
    Step1Options tied, grid;
    grid.mode = SearchMode::FullGrid;
    const auto a = ActivationOptimizer(s.cov, s.link, tied).select(120.0, 6);
    const auto b = ActivationOptimizer(s.cov, s.link, grid).select(120.0, 6);
    CHECK(b.predicted_sum_rate >= a.predicted_sum_rate);
}

TEST_CASE("ActivationOptimizer - Unlimited fronthaul activates every chain")
{
    auto s = make_setup(64, 16, kInf);
    Step1Options opts;
    opts.deploy_projected = false;
    ActivationOptimizer opt(s.cov, s.link, opts);
    const auto sol = opt.select(kInf, 16);
    CHECK(sol.plan.chains == std::vector<int>{16, 16});
    CHECK(sol.plan.unlimited());
}

TEST_CASE("ActivationOptimizer - Optimum is nondecreasing in capacity")
{
    auto s = make_setup();
    ActivationOptimizer opt(s.cov, s.link, {});
    double previous = -1.0;
    for (double C = 20.0; C <= 400.0; C += 20.0)
    {
        const double value = opt.select(C, 12).predicted_sum_rate;
        CHECK(value >= previous);
        previous = value;
    }
}

TEST_CASE("ActivationOptimizer - Infeasible capacity")
{
    auto s = make_setup();
    ActivationOptimizer opt(s.cov, s.link, {});
    CHECK_THROWS_AS(opt.select(1.0, 12), InfeasiblePlan);
    CHECK_THROWS_AS(opt.evaluate({30, 30}, 50.0), InfeasiblePlan);
}

TEST_CASE("ActivationOptimizer - Objective table does not depend on the thread count")
{
    auto s = make_setup();
    Step1Options one, three;
    one.mode = three.mode = SearchMode::FullGrid;
    three.threads = 3;
    const auto a = ActivationOptimizer(s.cov, s.link, one).objective_table(150.0, 6);
    const auto b = ActivationOptimizer(s.cov, s.link, three).objective_table(150.0, 6);
    CHECK(a == b);
}

TEST_CASE("step1_select - Takes the search mode and combiner from the configuration")
{
    auto s = make_setup(32, 6, 100.0);
    s.cfg.tied_M = false;
    s.cfg.combiner = Combining::Equal;
    const auto sol = step1_select(s.cov, s.cfg);
    Step1Options opts;
    opts.mode = SearchMode::FullGrid;
    opts.combining = Combining::Equal;
    const auto ref = ActivationOptimizer(s.cov, s.link, opts).select(100.0, 6);
    CHECK(sol.plan.chains == ref.plan.chains);
    CHECK(sol.predicted_sum_rate == ref.predicted_sum_rate);
}

TEST_CASE("step2_alpha - Busiest RRH meets the budget")
{
    auto s = make_setup();
    ActivationOptimizer opt(s.cov, s.link, {});
    const auto sol = opt.evaluate({4, 4}, 80.0);
    const auto ch = sample_channel(s.cov, 3, 0);
    const auto st = step2_alpha(sol, ch.H, s.link);

    CHECK(st.G.cols() == 8);
    CHECK_THAT(st.alpha.rrh_power.maxCoeff(), WithinRel(s.link.P_tot, 1e-12));
    // D = 10 bits on both RRHs
    const RVector row_power = st.F_BB.cwiseAbs2() * s.link.p;
    CHECK((st.Qhat.diagonal - 3.0 * std::pow(2.0, -20.0) * row_power).norm() < 1e-12 * st.Qhat.diagonal.norm());
    CHECK_THROWS_AS(step2_alpha(sol.analog, make_plan(80.0, {4, 3}), ch.H, s.link), std::invalid_argument);
}

TEST_CASE("effective_covariances - Blocks use the per-RRH beamformers")
{
    auto s = make_setup(8, 3);
    const BeamformerBank bank(s.cov, Combining::TraceWeighted);
    const std::vector<int> chains{2, 3};
    const auto analog = bank.build(chains, true);
    const auto Rhat = effective_covariances(s.cov, analog);
    REQUIRE(Rhat.size() == 3);
    for (int k = 0; k < 3; ++k)
        CHECK(relative_frobenius_error(Rhat[k], effective_Rk(analog.aggregate(), s.cov.aggregate(k))) < 1e-12);
    CHECK_THROWS_AS(bank.build(std::vector<int>{9, 1}, true), std::invalid_argument);
}
