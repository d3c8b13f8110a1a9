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

#include "cranhp/fronthaul.hpp"
#include "support.hpp"

#include <cmath>
#include <limits>

using namespace cranhp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Fixture
{
    AnalogBeamformer analog;
    CMatrix H, G, F_BB;
    RVector p;
};

Fixture make_fixture(std::uint64_t id, std::vector<int> chains, int N = 6, int K = 3)
{
    auto rng = test::stream(id);
    std::vector<CMatrix> blocks;
    for (int m : chains)
        blocks.push_back(test::random_matrix(rng, N, m));
    Fixture f;
    f.analog = AnalogBeamformer(std::move(blocks), false);
    f.H = test::random_matrix(rng, K, f.analog.Nbar());
    f.G = f.analog.effective_channel(f.H);
    f.F_BB = rzf_digital(f.G, 0.05, f.analog.Nbar());
    f.p = RVector::Ones(K);
    f.p(0) = 0.5;
    return f;
}

} // namespace

TEST_CASE("optimal_bits - Floor of capacity over twice the chain count")
{
    CHECK(optimal_bits(200.0, 5) == 20);
    CHECK(optimal_bits(200.0, 48) == 2);
    CHECK(optimal_bits(199.0, 10) == 9);
    CHECK(optimal_bits(2.0, 1) == 1);
    CHECK_FALSE(optimal_bits(1.9, 1).has_value());
    CHECK_FALSE(optimal_bits(50.0, 26).has_value());
    CHECK(optimal_bits(kInf, 7) == kUnlimitedBits);
    CHECK_THROWS_AS(optimal_bits(100.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(optimal_bits(0.0, 1), std::invalid_argument);
}

TEST_CASE("optimal_bits - Uses the full budget without exceeding it")
{
    for (int C = 2; C <= 400; C += 7)
        for (int M = 1; M <= 64; ++M)
        {
            const auto D = optimal_bits(C, M);
            if (!D)
            {
                CHECK(2 * M > C);
                continue;
            }
            CHECK(2 * M * *D <= C);
            CHECK(2 * M * (*D + 1) > C);
        }
}

TEST_CASE("quantization_factor - Three times four to the minus D")
{
    CHECK_THAT(quantization_factor(1), WithinRel(0.75, 1e-15));
    CHECK_THAT(quantization_factor(4), WithinRel(3.0 / 256.0, 1e-15));
    CHECK(quantization_factor(kUnlimitedBits) == 0.0);
    CHECK_THROWS_AS(quantization_factor(0), InfeasiblePlan);
    for (int D = 1; D < 30; ++D)
        CHECK_THAT(quantization_factor(D + 1) / quantization_factor(D), WithinRel(0.25, 1e-15));
}

TEST_CASE("make_plan - Per-RRH bits and infeasibility")
{
    const auto plan = make_plan(200.0, {5, 20});
    CHECK(plan.bits == std::vector<int>{20, 5});
    CHECK(plan.Mbar() == 25);
    CHECK_FALSE(plan.unlimited());
    CHECK(make_plan(kInf, {3}).unlimited());
    CHECK_THROWS_AS(make_plan(50.0, {10, 26}), InfeasiblePlan);
    CHECK_THROWS_AS(make_plan(50.0, {}), std::invalid_argument);
}

TEST_CASE("quant_noise - Matches an explicit loop over UEs")
{
    const auto f = make_fixture(30, {2, 3});
    const auto plan = make_plan(20.0, {2, 3});
    const auto Q = quant_noise(f.F_BB, f.p, plan);
    REQUIRE(Q.L() == 2);
    for (int l = 0; l < 2; ++l)
    {
        const double factor = 3.0 * std::pow(2.0, -2.0 * plan.bits[l]);
        double block_trace = 0.0;
        for (int m = 0; m < plan.chains[l]; ++m)
        {
            const int row = f.analog.offset(l) + m;
            double w2 = 0.0;
            for (int k = 0; k < 3; ++k)
                w2 += f.p(k) * std::norm(f.F_BB(row, k));
            w2 *= factor;
            CHECK_THAT(Q.diagonal(row), WithinRel(w2, 1e-13));
            block_trace += w2;
        }
        CHECK_THAT(Q.trace(l), WithinRel(block_trace, 1e-13));
        CHECK(Q.block(l).size() == plan.chains[l]);
    }
    const auto unlimited = quant_noise(f.F_BB, f.p, make_plan(kInf, {2, 3}));
    CHECK(unlimited.diagonal.isZero(0.0));
    CHECK_THROWS_AS(quant_noise(f.F_BB, f.p, make_plan(20.0, {2, 2})), std::invalid_argument);
}

TEST_CASE("instantaneous_psis - Terms agree with the selector-matrix expressions")
{
    const auto f = make_fixture(31, {2, 3});
    const std::vector<int> chains{2, 3};
    const auto plan = make_plan(30.0, chains);
    const auto Q = quant_noise(f.F_BB, f.p, plan);
    const auto psi = instantaneous_psis(f.G, f.analog, f.F_BB, f.p, Q);

    for (int l = 0; l < 2; ++l)
    {
        const auto s = shaping(l, f.analog.N(), chains);
        const CMatrix F_l = s.antenna.adjoint() * f.analog.aggregate() * s.chain;
        const CMatrix B = s.chain * F_l.adjoint() * F_l * s.chain.adjoint();
        double oracle = 0.0;
        for (int k = 0; k < 3; ++k)
            oracle += f.p(k) * (f.F_BB.col(k).adjoint() * B * f.F_BB.col(k))(0, 0).real();
        CHECK_THAT(psi.psi1(l), WithinRel(oracle, 1e-12));
    }

    const CMatrix F_RF = f.analog.aggregate();
    const CMatrix Qmat = Q.diagonal.cast<cdouble>().asDiagonal();
    const CMatrix Cinv = (f.G.adjoint() * f.G + f.analog.Nbar() * 0.05 * CMatrix::Identity(5, 5)).inverse();
    for (int k = 0; k < 3; ++k)
    {
        const CVector hk = f.H.row(k).adjoint();
        const cdouble psi2 = (hk.adjoint() * F_RF * Qmat * F_RF.adjoint() * hk)(0, 0);
        CHECK_THAT(psi.psi2(k), WithinRel(psi2.real(), 1e-12));

        double psi3 = 0.0;
        for (int i = 0; i < 3; ++i)
            if (i != k)
            {
                const CVector hi = f.H.row(i).adjoint();
                psi3 += f.p(i) * std::norm((hk.adjoint() * F_RF * Cinv * F_RF.adjoint() * hi)(0, 0));
            }
        CHECK_THAT(psi.psi3(k), WithinRel(psi3, 1e-10));

        const cdouble psi4 = (hk.adjoint() * F_RF * Cinv * F_RF.adjoint() * hk)(0, 0);
        CHECK_THAT(psi.psi4(k), WithinRel(psi4.real(), 1e-10));
    }
}

TEST_CASE("alpha_star - Scaled precoder meets the budget at the busiest RRH")
{
    const auto f = make_fixture(32, {3, 2});
    const auto Q = quant_noise(f.F_BB, f.p, make_plan(12.0, {3, 2}));
    const auto psi = instantaneous_psis(f.G, f.analog, f.F_BB, f.p, Q);
    const double P = 1000.0;
    const auto a = alpha_star(psi, Q, P);

    CHECK_THAT(a.rrh_power.maxCoeff(), WithinRel(P, 1e-12));
    CHECK_THAT(a.rrh_power(a.l_hat), WithinRel(P, 1e-12));
    for (int l = 0; l < 2; ++l)
        CHECK(a.rrh_power(l) <= P * (1.0 + 1e-12));
    CHECK_THAT(a.alpha * a.alpha, WithinRel(P / (psi.psi1(a.l_hat) + Q.trace(a.l_hat)), 1e-13));
}

TEST_CASE("alpha_star - Single RRH without quantization noise")
{
    const auto f = make_fixture(33, {4});
    const auto Q = quant_noise(f.F_BB, f.p, make_plan(kInf, {4}));
    const auto psi = instantaneous_psis(f.G, f.analog, f.F_BB, f.p, Q);
    const auto a = alpha_star(psi, Q, 2.0);
    CHECK(a.l_hat == 0);
    CHECK_THAT(a.alpha * a.alpha, WithinRel(2.0 / psi.psi1(0), 1e-14));
    CHECK(psi.psi2.isZero(0.0));
    CHECK_THROWS_AS(alpha_star(psi, Q, 0.0), std::invalid_argument);
}
