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

#ifndef CRANHP_TESTS_SUPPORT_HPP
#define CRANHP_TESTS_SUPPORT_HPP

#include "cranhp/config.hpp"
#include "cranhp/numerics.hpp"
#include "cranhp/rng.hpp"

#include <cstdint>
#include <vector>

namespace cranhp::test
{

inline RandomStream stream(std::uint64_t id, std::uint64_t seed = 7)
{
    return RandomStream({seed, StreamTag::TestData, id});
}

inline CMatrix random_matrix(RandomStream &rng, int rows, int cols)
{
    CMatrix A(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            A(i, j) = rng.complex_normal();
    return A;
}

inline CMatrix random_psd(RandomStream &rng, int n, int rank)
{
    const CMatrix X = random_matrix(rng, n, rank);
    return X * X.adjoint() / static_cast<double>(rank);
}

inline std::vector<CMatrix> random_psd_set(RandomStream &rng, int K, int n, int rank)
{
    std::vector<CMatrix> out;
    for (int k = 0; k < K; ++k)
        out.push_back(random_psd(rng, n, rank));
    return out;
}

// fig3-fig7 geometry: UEs at 1000, 500 and 100 m from both RRHs.
inline SystemConfig figure_config(int N = 64, int M_hat = 48, double C_F = 200.0)
{
    SystemConfig cfg;
    cfg.N = N;
    cfg.K = 3;
    cfg.L = 2;
    cfg.M_hat = M_hat;
    cfg.C_F = C_F;
    cfg.distances = {{1000.0, 1000.0}, {500.0, 500.0}, {100.0, 100.0}};
    return cfg;
}

} // namespace cranhp::test

#endif
