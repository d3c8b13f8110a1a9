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

#ifndef CRANHP_EVALUATE_HPP
#define CRANHP_EVALUATE_HPP

#include "cranhp/channel.hpp"
#include "cranhp/fronthaul.hpp"
#include "cranhp/numerics.hpp"
#include "cranhp/optimizer.hpp"
#include "cranhp/precoding.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cranhp
{

struct TrialResult
{
    RVector sinr;
    double sum_rate = 0.0;
    double alpha = 0.0;
    int l_hat = 0;
    std::uint64_t trial = 0;
};

// SINR_k = p_k |g_k^T f_k|^2 / (sum_{i!=k} p_i |g_k^T f_i|^2 + sum_g |G_kg|^2 Q_g + sigma2)
// with G = H F_RF, F the scaled digital precoder and Q the unnormalized (alpha^2 Q^)
// quantization noise diagonal.
RVector instantaneous_sinr(const CMatrix &H, const CMatrix &F_RF, const CMatrix &F_BB_scaled, const RVector &Q,
                           const RVector &p, double sigma2);

// Same with the effective channel already formed.
RVector instantaneous_sinr_effective(const CMatrix &G, const CMatrix &F_BB_scaled, const RVector &Q, const RVector &p,
                                     double sigma2);

// Design step 2 (RZF and power scaling) on one realization followed by the instantaneous SINR.
TrialResult hybrid_trial(const AnalogBeamformer &analog, const FronthaulPlan &plan, const CMatrix &H,
                         const LinkBudget &link);

// F_RF = I, unlimited fronthaul, per-RRH power constraint kept through alpha.
TrialResult full_digital_rzf_baseline(const CMatrix &H, int N, int L, double beta, double P_tot, double sigma2,
                                      const RVector &p);

// A hybrid configuration evaluated by Monte Carlo.
struct Method
{
    std::string label;
    AnalogBeamformer analog;
    FronthaulPlan plan;

    static Method full_digital(int N, int L);
};

struct SweepPoint
{
    std::string method;
    double mean = 0.0;
    double std = 0.0;
    double ci = 0.0; // 95% halfwidth, 1.96 std / sqrt(trials)
    int trials = 0;
};

struct MonteCarloResult
{
    std::vector<SweepPoint> points; // one per method
    RMatrix sum_rates;              // trials x methods, paired draws
};

SweepPoint summarize(const std::string &label, std::span<const double> samples);

// Every method sees the same channel draw per trial index. Aggregation runs in trial
// order, so the result does not depend on the thread count.
MonteCarloResult monte_carlo(const CovarianceSet &cov, std::span<const Method> methods, const LinkBudget &link,
                             int n_trials, std::uint64_t seed, int threads = 1);

} // namespace cranhp

#endif
