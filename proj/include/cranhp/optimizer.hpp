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

#ifndef CRANHP_OPTIMIZER_HPP
#define CRANHP_OPTIMIZER_HPP

#include "cranhp/channel.hpp"
#include "cranhp/config.hpp"
#include "cranhp/detequiv.hpp"
#include "cranhp/fronthaul.hpp"
#include "cranhp/precoding.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace cranhp
{

// Linear-scale link parameters shared by the optimizer and the evaluator.
struct LinkBudget
{
    double P_tot = 0.0;  // mW
    double sigma2 = 0.0; // mW
    double beta = 0.0;
    RVector p;

    double rho() const { return P_tot / sigma2; }

    static LinkBudget from_config(const SystemConfig &cfg);
};

enum class SearchMode
{
    Tied,     // M_l = M for every RRH
    FullGrid, // every tuple in [1, M_hat]^L, L <= 3
};

// Which beamformer the large-scale objective is evaluated on during the search.
enum class ObjectiveOrder
{
    Projected,     // unit-modulus beamformer that is actually deployed
    Unconstrained, // eigenvector beamformer, projected only after the argmax
};

inline constexpr int kMaxFullGridRrhs = 3;

// Fronthaul-feasible RF chain tuples, ordered by total chain count and then
// lexicographically so that the first maximum is the preferred tie-break.
struct ActivationSearchSpace
{
    SearchMode mode = SearchMode::Tied;
    int M_hat = 0;
    int L = 0;
    std::vector<std::vector<int>> candidates;

    static ActivationSearchSpace enumerate(SearchMode mode, int M_hat, int L, double capacity);
};

struct PrecodingSolution
{
    FronthaulPlan plan;
    AnalogBeamformer analog; // deployed (unit-modulus unless disabled)
    RVector sinr_bar;
    double predicted_sum_rate = 0.0;
};

struct Step1Options
{
    SearchMode mode = SearchMode::Tied;
    Combining combining = Combining::TraceWeighted;
    ObjectiveOrder order = ObjectiveOrder::Projected;
    bool deploy_projected = true; // false keeps the unconstrained beamformer (reference curves)
    FixedPointOptions fixed_point;
    int threads = 1;
};

// Per-RRH eigenbases of the combined covariances, computed once per geometry.
class BeamformerBank
{
public:
    BeamformerBank(const CovarianceSet &cov, Combining combining);

    int L() const { return static_cast<int>(eig_.size()); }
    int N() const { return N_; }
    AnalogBeamformer build(std::span<const int> chains, bool projected) const;

private:
    std::vector<HermitianEigen> eig_;
    int N_ = 0;
};

// Activation search (design step 1) with the capacity-independent part of every candidate cached,
// so sweeps over C_F only redo the quantization bookkeeping.
class ActivationOptimizer
{
public:
    ActivationOptimizer(const CovarianceSet &cov, LinkBudget link, Step1Options opts);

    const Step1Options &options() const { return opts_; }

    // Large-scale sum-rate maximizer over the feasible search space. Throws
    // InfeasiblePlan when no candidate fits the capacity.
    PrecodingSolution select(double capacity, int M_hat);

    // Solution at a fixed chain tuple.
    PrecodingSolution evaluate(const std::vector<int> &chains, double capacity);

    // Large-scale objective of every feasible candidate, in search-space order.
    std::vector<std::pair<std::vector<int>, double>> objective_table(double capacity, int M_hat);

private:
    struct Entry
    {
        AnalogBeamformer deployed;
        LargeScaleTerms terms;
    };

    const Entry &entry(const std::vector<int> &chains);
    void prefetch(const std::vector<std::vector<int>> &candidates);
    Entry build_entry(const std::vector<int> &chains) const;
    PrecodingSolution solution(const Entry &entry, const FronthaulPlan &plan) const;

    const CovarianceSet *cov_;
    LinkBudget link_;
    Step1Options opts_;
    BeamformerBank bank_;
    std::map<std::vector<int>, std::unique_ptr<Entry>> cache_;
    std::mutex mutex_;
};

// Effective covariances R^_k = F_RF^H R_k F_RF of every UE.
std::vector<CMatrix> effective_covariances(const CovarianceSet &cov, const AnalogBeamformer &analog);

// Step 1 for a parsed configuration: search mode, combiner and C_F come from cfg.
PrecodingSolution step1_select(const CovarianceSet &cov, const SystemConfig &cfg, Step1Options opts = {});

struct Step2Result
{
    CMatrix G;    // H F_RF
    CMatrix F_BB; // unscaled RZF precoder
    QuantizationCovariance Qhat;
    PsiTerms psi;
    AlphaResult alpha;
};

Step2Result step2_alpha(const AnalogBeamformer &analog, const FronthaulPlan &plan, const CMatrix &H,
                        const LinkBudget &link);

inline Step2Result step2_alpha(const PrecodingSolution &solution, const CMatrix &H, const LinkBudget &link)
{
    return step2_alpha(solution.analog, solution.plan, H, link);
}

} // namespace cranhp

#endif
