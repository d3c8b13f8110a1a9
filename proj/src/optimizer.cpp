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

#include "cranhp/optimizer.hpp"
#include "cranhp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cranhp
{

LinkBudget LinkBudget::from_config(const SystemConfig &cfg)
{
    LinkBudget link;
    link.P_tot = cfg.P_tot();
    link.sigma2 = cfg.sigma2();
    link.beta = cfg.beta();
    link.p = cfg.powers();
    return link;
}

ActivationSearchSpace ActivationSearchSpace::enumerate(SearchMode mode, int M_hat, int L, double capacity)
{
    if (M_hat < 1 || L < 1)
        throw std::invalid_argument("ActivationSearchSpace: M_hat and L must be positive");
    if (mode == SearchMode::FullGrid && L > kMaxFullGridRrhs)
        throw std::invalid_argument("ActivationSearchSpace: full grid is limited to L <= 3");

    ActivationSearchSpace space;
    space.mode = mode;
    space.M_hat = M_hat;
    space.L = L;

    auto feasible = [&](int M) { return optimal_bits(capacity, M).has_value(); };

    if (mode == SearchMode::Tied)
    {
        for (int M = 1; M <= M_hat; ++M)
            if (feasible(M))
                space.candidates.emplace_back(L, M);
        return space;
    }

    std::vector<int> allowed;
    for (int M = 1; M <= M_hat; ++M)
        if (feasible(M))
            allowed.push_back(M);
    if (allowed.empty())
        return space;

    std::vector<std::size_t> idx(L, 0);
    for (;;)
    {
        std::vector<int> tuple(L);
        for (int l = 0; l < L; ++l)
            tuple[l] = allowed[idx[l]];
        space.candidates.push_back(std::move(tuple));
        int l = L - 1;
        while (l >= 0 && ++idx[l] == allowed.size())
            idx[l--] = 0;
        if (l < 0)
            break;
    }
    std::stable_sort(space.candidates.begin(), space.candidates.end(), [](const auto &a, const auto &b) {
        int sa = 0, sb = 0;
        for (int x : a)
            sa += x;
        for (int x : b)
            sb += x;
        if (sa != sb)
            return sa < sb;
        return a < b;
    });
    return space;
}

BeamformerBank::BeamformerBank(const CovarianceSet &cov, Combining combining) : N_(cov.N())
{
    eig_.reserve(cov.L());
    for (int l = 0; l < cov.L(); ++l)
    {
        const auto R = cov.per_rrh(l);
        eig_.push_back(hermitian_eig(combine_covariances(R, combining)));
    }
}

AnalogBeamformer BeamformerBank::build(std::span<const int> chains, bool projected) const
{
    if (static_cast<int>(chains.size()) != L())
        throw std::invalid_argument("BeamformerBank: one chain count per RRH required");
    std::vector<CMatrix> blocks;
    blocks.reserve(chains.size());
    for (int l = 0; l < L(); ++l)
    {
        if (chains[l] < 1 || chains[l] > N_)
            throw std::invalid_argument("BeamformerBank: chain count outside [1, N]");
        CMatrix F = analog_beamformer(eig_[l], chains[l]);
        blocks.push_back(projected ? unit_modulus_project(F, N_) : std::move(F));
    }
    return AnalogBeamformer(std::move(blocks), projected);
}

std::vector<CMatrix> effective_covariances(const CovarianceSet &cov, const AnalogBeamformer &analog)
{
    std::vector<CMatrix> out;
    out.reserve(cov.K());
    std::vector<CMatrix> blocks(cov.L());
    for (int k = 0; k < cov.K(); ++k)
    {
        for (int l = 0; l < cov.L(); ++l)
            blocks[l] = cov.R(k, l);
        out.push_back(analog.effective_covariance(blocks));
    }
    return out;
}

ActivationOptimizer::ActivationOptimizer(const CovarianceSet &cov, LinkBudget link, Step1Options opts)
    : cov_(&cov), link_(std::move(link)), opts_(opts), bank_(cov, opts.combining)
{
    if (link_.p.size() != cov.K())
        throw std::invalid_argument("ActivationOptimizer: one power per UE required");
}

ActivationOptimizer::Entry ActivationOptimizer::build_entry(const std::vector<int> &chains) const
{
    const bool eval_projected = opts_.order == ObjectiveOrder::Projected && opts_.deploy_projected;
    Entry entry;
    entry.deployed = bank_.build(chains, opts_.deploy_projected);
    const AnalogBeamformer evaluated =
        eval_projected == opts_.deploy_projected ? entry.deployed : bank_.build(chains, eval_projected);

    const DetEquivState state(effective_covariances(*cov_, evaluated), link_.beta, cov_->Nbar(), 1.0 / link_.rho(),
                              opts_.fixed_point);
    entry.terms = large_scale_terms(state, evaluated, link_.p);
    return entry;
}

void ActivationOptimizer::prefetch(const std::vector<std::vector<int>> &candidates)
{
    std::vector<std::vector<int>> missing;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        for (const auto &c : candidates)
            if (!cache_.count(c))
                missing.push_back(c);
    }
    std::vector<std::unique_ptr<Entry>> built(missing.size());
    parallel_for(static_cast<int>(missing.size()), opts_.threads,
                 [&](int i) { built[i] = std::make_unique<Entry>(build_entry(missing[i])); });
    std::lock_guard<std::mutex> lock(mutex_);
    for (std::size_t i = 0; i < missing.size(); ++i)
        cache_.emplace(missing[i], std::move(built[i]));
}

const ActivationOptimizer::Entry &ActivationOptimizer::entry(const std::vector<int> &chains)
{
    prefetch({chains});
    std::lock_guard<std::mutex> lock(mutex_);
    return *cache_.at(chains);
}

PrecodingSolution ActivationOptimizer::solution(const Entry &entry, const FronthaulPlan &plan) const
{
    PrecodingSolution out;
    out.plan = plan;
    out.analog = entry.deployed;
    const DeterministicPsis psi = deterministic_psis(entry.terms, plan);
    out.sinr_bar = large_scale_sinr(psi, link_.p, link_.rho());
    out.predicted_sum_rate = sum_rate(out.sinr_bar);
    return out;
}

PrecodingSolution ActivationOptimizer::evaluate(const std::vector<int> &chains, double capacity)
{
    const FronthaulPlan plan = make_plan(capacity, chains);
    return solution(entry(chains), plan);
}

std::vector<std::pair<std::vector<int>, double>> ActivationOptimizer::objective_table(double capacity, int M_hat)
{
    const auto space = ActivationSearchSpace::enumerate(opts_.mode, M_hat, cov_->L(), capacity);
    prefetch(space.candidates);
    std::vector<std::pair<std::vector<int>, double>> out;
    out.reserve(space.candidates.size());
    for (const auto &c : space.candidates)
        out.emplace_back(c, evaluate(c, capacity).predicted_sum_rate);
    return out;
}

PrecodingSolution ActivationOptimizer::select(double capacity, int M_hat)
{
    const auto table = objective_table(capacity, M_hat);
    if (table.empty())
        throw InfeasiblePlan("step1: no RF chain tuple fits the fronthaul capacity");

    // strict improvement only: the search space is already in tie-break order
    std::size_t best = 0;
    for (std::size_t i = 1; i < table.size(); ++i)
        if (table[i].second > table[best].second)
            best = i;
    return evaluate(table[best].first, capacity);
}

PrecodingSolution step1_select(const CovarianceSet &cov, const SystemConfig &cfg, Step1Options opts)
{
    opts.mode = cfg.tied_M ? SearchMode::Tied : SearchMode::FullGrid;
    opts.combining = cfg.combiner;
    ActivationOptimizer optimizer(cov, LinkBudget::from_config(cfg), opts);
    return optimizer.select(cfg.C_F, cfg.M_hat);
}

Step2Result step2_alpha(const AnalogBeamformer &analog, const FronthaulPlan &plan, const CMatrix &H,
                        const LinkBudget &link)
{
    if (plan.chains != analog.chain_counts())
        throw std::invalid_argument("step2: plan does not match the analog beamformer");
    Step2Result out;
    out.G = analog.effective_channel(H);
    out.F_BB = rzf_digital(out.G, link.beta, analog.Nbar());
    out.Qhat = quant_noise(out.F_BB, link.p, plan);
    out.psi = instantaneous_psis(out.G, analog, out.F_BB, link.p, out.Qhat);
    out.alpha = alpha_star(out.psi, out.Qhat, link.P_tot);
    return out;
}

} // namespace cranhp
