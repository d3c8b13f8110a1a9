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

#include "cranhp/fronthaul.hpp"

#include <cmath>
#include <string>

namespace cranhp
{

std::optional<int> optimal_bits(double capacity, int chains)
{
    if (chains < 1)
        throw std::invalid_argument("optimal_bits: number of RF chains must be positive");
    if (!(capacity > 0.0))
        throw std::invalid_argument("optimal_bits: fronthaul capacity must be positive");
    if (std::isinf(capacity))
        return kUnlimitedBits;
    const double bits = std::floor(capacity / (2.0 * chains));
    if (bits < 1.0)
        return std::nullopt;
    if (bits >= static_cast<double>(kUnlimitedBits))
        return kUnlimitedBits;
    return static_cast<int>(bits);
}

double quantization_factor(int bits)
{
    if (bits == kUnlimitedBits)
        return 0.0;
    if (bits < 1)
        throw InfeasiblePlan("quantization_factor: at least one bit is required");
    return 3.0 * std::ldexp(1.0, -2 * std::min(bits, 1 << 20));
}

int FronthaulPlan::Mbar() const
{
    int total = 0;
    for (int m : chains)
        total += m;
    return total;
}

FronthaulPlan make_plan(double capacity, std::vector<int> chains)
{
    if (chains.empty())
        throw std::invalid_argument("make_plan: need at least one RRH");
    FronthaulPlan plan;
    plan.capacity = capacity;
    plan.chains = std::move(chains);
    for (int m : plan.chains)
    {
        const auto bits = optimal_bits(capacity, m);
        if (!bits)
            throw InfeasiblePlan("make_plan: " + std::to_string(m) + " RF chains leave no quantization bits at C_F=" +
                                 std::to_string(capacity));
        plan.bits.push_back(*bits);
    }
    return plan;
}

double QuantizationCovariance::trace(int l) const
{
    return diagonal.segment(offsets.at(l), offsets.at(l + 1) - offsets.at(l)).sum();
}

RVector QuantizationCovariance::block(int l) const
{
    return diagonal.segment(offsets.at(l), offsets.at(l + 1) - offsets.at(l));
}

QuantizationCovariance quant_noise(const CMatrix &F_BB, const RVector &p, const FronthaulPlan &plan)
{
    if (F_BB.rows() != plan.Mbar())
        throw std::invalid_argument("quant_noise: F_BB rows must match the plan's aggregate RF chains");
    if (F_BB.cols() != p.size())
        throw std::invalid_argument("quant_noise: one power per UE required");

    QuantizationCovariance Q;
    Q.diagonal.resize(plan.Mbar());
    Q.offsets.push_back(0);
    // per-row signal power sum_k p_k |f|^2
    const RVector row_power = F_BB.cwiseAbs2() * p;
    for (int l = 0; l < plan.L(); ++l)
    {
        const double factor = quantization_factor(plan.bits[l]);
        const int start = Q.offsets.back();
        Q.diagonal.segment(start, plan.chains[l]) = factor * row_power.segment(start, plan.chains[l]);
        Q.offsets.push_back(start + plan.chains[l]);
    }
    return Q;
}

PsiTerms instantaneous_psis(const CMatrix &G, const AnalogBeamformer &analog, const CMatrix &F_BB, const RVector &p,
                            const QuantizationCovariance &Qhat)
{
    const auto K = G.rows();
    if (G.cols() != analog.Mbar() || F_BB.rows() != analog.Mbar() || F_BB.cols() != K || p.size() != K ||
        Qhat.diagonal.size() != analog.Mbar())
        throw std::invalid_argument("instantaneous_psis: dimension mismatch");

    PsiTerms psi;
    psi.psi1.resize(analog.L());
    for (int l = 0; l < analog.L(); ++l)
    {
        // f^H B_RF,l f with B_RF,l = E F_l^H F_l E^H
        const CMatrix x = analog.block(l) * F_BB.middleRows(analog.offset(l), analog.chains(l));
        psi.psi1(l) = (x.colwise().squaredNorm().transpose().array() * p.array()).sum();
    }

    // (G F_BB)_{ik} = h~_i^H C^-1 h~_k
    const CMatrix GF = G * F_BB;
    psi.psi2 = G.cwiseAbs2() * Qhat.diagonal;
    psi.psi3.resize(K);
    psi.psi4.resize(K);
    for (Eigen::Index k = 0; k < K; ++k)
    {
        psi.psi4(k) = GF(k, k).real();
        double interference = 0.0;
        for (Eigen::Index i = 0; i < K; ++i)
            if (i != k)
                interference += p(i) * std::norm(GF(i, k));
        psi.psi3(k) = interference;
    }
    return psi;
}

AlphaResult alpha_star(const PsiTerms &psi, const QuantizationCovariance &Qhat, double P_tot)
{
    const int L = static_cast<int>(psi.psi1.size());
    if (Qhat.L() != L)
        throw std::invalid_argument("alpha_star: Psi1 and Q^ disagree on the number of RRHs");
    if (!(P_tot > 0.0))
        throw std::invalid_argument("alpha_star: power budget must be positive");

    RVector load(L);
    int l_hat = 0;
    for (int l = 0; l < L; ++l)
    {
        load(l) = psi.psi1(l) + Qhat.trace(l);
        if (load(l) > load(l_hat))
            l_hat = l;
    }
    if (!(load(l_hat) > 0.0) || !std::isfinite(load(l_hat)))
        throw NumericError("alpha_star: every RRH carries zero power");

    AlphaResult out;
    out.l_hat = l_hat;
    out.alpha = std::sqrt(P_tot / load(l_hat));
    out.rrh_power = out.alpha * out.alpha * load;
    return out;
}

} // namespace cranhp
