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

#ifndef CRANHP_PRECODING_HPP
#define CRANHP_PRECODING_HPP

#include "cranhp/numerics.hpp"

#include <span>
#include <vector>

namespace cranhp
{

enum class Combining
{
    TraceWeighted, // sum_k R_k / Tr(R_k)
    Equal,         // sum_k R_k
};

const char *to_string(Combining c);

CMatrix combine_covariances(std::span<const CMatrix> covariances, Combining mode);

// Phase-normalized eigenvectors of the M largest eigenvalues, in descending order.
CMatrix analog_beamformer(const CMatrix &combined, int M);

// Leading M columns of a precomputed eigenbasis.
CMatrix analog_beamformer(const HermitianEigen &eig, int M);

// exp(j*angle(F)) / sqrt(N); zero entries get phase 0.
CMatrix unit_modulus_project(const CMatrix &F, int N);

// (G^H G + Nbar*beta*I)^-1 G^H, evaluated as G^H (G G^H + Nbar*beta*I)^-1.
CMatrix rzf_digital(const CMatrix &G, double beta, int Nbar);

// Per-RRH analog beamformers and their block-diagonal aggregate.
class AnalogBeamformer
{
public:
    AnalogBeamformer() = default;
    AnalogBeamformer(std::vector<CMatrix> per_rrh, bool constrained);

    int L() const { return static_cast<int>(blocks_.size()); }
    int N() const { return N_; }
    int Nbar() const { return N_ * L(); }
    int Mbar() const { return offsets_.back(); }
    int chains(int l) const { return static_cast<int>(blocks_.at(l).cols()); }
    std::vector<int> chain_counts() const;
    // first aggregate column belonging to RRH l
    int offset(int l) const { return offsets_.at(l); }
    bool constrained() const { return constrained_; }

    const CMatrix &block(int l) const { return blocks_.at(l); }
    const CMatrix &aggregate() const { return aggregate_; }

    // H * F_RF using the block structure; H is K x Nbar.
    CMatrix effective_channel(const CMatrix &H) const;

    // F_RF^H R F_RF for an aggregate Nbar x Nbar block-diagonal R given by its blocks.
    CMatrix effective_covariance(std::span<const CMatrix> blocks) const;

    AnalogBeamformer projected() const;

private:
    std::vector<CMatrix> blocks_;
    CMatrix aggregate_;
    std::vector<int> offsets_{0};
    int N_ = 0;
    bool constrained_ = false;
};

// Fully-digital stand-in: F_RF,l = I_N for every RRH.
AnalogBeamformer identity_beamformer(int N, int L);

// Selector matrices placing RRH blocks inside the aggregate dimensions.
struct ShapingMatrices
{
    CMatrix antenna;   // E_{Nbar,l}: Nbar x N
    CMatrix chain;     // E_{Mbar,l}: Mbar x M_l
};

ShapingMatrices shaping(int l, int N, std::span<const int> chains);

// E_m: M_l x M_l with a single one at diagonal position m (0-based).
RMatrix entry_selector(int m, int M_l);

// F_RF^H R_k F_RF.
CMatrix effective_Rk(const CMatrix &F_RF, const CMatrix &R_k);

} // namespace cranhp

#endif
