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

#ifndef CRANHP_FRONTHAUL_HPP
#define CRANHP_FRONTHAUL_HPP

#include "cranhp/numerics.hpp"
#include "cranhp/precoding.hpp"

#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace cranhp
{

class InfeasiblePlan : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Bits per real dimension used when the fronthaul capacity is unlimited.
inline constexpr int kUnlimitedBits = std::numeric_limits<int>::max();

// floor(C_F / (2 M)); nullopt when that leaves no bits. Infinite C_F yields kUnlimitedBits.
std::optional<int> optimal_bits(double capacity, int chains);

// 3 * 2^(-2D), or 0 for kUnlimitedBits.
double quantization_factor(int bits);

// Capacity C_F is in bits per complex channel use per fronthaul link.
struct FronthaulPlan
{
    double capacity = 0.0;
    std::vector<int> chains; // M_l
    std::vector<int> bits;   // D_l

    int L() const { return static_cast<int>(chains.size()); }
    int Mbar() const;
    bool unlimited() const { return capacity == std::numeric_limits<double>::infinity(); }
};

// Plan with D_l = floor(C_F / (2 M_l)). Throws InfeasiblePlan when some D_l < 1.
FronthaulPlan make_plan(double capacity, std::vector<int> chains);

// Diagonal alpha-normalized quantization covariance Q^ (entries w^2).
struct QuantizationCovariance
{
    RVector diagonal;         // Mbar entries
    std::vector<int> offsets; // L+1 entries, block boundaries

    int L() const { return static_cast<int>(offsets.size()) - 1; }
    double trace(int l) const;
    RVector block(int l) const;
};

// w^2_{l,m} = 3 * 2^(-2 D_l) * sum_k p_k |f_BB,k,l,m|^2 on the unscaled F_BB.
QuantizationCovariance quant_noise(const CMatrix &F_BB, const RVector &p, const FronthaulPlan &plan);

struct PsiTerms
{
    RVector psi1; // per RRH: transmit power of the unscaled precoder
    RVector psi2; // per UE: quantization noise leaked to the UE
    RVector psi3; // per UE: multiuser interference
    RVector psi4; // per UE: h_k^H F_RF C^-1 F_RF^H h_k
};

// Instantaneous terms for an effective channel G = H F_RF and the unscaled RZF
// precoder F_BB = C^-1 G^H (every term uses that same C).
PsiTerms instantaneous_psis(const CMatrix &G, const AnalogBeamformer &analog, const CMatrix &F_BB, const RVector &p,
                            const QuantizationCovariance &Qhat);

struct AlphaResult
{
    double alpha = 0.0;
    int l_hat = 0;
    RVector rrh_power; // alpha^2 (Psi1_l + Tr Q^_l)
};

// alpha = sqrt(P_tot / (Psi1_lhat + Tr Q^_lhat)) where lhat maximizes Psi1_l + Tr Q^_l
// (smallest index on ties).
AlphaResult alpha_star(const PsiTerms &psi, const QuantizationCovariance &Qhat, double P_tot);

} // namespace cranhp

#endif
