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

#ifndef CRANHP_DETEQUIV_HPP
#define CRANHP_DETEQUIV_HPP

#include "cranhp/fronthaul.hpp"
#include "cranhp/numerics.hpp"
#include "cranhp/precoding.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace cranhp
{

class ConvergenceError : public std::runtime_error
{
public:
    ConvergenceError(const std::string &what, int iterations, double residual)
        : std::runtime_error(what), iterations(iterations), residual(residual)
    {
    }
    int iterations;
    double residual;
};

struct FixedPointOptions
{
    double tol = 1e-10;  // max relative change between iterates
    int max_iters = 1000;
};

struct FixedPointSolution
{
    RVector e;
    CMatrix T;
    int iterations = 0;
    double residual = 0.0; // max_k |e_k - Tr(R^_k T(e))/Nbar| / max(e_k, tiny)
};

// T(e) = ((1/Nbar) sum_i R^_i / (1 + e_i) + beta I)^-1
CMatrix resolvent(std::span<const CMatrix> Rhat, const RVector &e, double beta, int Nbar);

// Plain iteration e_k <- Tr(R^_k T(e)) / Nbar started from e0 (1/rho in the RZF setting).
FixedPointSolution fixed_point_e(std::span<const CMatrix> Rhat, double beta, int Nbar, double e0,
                                 const FixedPointOptions &opts = {});

// Converged fixed point together with everything needed to differentiate it.
//
// For a Hermitian direction B, e'_B solves (I - J) e'_B = v_B where
//   J_ij    = Tr(R^_i T R^_j T) / (Nbar^2 (1 + e_j)^2)
//   [v_B]_k = Tr(R^_k T B T) / Nbar
// and T'_B = T (B + (1/Nbar) sum_i R^_i e'_i / (1 + e_i)^2) T. The state is immutable
// once built.
class DetEquivState
{
public:
    DetEquivState(std::vector<CMatrix> Rhat, double beta, int Nbar, double e0, const FixedPointOptions &opts = {});

    int K() const { return static_cast<int>(Rhat_.size()); }
    int Mbar() const { return static_cast<int>(T_.rows()); }
    int Nbar() const { return Nbar_; }
    double beta() const { return beta_; }

    const std::vector<CMatrix> &Rhat() const { return Rhat_; }
    const RVector &e() const { return e_; }
    const CMatrix &T() const { return T_; }
    const RMatrix &J() const { return J_; }
    int iterations() const { return iterations_; }
    double residual() const { return residual_; }
    double spectral_radius() const { return spectral_radius_; }

    RVector v(const CMatrix &B) const;
    RVector e_prime(const CMatrix &B) const;
    CMatrix t_prime(const CMatrix &B, const RVector &e_prime) const;

    // e'_B for every single-entry diagonal selector B_g = e_g e_g^T at once (K x Mbar).
    RMatrix e_prime_diagonal_selectors() const;

    // Solves (I - J) X = V for a K x n right-hand side.
    RMatrix solve(const RMatrix &V) const;

private:
    std::vector<CMatrix> Rhat_;
    std::vector<CMatrix> W_; // T R^_k T
    CMatrix T_;
    RVector e_;
    RMatrix J_;
    Eigen::PartialPivLU<RMatrix> lu_;
    double beta_ = 0.0;
    int Nbar_ = 0;
    int iterations_ = 0;
    double residual_ = 0.0;
    double spectral_radius_ = 0.0;
};

// Normalization of the large-scale power and interference terms. The limits of
// h^H C^-1 B C^-1 h and Tr(R^_i C^-1 R^_k C^-1) are e'/Nbar, one factor of
// 1/Nbar beyond the normalized derivative e'. The Monte Carlo oracle test pins
// both to 1/Nbar.
struct TermScale
{
    static double power(int Nbar) { return 1.0 / Nbar; }        // Psi1 and Q bar
    static double interference(int Nbar) { return 1.0 / Nbar; } // Psi3
};

// Large-scale terms that do not depend on the fronthaul capacity.
struct LargeScaleTerms
{
    RVector psi1;           // per RRH
    RVector psi3;           // per UE
    RVector psi4;           // per UE, e/(1+e)
    RVector qbar_unit;      // Mbar, Q bar diagonal without the 3*2^(-2D) factor
    RMatrix rhat_diagonal;  // K x Mbar, real diagonals of R^_k
    std::vector<int> offsets;
};

LargeScaleTerms large_scale_terms(const DetEquivState &state, const AnalogBeamformer &analog, const RVector &p);

struct DeterministicPsis
{
    RVector psi1;
    RVector psi2;
    RVector psi3;
    RVector psi4;
    RVector qbar;             // Mbar diagonal of Q bar
    std::vector<int> offsets; // block boundaries of qbar
    int l_bar = 0;

    double qbar_trace(int l) const { return qbar.segment(offsets[l], offsets[l + 1] - offsets[l]).sum(); }
};

// Applies the plan's quantization to the capacity-independent terms.
DeterministicPsis deterministic_psis(const LargeScaleTerms &terms, const FronthaulPlan &plan);

DeterministicPsis deterministic_psis(const DetEquivState &state, const AnalogBeamformer &analog,
                                     const FronthaulPlan &plan, const RVector &p);

// p_k Psi4^2 / (Psi3 + Psi2 + (Tr Q_lbar + Psi1_lbar) / rho)
RVector large_scale_sinr(const DeterministicPsis &psi, const RVector &p, double rho);

double sum_rate(const RVector &sinr);

// ZF variant for a single RRH: e_k = Tr(R^_k Tz) / N, Tz = ((1/N) sum R^_i / e_i + I)^-1.
struct ZfDetState
{
    RVector ebar;
    CMatrix Tbar;
    int iterations = 0;
    double residual = 0.0;

    RVector traces(std::span<const CMatrix> Rhat) const; // Tr(R^_k Tbar)
};

ZfDetState zf_fixed_point(std::span<const CMatrix> Rhat, int N, const FixedPointOptions &opts = {});

double slnr_bar(const ZfDetState &state, std::span<const CMatrix> Rhat);

// (sum_k 1/Tr(R^_k Tbar))^-1 and its arithmetic-mean bound (1/K^2) sum_k Tr(R^_k Tbar).
double zf_harmonic_sinr(const ZfDetState &state, std::span<const CMatrix> Rhat);
double zf_sinr_upper_bound(const ZfDetState &state, std::span<const CMatrix> Rhat);

} // namespace cranhp

#endif
