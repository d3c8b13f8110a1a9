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

#include "cranhp/detequiv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace cranhp
{

namespace
{

// Re Tr(A B)
double trace_product(const CMatrix &A, const CMatrix &B)
{
    return A.cwiseProduct(B.transpose()).sum().real();
}

CMatrix hermitian_inverse(const CMatrix &S)
{
    const auto n = S.rows();
    Eigen::LLT<CMatrix> llt(S);
    if (llt.info() != Eigen::Success)
        throw NumericError("resolvent: matrix is not positive definite");
    CMatrix T = llt.solve(CMatrix::Identity(n, n));
    return 0.5 * (T + T.adjoint());
}

void check_rhat(std::span<const CMatrix> Rhat)
{
    if (Rhat.empty())
        throw std::invalid_argument("deterministic equivalent: need at least one UE");
    const auto m = Rhat.front().rows();
    for (const auto &R : Rhat)
        if (R.rows() != m || R.cols() != m || m == 0)
            throw std::invalid_argument("deterministic equivalent: effective covariances must share a square shape");
}

constexpr int kPlainWarmup = 50;

double relative_gap(double next, double prev)
{
    const double gap = std::abs(next - prev);
    const double ref = std::max(std::abs(next), std::abs(prev));
    return ref > 0.0 ? gap / ref : 0.0;
}

// Replaces `next` = f(e) by the Newton iterate e + (I - Jf)^-1 (f(e) - e), where
// Jf(i, j) = Tr(R^_i T R^_j T) weight_j / n^2, unless that leaves the positive orthant.
void newton_update(std::span<const CMatrix> Rhat, const CMatrix &T, double inv_n, const RVector &weight,
                   const RVector &e, RVector &next)
{
    const auto K = e.size();
    std::vector<CMatrix> W;
    W.reserve(K);
    for (Eigen::Index j = 0; j < K; ++j)
        W.push_back(T * Rhat[j] * T);
    RMatrix A = RMatrix::Identity(K, K);
    for (Eigen::Index i = 0; i < K; ++i)
        for (Eigen::Index j = 0; j < K; ++j)
            A(i, j) -= inv_n * inv_n * trace_product(Rhat[i], W[j]) * weight(j);
    const RVector newton = e + A.partialPivLu().solve(next - e);
    if (newton.allFinite() && (newton.array() > 0.0).all())
        next = newton;
}

} // namespace

CMatrix resolvent(std::span<const CMatrix> Rhat, const RVector &e, double beta, int Nbar)
{
    check_rhat(Rhat);
    const auto m = Rhat.front().rows();
    CMatrix S = CMatrix::Zero(m, m);
    for (std::size_t i = 0; i < Rhat.size(); ++i)
        S += Rhat[i] / (static_cast<double>(Nbar) * (1.0 + e(static_cast<Eigen::Index>(i))));
    S.diagonal().array() += beta;
    return hermitian_inverse(S);
}

FixedPointSolution fixed_point_e(std::span<const CMatrix> Rhat, double beta, int Nbar, double e0,
                                 const FixedPointOptions &opts)
{
    check_rhat(Rhat);
    if (!(beta > 0.0))
        throw std::invalid_argument("fixed_point_e: beta must be positive");
    if (Nbar < 1)
        throw std::invalid_argument("fixed_point_e: Nbar must be positive");

    const auto K = static_cast<Eigen::Index>(Rhat.size());
    const double inv_n = 1.0 / Nbar;
    RVector e = RVector::Constant(K, e0);
    RVector next(K);
    CMatrix T;
    double change = std::numeric_limits<double>::infinity();
    int it = 0;
    while (it < opts.max_iters)
    {
        T = resolvent(Rhat, e, beta, Nbar);
        for (Eigen::Index k = 0; k < K; ++k)
            next(k) = inv_n * trace_product(Rhat[k], T);

        // Plain iteration contracts slowly when Mbar is close to K; Newton on
        // e - f(e) takes over after a warm-up.
        if (it >= kPlainWarmup)
        {
            RVector weight(K);
            for (Eigen::Index j = 0; j < K; ++j)
                weight(j) = 1.0 / ((1.0 + e(j)) * (1.0 + e(j)));
            newton_update(Rhat, T, inv_n, weight, e, next);
        }

        change = 0.0;
        for (Eigen::Index k = 0; k < K; ++k)
            change = std::max(change, relative_gap(next(k), e(k)));
        e = next;
        ++it;
        if (change <= opts.tol)
            break;
    }
    if (change > opts.tol)
        throw ConvergenceError("fixed_point_e: no convergence within the iteration budget", it, change);

    FixedPointSolution out;
    out.e = e;
    out.T = resolvent(Rhat, e, beta, Nbar);
    out.iterations = it;
    for (Eigen::Index k = 0; k < K; ++k)
        out.residual = std::max(out.residual, relative_gap(inv_n * trace_product(Rhat[k], out.T), e(k)));
    return out;
}

DetEquivState::DetEquivState(std::vector<CMatrix> Rhat, double beta, int Nbar, double e0,
                             const FixedPointOptions &opts)
    : Rhat_(std::move(Rhat)), beta_(beta), Nbar_(Nbar)
{
    auto sol = fixed_point_e(Rhat_, beta, Nbar, e0, opts);
    e_ = std::move(sol.e);
    T_ = std::move(sol.T);
    iterations_ = sol.iterations;
    residual_ = sol.residual;

    const int K = this->K();
    W_.reserve(K);
    for (const auto &R : Rhat_)
        W_.push_back(T_ * R * T_);

    const double n2 = static_cast<double>(Nbar_) * Nbar_;
    J_.resize(K, K);
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j)
            J_(i, j) = trace_product(Rhat_[i], W_[j]) / (n2 * (1.0 + e_(j)) * (1.0 + e_(j)));

    spectral_radius_ = Eigen::EigenSolver<RMatrix>(J_, false).eigenvalues().cwiseAbs().maxCoeff();
    if (!(spectral_radius_ < 1.0))
        throw NumericError("DetEquivState: spectral radius of J is not below one");
    lu_ = Eigen::PartialPivLU<RMatrix>(RMatrix::Identity(K, K) - J_);
}

RVector DetEquivState::v(const CMatrix &B) const
{
    if (B.rows() != Mbar() || B.cols() != Mbar())
        throw std::invalid_argument("DetEquivState::v: B must be Mbar x Mbar");
    RVector out(K());
    for (int k = 0; k < K(); ++k)
        out(k) = trace_product(B, W_[k]) / Nbar_;
    return out;
}

RMatrix DetEquivState::solve(const RMatrix &V) const
{
    if (V.rows() != K())
        throw std::invalid_argument("DetEquivState::solve: right-hand side must have K rows");
    return lu_.solve(V);
}

RVector DetEquivState::e_prime(const CMatrix &B) const
{
    return solve(v(B));
}

CMatrix DetEquivState::t_prime(const CMatrix &B, const RVector &e_prime) const
{
    CMatrix inner = B;
    for (int i = 0; i < K(); ++i)
        inner += Rhat_[i] * (e_prime(i) / (static_cast<double>(Nbar_) * (1.0 + e_(i)) * (1.0 + e_(i))));
    return T_ * inner * T_;
}

RMatrix DetEquivState::e_prime_diagonal_selectors() const
{
    RMatrix V(K(), Mbar());
    for (int k = 0; k < K(); ++k)
        V.row(k) = W_[k].diagonal().real().transpose() / Nbar_;
    return solve(V);
}

LargeScaleTerms large_scale_terms(const DetEquivState &state, const AnalogBeamformer &analog, const RVector &p)
{
    const int K = state.K();
    const int Nbar = state.Nbar();
    if (analog.Mbar() != state.Mbar())
        throw std::invalid_argument("large_scale_terms: beamformer does not match the state dimensions");
    if (p.size() != K)
        throw std::invalid_argument("large_scale_terms: one power per UE required");

    const RVector &e = state.e();
    RVector weight(K); // p_k / (1 + e_k)^2
    for (int k = 0; k < K; ++k)
        weight(k) = p(k) / ((1.0 + e(k)) * (1.0 + e(k)));

    LargeScaleTerms out;
    out.offsets.push_back(0);
    for (int l = 0; l < analog.L(); ++l)
        out.offsets.push_back(out.offsets.back() + analog.chains(l));

    const double s_power = TermScale::power(Nbar);
    const double s_interf = TermScale::interference(Nbar);

    // Q bar: B_{m,l} are single-entry diagonal selectors
    const RMatrix eprime_sel = state.e_prime_diagonal_selectors();
    out.qbar_unit = s_power * (eprime_sel.transpose() * weight);

    out.psi1.resize(analog.L());
    for (int l = 0; l < analog.L(); ++l)
    {
        CMatrix B = CMatrix::Zero(state.Mbar(), state.Mbar());
        B.block(analog.offset(l), analog.offset(l), analog.chains(l), analog.chains(l)) =
            analog.block(l).adjoint() * analog.block(l);
        out.psi1(l) = s_power * state.e_prime(B).dot(weight);
    }

    out.psi4 = e.array() / (1.0 + e.array());

    // v_{R^_k} = Nbar (1 + e_k)^2 J(:, k)
    const RMatrix &J = state.J();
    RMatrix V(K, K);
    for (int k = 0; k < K; ++k)
        V.col(k) = static_cast<double>(Nbar) * (1.0 + e(k)) * (1.0 + e(k)) * J.col(k);
    const RMatrix eprime_r = state.solve(V); // column k is e'_{R^_k}
    out.psi3.resize(K);
    for (int k = 0; k < K; ++k)
    {
        double acc = 0.0;
        for (int i = 0; i < K; ++i)
            if (i != k)
                acc += weight(i) * eprime_r(i, k);
        out.psi3(k) = s_interf * acc / ((1.0 + e(k)) * (1.0 + e(k)));
    }

    out.rhat_diagonal.resize(K, state.Mbar());
    for (int k = 0; k < K; ++k)
        out.rhat_diagonal.row(k) = state.Rhat()[k].diagonal().real().transpose();
    return out;
}

DeterministicPsis deterministic_psis(const LargeScaleTerms &terms, const FronthaulPlan &plan)
{
    if (static_cast<int>(terms.offsets.size()) != plan.L() + 1)
        throw std::invalid_argument("deterministic_psis: plan does not match the number of RRHs");
    for (int l = 0; l < plan.L(); ++l)
        if (terms.offsets[l + 1] - terms.offsets[l] != plan.chains[l])
            throw std::invalid_argument("deterministic_psis: plan does not match the RF chain counts");

    DeterministicPsis out;
    out.psi1 = terms.psi1;
    out.psi3 = terms.psi3;
    out.psi4 = terms.psi4;
    out.offsets = terms.offsets;
    out.qbar = terms.qbar_unit;
    for (int l = 0; l < plan.L(); ++l)
    {
        const double factor = quantization_factor(plan.bits[l]);
        out.qbar.segment(terms.offsets[l], plan.chains[l]) *= factor;
    }
    out.psi2 = terms.rhat_diagonal * out.qbar;

    out.l_bar = 0;
    for (int l = 1; l < plan.L(); ++l)
        if (out.psi1(l) + out.qbar_trace(l) > out.psi1(out.l_bar) + out.qbar_trace(out.l_bar))
            out.l_bar = l;
    return out;
}

DeterministicPsis deterministic_psis(const DetEquivState &state, const AnalogBeamformer &analog,
                                     const FronthaulPlan &plan, const RVector &p)
{
    return deterministic_psis(large_scale_terms(state, analog, p), plan);
}

RVector large_scale_sinr(const DeterministicPsis &psi, const RVector &p, double rho)
{
    if (!(rho > 0.0))
        throw std::invalid_argument("large_scale_sinr: rho must be positive");
    const auto K = psi.psi4.size();
    const double power_term = (psi.qbar_trace(psi.l_bar) + psi.psi1(psi.l_bar)) / rho;
    RVector out(K);
    for (Eigen::Index k = 0; k < K; ++k)
    {
        const double denom = psi.psi3(k) + psi.psi2(k) + power_term;
        if (!(denom > 0.0))
            throw NumericError("large_scale_sinr: zero denominator");
        out(k) = p(k) * psi.psi4(k) * psi.psi4(k) / denom;
    }
    return out;
}

double sum_rate(const RVector &sinr)
{
    double total = 0.0;
    for (Eigen::Index k = 0; k < sinr.size(); ++k)
        total += std::log2(1.0 + sinr(k));
    return total;
}

RVector ZfDetState::traces(std::span<const CMatrix> Rhat) const
{
    RVector out(static_cast<Eigen::Index>(Rhat.size()));
    for (std::size_t k = 0; k < Rhat.size(); ++k)
        out(static_cast<Eigen::Index>(k)) = trace_product(Rhat[k], Tbar);
    return out;
}

ZfDetState zf_fixed_point(std::span<const CMatrix> Rhat, int N, const FixedPointOptions &opts)
{
    check_rhat(Rhat);
    constexpr double floor = 1e-14;
    const auto K = static_cast<Eigen::Index>(Rhat.size());
    const auto m = Rhat.front().rows();
    const double inv_n = 1.0 / N;

    auto tbar = [&](const RVector &e) {
        CMatrix S = CMatrix::Identity(m, m);
        for (Eigen::Index i = 0; i < K; ++i)
            S += Rhat[i] * (inv_n / e(i));
        return hermitian_inverse(S);
    };

    RVector e = RVector::Ones(K);
    RVector next(K);
    double change = std::numeric_limits<double>::infinity();
    int it = 0;
    while (it < opts.max_iters)
    {
        const CMatrix T = tbar(e);
        for (Eigen::Index k = 0; k < K; ++k)
            next(k) = std::max(floor, inv_n * trace_product(Rhat[k], T));
        if (it >= kPlainWarmup)
            newton_update(Rhat, T, inv_n, e.array().square().inverse().matrix(), e, next);
        change = 0.0;
        for (Eigen::Index k = 0; k < K; ++k)
            change = std::max(change, relative_gap(next(k), e(k)));
        e = next;
        ++it;
        if (change <= opts.tol)
            break;
    }
    if (change > opts.tol)
        throw ConvergenceError("zf_fixed_point: no convergence within the iteration budget", it, change);
    if ((e.array() <= floor).any())
        throw NumericError("zf_fixed_point: some e collapsed to zero (rank-deficient effective covariance)");

    ZfDetState out;
    out.ebar = e;
    out.Tbar = tbar(e);
    out.iterations = it;
    for (Eigen::Index k = 0; k < K; ++k)
        out.residual = std::max(out.residual, relative_gap(inv_n * trace_product(Rhat[k], out.Tbar), e(k)));
    return out;
}

double slnr_bar(const ZfDetState &state, std::span<const CMatrix> Rhat)
{
    return state.traces(Rhat).sum();
}

double zf_harmonic_sinr(const ZfDetState &state, std::span<const CMatrix> Rhat)
{
    return 1.0 / state.traces(Rhat).cwiseInverse().sum();
}

double zf_sinr_upper_bound(const ZfDetState &state, std::span<const CMatrix> Rhat)
{
    const double K = static_cast<double>(Rhat.size());
    return state.traces(Rhat).sum() / (K * K);
}

} // namespace cranhp
