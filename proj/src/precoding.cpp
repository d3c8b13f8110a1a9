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

#include "cranhp/precoding.hpp"

#include <cmath>
#include <stdexcept>

namespace cranhp
{

const char *to_string(Combining c)
{
    switch (c)
    {
    case Combining::TraceWeighted:
        return "trace_weighted";
    case Combining::Equal:
        return "equal";
    }
    return "unknown";
}

CMatrix combine_covariances(std::span<const CMatrix> covariances, Combining mode)
{
    if (covariances.empty())
        throw std::invalid_argument("combine_covariances: need at least one covariance");
    const auto n = covariances.front().rows();
    CMatrix out = CMatrix::Zero(n, n);
    for (const auto &R : covariances)
    {
        if (R.rows() != n || R.cols() != n)
            throw std::invalid_argument("combine_covariances: dimension mismatch");
        const double tr = R.trace().real();
        if (!(tr > 0.0))
            throw std::invalid_argument("combine_covariances: covariance with zero trace");
        out += mode == Combining::TraceWeighted ? CMatrix(R / tr) : R;
    }
    return 0.5 * (out + out.adjoint());
}

CMatrix analog_beamformer(const HermitianEigen &eig, int M)
{
    if (M < 1 || M > eig.vectors.cols())
        throw std::invalid_argument("analog_beamformer: number of RF chains out of range");
    return eig.vectors.leftCols(M);
}

CMatrix analog_beamformer(const CMatrix &combined, int M)
{
    if (M < 1 || M > combined.rows())
        throw std::invalid_argument("analog_beamformer: number of RF chains out of range");
    return analog_beamformer(hermitian_eig(combined), M);
}

CMatrix unit_modulus_project(const CMatrix &F, int N)
{
    if (N < 1)
        throw std::invalid_argument("unit_modulus_project: N must be positive");
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    CMatrix out(F.rows(), F.cols());
    for (Eigen::Index j = 0; j < F.cols(); ++j)
        for (Eigen::Index i = 0; i < F.rows(); ++i)
        {
            const cdouble z = F(i, j);
            out(i, j) = z == cdouble(0.0) ? cdouble(scale) : std::polar(scale, std::arg(z));
        }
    return out;
}

CMatrix rzf_digital(const CMatrix &G, double beta, int Nbar)
{
    if (beta < 0.0)
        throw std::invalid_argument("rzf_digital: beta must be nonnegative");
    const auto K = G.rows();
    CMatrix gram = G * G.adjoint();
    gram.diagonal().array() += static_cast<double>(Nbar) * beta;

    // Hermitian positive definite whenever beta > 0 or G has full row rank
    Eigen::LDLT<CMatrix> ldlt(gram);
    if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-15))
        throw NumericError("rzf_digital: G G^H + Nbar*beta*I is singular");
    return G.adjoint() * ldlt.solve(CMatrix::Identity(K, K));
}

AnalogBeamformer::AnalogBeamformer(std::vector<CMatrix> per_rrh, bool constrained)
    : blocks_(std::move(per_rrh)), constrained_(constrained)
{
    if (blocks_.empty())
        throw std::invalid_argument("AnalogBeamformer: need at least one RRH");
    N_ = static_cast<int>(blocks_.front().rows());
    for (const auto &b : blocks_)
    {
        if (b.rows() != N_ || b.cols() < 1)
            throw std::invalid_argument("AnalogBeamformer: inconsistent block dimensions");
        offsets_.push_back(offsets_.back() + static_cast<int>(b.cols()));
    }
    aggregate_ = block_diag(blocks_);
}

std::vector<int> AnalogBeamformer::chain_counts() const
{
    std::vector<int> out;
    for (const auto &b : blocks_)
        out.push_back(static_cast<int>(b.cols()));
    return out;
}

CMatrix AnalogBeamformer::effective_channel(const CMatrix &H) const
{
    if (H.cols() != Nbar())
        throw std::invalid_argument("effective_channel: H must have Nbar columns");
    CMatrix G(H.rows(), Mbar());
    for (int l = 0; l < L(); ++l)
        G.middleCols(offset(l), chains(l)).noalias() = H.middleCols(l * N_, N_) * blocks_[l];
    return G;
}

CMatrix AnalogBeamformer::effective_covariance(std::span<const CMatrix> blocks) const
{
    if (static_cast<int>(blocks.size()) != L())
        throw std::invalid_argument("effective_covariance: need one block per RRH");
    CMatrix out = CMatrix::Zero(Mbar(), Mbar());
    for (int l = 0; l < L(); ++l)
        out.block(offset(l), offset(l), chains(l), chains(l)).noalias() =
            blocks_[l].adjoint() * blocks[l] * blocks_[l];
    return 0.5 * (out + out.adjoint());
}

AnalogBeamformer AnalogBeamformer::projected() const
{
    std::vector<CMatrix> out;
    for (const auto &b : blocks_)
        out.push_back(unit_modulus_project(b, N_));
    return AnalogBeamformer(std::move(out), true);
}

AnalogBeamformer identity_beamformer(int N, int L)
{
    return AnalogBeamformer(std::vector<CMatrix>(L, CMatrix::Identity(N, N)), false);
}

ShapingMatrices shaping(int l, int N, std::span<const int> chains)
{
    const int L = static_cast<int>(chains.size());
    if (l < 0 || l >= L)
        throw std::out_of_range("shaping: RRH index out of range");
    int Mbar = 0, before = 0;
    for (int i = 0; i < L; ++i)
    {
        if (chains[i] < 1)
            throw std::invalid_argument("shaping: chain counts must be positive");
        if (i < l)
            before += chains[i];
        Mbar += chains[i];
    }
    ShapingMatrices s;
    s.antenna = CMatrix::Zero(static_cast<Eigen::Index>(N) * L, N);
    s.antenna.block(static_cast<Eigen::Index>(l) * N, 0, N, N).setIdentity();
    s.chain = CMatrix::Zero(Mbar, chains[l]);
    s.chain.block(before, 0, chains[l], chains[l]).setIdentity();
    return s;
}

RMatrix entry_selector(int m, int M_l)
{
    if (m < 0 || m >= M_l)
        throw std::out_of_range("entry_selector: index out of range");
    RMatrix E = RMatrix::Zero(M_l, M_l);
    E(m, m) = 1.0;
    return E;
}

CMatrix effective_Rk(const CMatrix &F_RF, const CMatrix &R_k)
{
    if (R_k.rows() != F_RF.rows() || R_k.cols() != F_RF.rows())
        throw std::invalid_argument("effective_Rk: dimension mismatch");
    CMatrix out = F_RF.adjoint() * R_k * F_RF;
    return 0.5 * (out + out.adjoint());
}

} // namespace cranhp
